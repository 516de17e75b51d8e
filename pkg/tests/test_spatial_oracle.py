import numpy as np
import pytest

from spectralchain.core.exceptions import DimensionError, SupportBoundsError
from spectralchain.oracle.spatial import (
    circular_conv2,
    direct_conv2,
    naive_dft2,
    position_mask,
    relu_pointwise,
    truncation_lowpass_oracle,
)
from spectralchain.oracle.support import SupportBox
from spectralchain.transforms.maps import SpatialMap

IMAGE = SpatialMap.from_rows([[1, 2], [3, 4]])


def test_01_delta_kernel_is_identity():
    out = direct_conv2(IMAGE, SpatialMap.from_rows([[1]]))
    np.testing.assert_array_equal(out.samples, IMAGE.samples)


def test_02_ones_kernel_full_convolution():
    out = direct_conv2(IMAGE, SpatialMap(np.ones((2, 2))))
    np.testing.assert_array_equal(out.samples, [[1, 3, 2], [4, 10, 6], [3, 7, 4]])


def test_03_zero_kernel_annihilates():
    out = direct_conv2(IMAGE, SpatialMap(np.zeros((3, 2))))
    assert out.shape == (4, 3)
    assert np.all(out.samples == 0.0)


def test_04_direct_conv_is_commutative_on_integers():
    rng = np.random.default_rng(4)
    f = SpatialMap(rng.integers(-5, 6, size=(5, 4)).astype(float))
    g = SpatialMap(rng.integers(-5, 6, size=(3, 3)).astype(float))
    np.testing.assert_array_equal(direct_conv2(f, g).samples, direct_conv2(g, f).samples)


def test_05_direct_conv_is_linear():
    rng = np.random.default_rng(5)
    f1 = SpatialMap(rng.integers(-3, 4, size=(4, 4)).astype(float))
    f2 = SpatialMap(rng.integers(-3, 4, size=(4, 4)).astype(float))
    g = SpatialMap(rng.integers(-3, 4, size=(2, 3)).astype(float))
    lhs = direct_conv2(SpatialMap(2 * f1.samples - f2.samples), g).samples
    rhs = 2 * direct_conv2(f1, g).samples - direct_conv2(f2, g).samples
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_06_relu_cases():
    np.testing.assert_array_equal(relu_pointwise(SpatialMap.from_rows([[-1, 2]])).samples, [[0, 2]])
    assert np.all(relu_pointwise(SpatialMap(-np.ones((2, 3)))).samples == 0.0)
    positive = SpatialMap(np.arange(6.0).reshape(2, 3))
    np.testing.assert_array_equal(relu_pointwise(positive).samples, positive.samples)


def test_07_relu_is_idempotent_and_monotone():
    rng = np.random.default_rng(7)
    m1 = SpatialMap(rng.normal(size=(6, 6)))
    m2 = SpatialMap(m1.samples + np.abs(rng.normal(size=(6, 6))))
    once = relu_pointwise(m1)
    np.testing.assert_array_equal(relu_pointwise(once).samples, once.samples)
    assert np.all(relu_pointwise(m1).samples <= relu_pointwise(m2).samples)


def test_08_position_mask_cases():
    m = SpatialMap(np.arange(9.0).reshape(3, 3))
    np.testing.assert_array_equal(position_mask(m, SupportBox(3, 3)).samples, m.samples)

    ones = position_mask(SpatialMap(np.ones((3, 3))), SupportBox(2, 2)).samples
    np.testing.assert_array_equal(ones, [[1, 1, 0], [1, 1, 0], [0, 0, 0]])

    m4 = SpatialMap(np.arange(1.0, 17.0).reshape(4, 4))
    expected = m4.samples.copy()
    expected[2:, :] = 0.0
    expected[:, 3] = 0.0
    masked = position_mask(m4, SupportBox(2, 3))
    np.testing.assert_array_equal(masked.samples, expected)
    np.testing.assert_array_equal(position_mask(masked, SupportBox(2, 3)).samples, expected)


def test_09_position_mask_rejects_oversized_box():
    with pytest.raises(SupportBoundsError):
        position_mask(SpatialMap(np.ones((3, 3))), SupportBox(4, 1))


def test_10_support_box_must_be_positive():
    with pytest.raises(DimensionError):
        SupportBox(0, 3)


def test_11_circular_conv_cases():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    delta = np.zeros((3, 4))
    delta[0, 0] = 1.0
    np.testing.assert_allclose(circular_conv2(a, delta), a, atol=1e-12)
    assert np.all(circular_conv2(np.zeros((3, 4)), a) == 0)

    shifted = circular_conv2(np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]]))
    np.testing.assert_allclose(shifted, [[0, 1], [0, 0]], atol=1e-12)


def test_12_circular_conv_rejects_mismatched_grids():
    with pytest.raises(DimensionError):
        circular_conv2(np.zeros((2, 2)), np.zeros((2, 3)))


def test_13_truncation_oracle_full_size_is_identity():
    rng = np.random.default_rng(13)
    m = SpatialMap(rng.normal(size=(5, 6)))
    out = truncation_lowpass_oracle(m, 5, 6)
    np.testing.assert_allclose(out.samples, m.samples, atol=1e-12)


def test_14_truncation_oracle_dc_only_is_mean():
    rng = np.random.default_rng(14)
    m = SpatialMap(rng.normal(size=(4, 7)))
    out = truncation_lowpass_oracle(m, 1, 1)
    assert out.shape == (1, 1)
    assert out.samples[0, 0] == pytest.approx(float(np.mean(m.samples)), abs=1e-12)


def test_15_truncation_oracle_on_ramp():
    ramp = SpatialMap(np.arange(16.0).reshape(4, 4))
    out = truncation_lowpass_oracle(ramp, 2, 2)
    # frequencies {-1, 0} per axis; the Nyquist terms of a ramp are real
    spectrum = np.fft.fft2(ramp.samples)
    block = spectrum[np.ix_([0, 3], [0, 3])]
    expected = np.real(np.fft.ifft2(block)) * 4 / 16
    np.testing.assert_allclose(out.samples, expected, atol=1e-10)
    assert out.samples.mean() == pytest.approx(ramp.samples.mean())


def test_16_truncation_oracle_rejects_growth():
    with pytest.raises(DimensionError):
        truncation_lowpass_oracle(SpatialMap(np.ones((2, 2))), 3, 1)


def test_17_naive_dft_of_delta_is_flat():
    delta = SpatialMap.from_rows([[1.0]])
    np.testing.assert_allclose(naive_dft2(delta, 3, 5), np.ones((3, 5)), atol=1e-15)


def test_18_direct_conv_is_bitwise_commutative_on_floats():
    rng = np.random.default_rng(41)
    for _ in range(50):
        f = SpatialMap(rng.uniform(-1.0, 1.0, size=(6, 5)))
        g = SpatialMap(rng.uniform(-1.0, 1.0, size=(3, 4)))
        np.testing.assert_array_equal(direct_conv2(f, g).samples, direct_conv2(g, f).samples)
    a, b = (SpatialMap(rng.uniform(-1.0, 1.0, size=(4, 4))) for _ in range(2))
    np.testing.assert_array_equal(direct_conv2(a, b).samples, direct_conv2(b, a).samples)
