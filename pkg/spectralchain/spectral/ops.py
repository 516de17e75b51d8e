"""
Frequency-domain operations: convolution, multichannel accumulation,
Heaviside spectra, the multiplication theorem (`l_multiply`), spectral
activation, spectral pooling and grid changes.

All spectra use the unnormalized DFT convention of `transforms.fourier`.
"""

import functools
from typing import Sequence, Union

import numpy as np

from spectralchain.core.exceptions import (
    DimensionError,
    EmptyKernelSetError,
    SpectralConfigurationError,
    SupportBoundsError,
)
from spectralchain.core.modes import LMultiplyMethod, coerce_mode
from spectralchain.oracle.support import SupportBox
from spectralchain.transforms.fourier import embedded_forward, embedded_inverse
from spectralchain.transforms.maps import SpectralMap
from spectralchain.transforms.tally import TransformKind, record_transform


def _require_same_grid(a: SpectralMap, b: SpectralMap, operation: str) -> None:
    if a.padded_shape != b.padded_shape:
        raise DimensionError(
            operation,
            f"padded grids differ: {a.padded_shape} vs {b.padded_shape}",
        )


def support_bounds(
    image_height: int, image_width: int, kernel_height: int, kernel_width: int
) -> SupportBox:
    """
    Exact support of a full linear convolution: supports add, so the output
    spans (H + N - 1) x (W + M - 1).
    """
    dims = (image_height, image_width, kernel_height, kernel_width)
    if min(dims) < 1:
        raise DimensionError("support_bounds", f"all dimensions must be >= 1, got {dims}")
    return SupportBox(image_height + kernel_height - 1, image_width + kernel_width - 1)


def spectral_conv(image_spec: SpectralMap, kernel_spec: SpectralMap) -> SpectralMap:
    """
    Convolution theorem: the coefficient-wise product of two spectra.

    The result records the support of the linear convolution as its source.
    The padded grid must already hold that support, otherwise circular
    wrap-around would leak into the result.
    """
    _require_same_grid(image_spec, kernel_spec, "spectral_conv")
    box = support_bounds(*image_spec.source_shape, *kernel_spec.source_shape)
    if not box.fits(*image_spec.padded_shape):
        raise DimensionError(
            "spectral_conv",
            f"padded grid {image_spec.padded_shape} cannot hold convolution "
            f"support {box.as_tuple()}",
        )
    return SpectralMap(image_spec.coefficients * kernel_spec.coefficients, box.p, box.q)


def multichannel_spectral_conv(
    image_spec: SpectralMap, kernel_specs: Sequence[SpectralMap]
) -> SpectralMap:
    """
    Sum over channels of `spectral_conv(image_spec, kernel_specs[i])`, taken in
    the frequency domain in channel order.
    """
    if len(kernel_specs) == 0:
        raise EmptyKernelSetError()
    total = spectral_conv(image_spec, kernel_specs[0])
    coefficients = np.array(total.coefficients)
    p, q = total.source_shape
    for kernel_spec in kernel_specs[1:]:
        product = spectral_conv(image_spec, kernel_spec)
        coefficients += product.coefficients
        p = max(p, product.source_height)
        q = max(q, product.source_width)
    return SpectralMap(coefficients, p, q)


def _dirichlet_profile(extent: int, length: int) -> np.ndarray:
    # DFT of a length-`length` indicator that is 1 on [0, extent)
    if extent == length:
        profile = np.zeros(length, dtype=np.complex128)
        profile[0] = length
        return profile
    k = np.arange(length, dtype=np.int64)[:, None]
    n = np.arange(extent, dtype=np.int64)[None, :]
    return np.exp(-2j * np.pi * ((k * n) % length) / length).sum(axis=1)


@functools.lru_cache(maxsize=256)
def _heaviside_coefficients(p: int, q: int, pad_height: int, pad_width: int):
    grid = np.outer(_dirichlet_profile(p, pad_height), _dirichlet_profile(q, pad_width))
    grid.setflags(write=False)
    return grid


def heaviside_spectrum(box: SupportBox, pad_height: int, pad_width: int) -> SpectralMap:
    """
    Spectrum of the finite rectangular Heaviside indicator that is 1 on
    [0, p) x [0, q), built as the outer product of two Dirichlet profiles.

    Spectra are memoized per (box, grid), so repeated activations reuse the
    precomputed mask.
    """
    if not box.fits(pad_height, pad_width):
        raise SupportBoundsError(box.as_tuple(), (pad_height, pad_width))
    return SpectralMap(
        _heaviside_coefficients(box.p, box.q, pad_height, pad_width), box.p, box.q
    )


def l_multiply(
    a_spec: SpectralMap,
    b_spec: SpectralMap,
    method: Union[LMultiplyMethod, str] = LMultiplyMethod.FFT,
) -> SpectralMap:
    """
    Multiplication theorem on the DFT grid: returns (1/(P*Q)) times the circular
    convolution of the two coefficient grids, which is the spectrum of the
    pointwise product of the operands' spatial signals.

    Parameters
    ----------
    `method` : `LMultiplyMethod`
        `FFT` evaluates the circular convolution through embedded transforms
        (O(n log n)); `DIRECT` sums shifted copies of `b_spec` (O(n^2)).
    """
    _require_same_grid(a_spec, b_spec, "l_multiply")
    method = coerce_mode(
        LMultiplyMethod,
        method,
        lambda v: SpectralConfigurationError(
            "l_multiply method", v, [m.value for m in LMultiplyMethod]
        ),
    )
    a = a_spec.coefficients
    b = b_spec.coefficients
    if method is LMultiplyMethod.FFT:
        coefficients = embedded_forward(embedded_inverse(a) * embedded_inverse(b))
    else:
        coefficients = np.zeros_like(a)
        for u, v in zip(*np.nonzero(a)):
            coefficients += a[u, v] * np.roll(b, shift=(u, v), axis=(0, 1))
        coefficients /= a.size
    return SpectralMap(
        coefficients,
        min(a_spec.source_height, b_spec.source_height),
        min(a_spec.source_width, b_spec.source_width),
    )


def spectral_activation(
    c_spec: SpectralMap,
    box: SupportBox,
    method: Union[LMultiplyMethod, str] = LMultiplyMethod.FFT,
) -> SpectralMap:
    """
    Finite-support activation applied in the frequency domain: `l_multiply`
    with the Heaviside spectrum of `box`. Spatially this is a position mask
    to `[0, p) x [0, q)`.
    """
    mask = heaviside_spectrum(box, c_spec.padded_height, c_spec.padded_width)
    return l_multiply(c_spec, mask, method)


def _symmetrize(coefficients: np.ndarray) -> np.ndarray:
    mirrored = np.roll(coefficients[::-1, ::-1], shift=(1, 1), axis=(0, 1))
    return 0.5 * (coefficients + np.conj(mirrored))


def spectral_pool(spec: SpectralMap, out_height: int, out_width: int) -> SpectralMap:
    """
    Spectral pooling by truncation.

    Keeps the centered `out_height` x `out_width` block of low frequencies,
    rescales it so the pooled map preserves the mean, and projects the result
    onto exact conjugate symmetry (an even-sized crop keeps a Nyquist row or
    column without its mirror).
    """
    padded_height, padded_width = spec.padded_shape
    if not (1 <= out_height <= padded_height and 1 <= out_width <= padded_width):
        raise DimensionError(
            "spectral_pool",
            f"output {out_height}x{out_width} must be positive and within "
            f"{padded_height}x{padded_width}",
        )
    if (out_height, out_width) == spec.padded_shape:
        return spec

    centered = np.fft.fftshift(spec.coefficients)
    top = padded_height // 2 - out_height // 2
    left = padded_width // 2 - out_width // 2
    block = centered[top : top + out_height, left : left + out_width]
    scale = (out_height * out_width) / (padded_height * padded_width)
    cropped = np.fft.ifftshift(block) * scale
    return SpectralMap(_symmetrize(cropped), out_height, out_width)


def _regrid_matrix(source: int, old_length: int, new_length: int) -> np.ndarray:
    # new[k] = sum_{n < source} x[n] e^{-2 pi i k n / new}, x[n] = idft_old(C)[n]
    n = np.arange(source, dtype=np.int64)
    forward = np.exp(
        -2j * np.pi * ((np.arange(new_length)[:, None] * n[None, :]) % new_length)
        / new_length
    )
    inverse = np.exp(
        2j * np.pi * ((n[:, None] * np.arange(old_length)[None, :]) % old_length)
        / old_length
    ) / old_length
    return forward @ inverse


def spectral_regrid(spec: SpectralMap, pad_height: int, pad_width: int) -> SpectralMap:
    """
    Re-expresses a spectrum on a different padded grid without leaving the
    frequency domain.

    Each axis is mapped by a Dirichlet interpolation matrix restricted to the
    source window, which is exact for any signal supported inside that window.
    The two matrix stages are tallied as embedded transforms.
    """
    if pad_height < spec.source_height or pad_width < spec.source_width:
        raise DimensionError(
            "spectral_regrid",
            f"grid {pad_height}x{pad_width} is smaller than source "
            f"{spec.source_height}x{spec.source_width}",
        )
    if (pad_height, pad_width) == spec.padded_shape:
        return spec
    rows = _regrid_matrix(spec.source_height, spec.padded_height, pad_height)
    cols = _regrid_matrix(spec.source_width, spec.padded_width, pad_width)
    record_transform(TransformKind.EMBEDDED, 2)
    coefficients = rows @ spec.coefficients @ cols.T
    return SpectralMap(coefficients, spec.source_height, spec.source_width)
