"""
Brute-force time-domain reference implementations.

Nothing here shares code with the fast spectral paths: DFTs are evaluated as
explicit exponential sums and convolutions as shifted accumulations, so the
equivalence tests built on these functions are independent checks.
"""

import numpy as np

from spectralchain.core.exceptions import DimensionError, SupportBoundsError
from spectralchain.oracle.support import SupportBox
from spectralchain.transforms.maps import SpatialMap


def _dft_matrix(frequencies: np.ndarray, positions: int, length: int, sign: int):
    # Integer phase reduced modulo length keeps the exponent small and exact.
    k = np.asarray(frequencies, dtype=np.int64)[:, None]
    n = np.arange(positions, dtype=np.int64)[None, :]
    phase = (k * n) % length
    return np.exp(sign * 2j * np.pi * phase / length)


def naive_dft2(map: SpatialMap, pad_height: int, pad_width: int) -> np.ndarray:
    """
    Evaluates the 2D DFT of `map` zero-extended to `pad_height` x `pad_width`
    directly from its defining sum.
    """
    if pad_height < map.height or pad_width < map.width:
        raise DimensionError(
            "naive_dft2",
            f"pad {pad_height}x{pad_width} is smaller than source {map.height}x{map.width}",
        )
    rows = _dft_matrix(np.arange(pad_height), map.height, pad_height, -1)
    cols = _dft_matrix(np.arange(pad_width), map.width, pad_width, -1)
    return rows @ map.samples @ cols.T


def _canonical_pair(a: SpatialMap, b: SpatialMap) -> tuple:
    # Fewer samples first, then shape, then raw bytes: a total order on operands.
    key_a = (a.samples.size, a.shape, a.samples.tobytes())
    key_b = (b.samples.size, b.shape, b.samples.tobytes())
    return (a, b) if key_a >= key_b else (b, a)


def direct_conv2(image: SpatialMap, kernel: SpatialMap) -> SpatialMap:
    """
    Full linear 2D convolution with zero ("cropping") edges.

    The output has size (H+N-1) x (W+M-1). Each tap of the smaller operand adds
    a shifted, scaled copy of the larger one, which is the defining double sum
    evaluated one tap at a time. Operands are put in a fixed order first, so
    `direct_conv2(f, g)` and `direct_conv2(g, f)` are bitwise identical.
    """
    image, kernel = _canonical_pair(image, kernel)
    out = np.zeros(
        (image.height + kernel.height - 1, image.width + kernel.width - 1)
    )
    for i in range(kernel.height):
        for j in range(kernel.width):
            weight = kernel.samples[i, j]
            if weight != 0.0:
                out[i : i + image.height, j : j + image.width] += (
                    weight * image.samples
                )
    return SpatialMap(out)


def relu_pointwise(map: SpatialMap) -> SpatialMap:
    """Value-Heaviside activation: every sample s becomes max(0, s)."""
    return SpatialMap(np.where(map.samples > 0.0, map.samples, 0.0))


def position_mask(map: SpatialMap, box: SupportBox) -> SpatialMap:
    """
    Position-Heaviside activation: keeps rows [0, p) and columns [0, q) and
    zeroes everything else.
    """
    if not box.fits(map.height, map.width):
        raise SupportBoundsError(box.as_tuple(), map.shape)
    out = np.zeros_like(map.samples)
    out[: box.p, : box.q] = map.samples[: box.p, : box.q]
    return SpatialMap(out)


def circular_conv2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    out(u, v) = sum over (u', v') of a(u', v') * b((u - u') mod P, (v - v') mod Q).
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape != b.shape:
        raise DimensionError(
            "circular_conv2", f"grid shapes differ: {a.shape} vs {b.shape}"
        )
    height, width = a.shape
    rows = np.arange(height)[:, None]
    cols = np.arange(width)[None, :]
    out = np.empty_like(a)
    for u in range(height):
        for v in range(width):
            out[u, v] = np.sum(a * b[(u - rows) % height, (v - cols) % width])
    return out


def truncation_lowpass_oracle(
    map: SpatialMap, out_height: int, out_width: int
) -> SpatialMap:
    """
    Reference spectral pooling: direct DFT of the centered low-frequency block,
    direct inverse on the smaller grid, real part.

    The retained block covers frequencies -(h//2) .. h-1-(h//2) on each axis,
    and the result is scaled by 1/(H*W) so the pooled map keeps the input mean.
    """
    if not (1 <= out_height <= map.height and 1 <= out_width <= map.width):
        raise DimensionError(
            "truncation_lowpass_oracle",
            f"output {out_height}x{out_width} must be positive and within "
            f"{map.height}x{map.width}",
        )
    row_freqs = np.arange(out_height) - out_height // 2
    col_freqs = np.arange(out_width) - out_width // 2

    forward_rows = _dft_matrix(row_freqs, map.height, map.height, -1)
    forward_cols = _dft_matrix(col_freqs, map.width, map.width, -1)
    block = forward_rows @ map.samples @ forward_cols.T

    inverse_rows = _dft_matrix(row_freqs, out_height, out_height, +1).T
    inverse_cols = _dft_matrix(col_freqs, out_width, out_width, +1).T
    pooled = inverse_rows @ block @ inverse_cols.T / (map.height * map.width)
    return SpatialMap(pooled.real)
