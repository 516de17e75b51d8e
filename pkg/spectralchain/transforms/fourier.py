"""
Forward and inverse 2D DFTs between `SpatialMap` and `SpectralMap`.

This is the single transform implementation behind both the Fourier and the
Laplace/Z operators: the Z transform evaluated on the unit circle is the DFT.
The forward transform is unnormalized and the inverse carries the 1/(P*Q)
factor, so the convolution theorem holds without extra scaling.
"""

import numpy as np
import scipy.fft

from spectralchain.core.exceptions import (
    DimensionError,
    NonFiniteSampleError,
    SymmetryError,
)
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.numerics import RELATIVE_TOLERANCE
from spectralchain.core.settings import current_settings
from spectralchain.transforms.maps import SpatialMap, SpectralMap
from spectralchain.transforms.tally import TransformKind, record_transform


def _workers() -> int:
    return current_settings().max_workers


def fast_length(target: int) -> int:
    """Smallest length >= `target` that the FFT backend handles efficiently."""
    return int(scipy.fft.next_fast_len(int(target), real=False))


def forward_transform(
    map: SpatialMap,
    pad_height: int,
    pad_width: int,
    *,
    kind: TransformKind = TransformKind.SIGNAL_FORWARD,
) -> SpectralMap:
    """
    Zero-extends `map` to `pad_height` x `pad_width` and returns its 2D DFT.

    Parameters
    ----------
    `map` : `SpatialMap`
        The signal to transform. Every sample must be finite.
    `pad_height`, `pad_width` : `int`
        Target grid; must be at least the map's dimensions.
    `kind` : `TransformKind`
        How the transform is tallied. Kernel spectra pass `KERNEL_FORWARD`.

    Returns
    -------
    `SpectralMap`
        Unnormalized coefficients with the map's size recorded as its source.

    Raises
    ------
    `DimensionError`
        If the padding is smaller than the map.
    `NonFiniteSampleError`
        If the map contains NaN or infinity.
    """
    if pad_height < map.height or pad_width < map.width:
        raise DimensionError(
            "forward_transform",
            f"pad {pad_height}x{pad_width} is smaller than source {map.height}x{map.width}",
        )
    if not map.is_finite():
        bad = int(np.count_nonzero(~np.isfinite(map.samples)))
        raise NonFiniteSampleError("forward_transform", bad)

    coefficients = scipy.fft.fft2(
        map.samples, s=(pad_height, pad_width), workers=_workers()
    )
    record_transform(kind)

    SpectralLogger.get().debug(
        **wrap_constants(
            message="Forward transform",
            level="DEBUG",
            **{
                LC.EVENT_TYPE: "transform",
                LC.ACTION: "forward",
                LC.TRANSFORM_KIND: TransformKind(kind).value,
                LC.SHAPE: [map.height, map.width],
                LC.PADDED_SHAPE: [pad_height, pad_width],
            },
        )
    )
    return SpectralMap(coefficients, map.height, map.width)


def inverse_transform(spectrum: SpectralMap) -> SpatialMap:
    """
    Returns the real spatial map of padded dimensions whose DFT is `spectrum`.

    The imaginary residue of the inverse is checked against the shared tolerance
    and discarded.

    Raises
    ------
    `SymmetryError`
        If the residue exceeds tolerance, which signals a spectrum that is not
        conjugate-symmetric.
    """
    values = scipy.fft.ifft2(spectrum.coefficients, workers=_workers())
    record_transform(TransformKind.SIGNAL_INVERSE)

    real = values.real
    residue = float(np.max(np.abs(values.imag)))
    tolerance = RELATIVE_TOLERANCE * max(1.0, float(np.max(np.abs(real))))
    if residue > tolerance:
        raise SymmetryError(residue, tolerance)

    SpectralLogger.get().debug(
        **wrap_constants(
            message="Inverse transform",
            level="DEBUG",
            **{
                LC.EVENT_TYPE: "transform",
                LC.ACTION: "inverse",
                LC.TRANSFORM_KIND: TransformKind.SIGNAL_INVERSE.value,
                LC.PADDED_SHAPE: [spectrum.padded_height, spectrum.padded_width],
                LC.CUSTOM: {"imaginary_residue": residue},
            },
        )
    )
    return SpatialMap(real)


def embedded_forward(grid: np.ndarray) -> np.ndarray:
    """Unnormalized complex 2D DFT of a raw grid, tallied as embedded."""
    record_transform(TransformKind.EMBEDDED)
    return scipy.fft.fft2(grid, workers=_workers())


def embedded_inverse(grid: np.ndarray) -> np.ndarray:
    """1/(P*Q)-scaled complex 2D inverse DFT of a raw grid, tallied as embedded."""
    record_transform(TransformKind.EMBEDDED)
    return scipy.fft.ifft2(grid, workers=_workers())
