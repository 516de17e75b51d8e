import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from spectralchain.core.exceptions import DimensionError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SpatialMap:
    """
    A finite real-valued 2D sample grid: an image, a kernel, or an intermediate
    feature map.

    The samples are stored row-major as a read-only float64 array; operations
    never mutate their inputs and always return new maps.

    Attributes
    ----------
    `samples` : `np.ndarray`
        A `(height, width)` array of real samples.

    Examples
    --------
    ```python
    m = SpatialMap.from_rows([[1, 2], [3, 4]])
    m.height, m.width  # (2, 2)
    ```
    """

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if np.iscomplexobj(samples):
            raise DimensionError("SpatialMap", "samples must be real-valued")
        if samples.ndim != 2 or samples.shape[0] < 1 or samples.shape[1] < 1:
            raise DimensionError(
                "SpatialMap",
                f"samples must be a non-empty 2D grid, got shape {samples.shape}",
            )
        object.__setattr__(self, "samples", _frozen(samples.astype(np.float64)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "SpatialMap":
        return cls(np.asarray(rows, dtype=np.float64))

    @property
    def height(self) -> int:
        return int(self.samples.shape[0])

    @property
    def width(self) -> int:
        return int(self.samples.shape[1])

    @property
    def shape(self) -> tuple:
        return (self.height, self.width)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.samples)))

    def digest(self) -> str:
        """sha256 over the shape and the exact sample bytes."""
        h = hashlib.sha256()
        h.update(f"{self.height}x{self.width}".encode())
        h.update(self.samples.tobytes())
        return h.hexdigest()

    def window(self, height: int, width: int) -> "SpatialMap":
        """Returns the top-left `height` x `width` window of this map."""
        if not (1 <= height <= self.height and 1 <= width <= self.width):
            raise DimensionError(
                "window",
                f"window {height}x{width} does not fit map {self.height}x{self.width}",
            )
        return SpatialMap(self.samples[:height, :width])

    def __repr__(self) -> str:
        return f"SpatialMap({self.height}x{self.width})"


@dataclass(frozen=True, eq=False)
class SpectralMap:
    """
    A complex-valued 2D frequency grid together with the size of the spatial
    map it came from.

    Attributes
    ----------
    `coefficients` : `np.ndarray`
        A `(padded_height, padded_width)` complex array in standard DFT order
        (DC at index `[0, 0]`).
    `source_height`, `source_width` : `int`
        Extent of the originating spatial signal. Everything outside the
        `[0, source_height) x [0, source_width)` window is known to be zero.
    """

    coefficients: np.ndarray
    source_height: int
    source_width: int

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients)
        if coefficients.ndim != 2 or min(coefficients.shape) < 1:
            raise DimensionError(
                "SpectralMap",
                f"coefficients must be a non-empty 2D grid, got shape {coefficients.shape}",
            )
        padded_height, padded_width = coefficients.shape
        if not (1 <= self.source_height <= padded_height) or not (
            1 <= self.source_width <= padded_width
        ):
            raise DimensionError(
                "SpectralMap",
                f"source {self.source_height}x{self.source_width} does not fit "
                f"padded grid {padded_height}x{padded_width}",
            )
        object.__setattr__(
            self, "coefficients", _frozen(coefficients.astype(np.complex128))
        )
        object.__setattr__(self, "source_height", int(self.source_height))
        object.__setattr__(self, "source_width", int(self.source_width))

    @property
    def padded_height(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def padded_width(self) -> int:
        return int(self.coefficients.shape[1])

    @property
    def padded_shape(self) -> tuple:
        return (self.padded_height, self.padded_width)

    @property
    def source_shape(self) -> tuple:
        return (self.source_height, self.source_width)

    def conjugate_mirror(self) -> np.ndarray:
        """Returns conj(C((-u) mod P, (-v) mod Q)) for every bin (u, v)."""
        mirrored = np.roll(self.coefficients[::-1, ::-1], shift=(1, 1), axis=(0, 1))
        return np.conj(mirrored)

    def symmetry_residue(self) -> float:
        """Largest deviation from conjugate symmetry, scaled by max(1, max|C|)."""
        scale = max(1.0, float(np.max(np.abs(self.coefficients))))
        return float(np.max(np.abs(self.coefficients - self.conjugate_mirror()))) / scale

    def __repr__(self) -> str:
        return (
            f"SpectralMap(padded={self.padded_height}x{self.padded_width}, "
            f"source={self.source_height}x{self.source_width})"
        )
