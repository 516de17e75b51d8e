import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Sequence, Tuple

from spectralchain.core.exceptions import (
    DimensionError,
    EmptyKernelSetError,
    SpectralConfigurationError,
)
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.transforms.fourier import forward_transform
from spectralchain.transforms.maps import SpatialMap, SpectralMap
from spectralchain.transforms.tally import TransformKind


# Spectra kept by a cache before the least recently used one is dropped.
DEFAULT_CACHE_ENTRIES = 256


@dataclass(frozen=True)
class KernelSet:
    """
    The weight set W = {w_i} of a multichannel convolution.

    All kernels share one size; the per-channel convolutions are summed.

    Attributes
    ----------
    `kernels` : `Tuple[SpatialMap, ...]`
        The channel kernels in accumulation order.
    """

    kernels: Tuple[SpatialMap, ...]

    def __post_init__(self):
        kernels = tuple(self.kernels)
        if not kernels:
            raise EmptyKernelSetError()
        shapes = {k.shape for k in kernels}
        if len(shapes) != 1:
            raise DimensionError(
                "KernelSet", f"kernels must share one size, got {sorted(shapes)}"
            )
        object.__setattr__(self, "kernels", kernels)

    @classmethod
    def of(cls, kernels: Sequence[SpatialMap]) -> "KernelSet":
        return cls(tuple(kernels))

    @property
    def channel_count(self) -> int:
        return len(self.kernels)

    @property
    def kernel_height(self) -> int:
        return self.kernels[0].height

    @property
    def kernel_width(self) -> int:
        return self.kernels[0].width


def kernel_digest(kernel: SpatialMap) -> str:
    """Content identity of a kernel: its shape and exact sample bytes."""
    return kernel.digest()


class KernelSpectrumCache:
    """
    Precomputed kernel spectra keyed on (kernel content, padded grid).

    Holds at most `max_entries` spectra and evicts the least recently used one
    when full. Lookups and inserts are safe from several threads. Two threads
    missing on the same key may both transform the kernel; the first stored
    spectrum wins and both results are bitwise identical anyway.
    """

    def __init__(self, max_entries: int = DEFAULT_CACHE_ENTRIES) -> None:
        if max_entries < 1:
            raise SpectralConfigurationError("max_entries", max_entries, ["a positive integer"])
        self.max_entries = max_entries
        self._entries: "OrderedDict[Tuple[str, int, int], SpectralMap]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.evictions = 0

    def get(self, kernel: SpatialMap, pad_height: int, pad_width: int) -> SpectralMap:
        key = (kernel_digest(kernel), pad_height, pad_width)
        with self._lock:
            cached = self._entries.get(key)
            if cached is not None:
                self._entries.move_to_end(key)
                self.hits += 1
                return cached
            self.misses += 1

        spectrum = forward_transform(
            kernel, pad_height, pad_width, kind=TransformKind.KERNEL_FORWARD
        )
        with self._lock:
            spectrum = self._entries.setdefault(key, spectrum)
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)
                self.evictions += 1

        SpectralLogger.get().debug(
            **wrap_constants(
                message="Kernel spectrum cached",
                level="DEBUG",
                **{
                    LC.EVENT_TYPE: "kernel_cache",
                    LC.ACTION: "insert",
                    LC.SHAPE: [kernel.height, kernel.width],
                    LC.PADDED_SHAPE: [pad_height, pad_width],
                    LC.CUSTOM: {"entries": len(self._entries)},
                },
            )
        )
        return spectrum

    def spectra(
        self, kernels: KernelSet, pad_height: int, pad_width: int
    ) -> Tuple[SpectralMap, ...]:
        return tuple(self.get(k, pad_height, pad_width) for k in kernels.kernels)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0
            self.evictions = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


default_kernel_cache = KernelSpectrumCache()
