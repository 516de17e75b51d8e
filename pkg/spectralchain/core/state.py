from dataclasses import dataclass
from typing import Optional

from spectralchain.transforms.maps import SpatialMap, SpectralMap


@dataclass
class PipelineState:
    """
    The signal flowing between pipeline stages.

    Exactly one of `spatial` and `spectral` is set: inside a spectral region the
    executor carries the spectrum, outside it carries the spatial map.

    Attributes
    ----------
    `spatial` : `Optional[SpatialMap]`
        The current map when the pipeline is in the spatial domain.
    `spectral` : `Optional[SpectralMap]`
        The current spectrum when the pipeline is inside a spectral region.
    """

    spatial: Optional[SpatialMap] = None
    spectral: Optional[SpectralMap] = None

    @property
    def in_frequency_domain(self) -> bool:
        return self.spectral is not None

    @property
    def source_shape(self) -> tuple:
        """The (height, width) of the underlying spatial signal."""
        if self.spectral is not None:
            return (self.spectral.source_height, self.spectral.source_width)
        return (self.spatial.height, self.spatial.width)

    def __repr__(self) -> str:
        domain = "spectral" if self.in_frequency_domain else "spatial"
        return f"PipelineState({domain}, source={self.source_shape})"
