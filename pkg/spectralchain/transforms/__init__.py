from spectralchain.transforms.maps import SpatialMap, SpectralMap
from spectralchain.transforms.fourier import (
    fast_length,
    forward_transform,
    inverse_transform,
)
from spectralchain.transforms.tally import (
    TransformKind,
    TransformTally,
    transform_tally,
)

__all__ = [
    "SpatialMap",
    "SpectralMap",
    "TransformKind",
    "TransformTally",
    "fast_length",
    "forward_transform",
    "inverse_transform",
    "transform_tally",
]
