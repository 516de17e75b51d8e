from pathlib import Path
from typing import Union

import numpy as np

from spectralchain.core.exceptions import DimensionError, PipelineConfigurationError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.transforms.maps import SpatialMap

PathLike = Union[str, Path]


def load_map(path: PathLike) -> SpatialMap:
    """
    Reads a CSV grid of decimal reals, one row per line; dimensions are inferred.

    Raises:
        PipelineConfigurationError: if the file is missing, ragged, empty or
            holds non-finite values.
    """
    try:
        samples = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except (OSError, ValueError) as e:
        raise PipelineConfigurationError(f"cannot read map: {e}", str(path)) from e
    if samples.size == 0:
        raise PipelineConfigurationError("map file is empty", str(path))
    if not np.all(np.isfinite(samples)):
        raise PipelineConfigurationError("map contains non-finite values", str(path))
    try:
        map = SpatialMap(samples)
    except DimensionError as e:
        raise PipelineConfigurationError(str(e), str(path)) from e

    SpectralLogger.get().debug(
        **wrap_constants(
            message="Map loaded",
            level="DEBUG",
            **{
                LC.EVENT_TYPE: "io",
                LC.ACTION: "map_loaded",
                LC.PATH: str(path),
                LC.SHAPE: [map.height, map.width],
            },
        )
    )
    return map


def save_map(map: SpatialMap, path: PathLike) -> None:
    """Writes `map` as CSV with 17 significant digits, so values round-trip exactly."""
    try:
        np.savetxt(path, map.samples, fmt="%.17g", delimiter=",")
    except OSError as e:
        raise PipelineConfigurationError(f"cannot write map: {e}", str(path)) from e

    SpectralLogger.get().info(
        **wrap_constants(
            message="Map written",
            **{
                LC.EVENT_TYPE: "io",
                LC.ACTION: "map_written",
                LC.PATH: str(path),
                LC.SHAPE: [map.height, map.width],
            },
        )
    )
