"""
JSON report schemas. Reports carry no wall-clock fields except the benchmark
timings, so reruns of the same config and seed emit identical documents.
"""

import json
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError

from spectralchain.core.exceptions import PipelineConfigurationError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.planner.cost import CostReport
from spectralchain.transforms.tally import TransformTally

R = TypeVar("R", bound=BaseModel)


class TransformCounts(BaseModel):
    signal_forward: int = Field(default=0, ge=0)
    signal_inverse: int = Field(default=0, ge=0)
    kernel_forward: int = Field(default=0, ge=0)
    embedded: int = Field(default=0, ge=0)

    @property
    def boundary(self) -> int:
        return self.signal_forward + self.signal_inverse

    @classmethod
    def from_tally(cls, tally: TransformTally) -> "TransformCounts":
        return cls(**tally.as_dict())

    def minus(self, other: "TransformCounts") -> "TransformCounts":
        return TransformCounts(
            signal_forward=self.signal_forward - other.signal_forward,
            signal_inverse=self.signal_inverse - other.signal_inverse,
            kernel_forward=self.kernel_forward - other.kernel_forward,
            embedded=self.embedded - other.embedded,
        )


class StageRecord(BaseModel):
    index: int
    kind: str
    symbol: str
    domain: str
    input_shape: List[int]
    output_shape: List[int]
    transforms: TransformCounts


class RunReport(BaseModel):
    """
    Outcome of one pipeline execution.

    `measured_transform_count` counts signal forward and inverse transforms;
    it must equal `predicted_transform_count` from the planner.
    """

    version: str
    pipeline: str
    seed: int
    mode: str
    planning_mode: str
    plan: str
    predicted_transform_count: int
    measured_transform_count: int
    transforms: TransformCounts
    stages: List[StageRecord]
    cost: CostReport
    output_shape: List[int]
    output_digest: str

    @property
    def counts_match(self) -> bool:
        return self.predicted_transform_count == self.measured_transform_count


class DiscrepancyReport(BaseModel):
    """
    Elementwise comparison of the position-mask and ReLU activation paths.

    `differences_match_negative_pixels` is true when the pixels that differ
    are exactly the pixels where the masked output is negative.
    """

    version: str
    pipeline: str
    seed: int
    planning_mode: str
    max_abs_diff: float = Field(ge=0.0)
    rms_diff: float = Field(ge=0.0)
    fraction_of_pixels_differing: float = Field(ge=0.0, le=1.0)
    pixels_differing: int = Field(ge=0)
    negative_masked_pixels: int = Field(ge=0)
    differences_match_negative_pixels: bool
    transform_counts: Dict[str, int]
    stage_transforms: Dict[str, List[TransformCounts]]


class ModeTiming(BaseModel):
    mode: str
    median_ms: float = Field(ge=0.0)
    stage_medians_ms: List[float]
    transform_count: int
    output_digest: str
    deterministic: bool


class CrossoverRow(BaseModel):
    """Direct versus spectral timing of one convolution stage in isolation."""

    stage_index: int
    n: int
    k: int
    channels: int
    direct_ms: float = Field(ge=0.0)
    spectral_ms: float = Field(ge=0.0)
    spectral_faster: bool


class BenchReport(BaseModel):
    version: str
    pipeline: str
    seed: int
    repetitions: int = Field(ge=1)
    n: int
    k: Optional[int] = None
    modes: List[ModeTiming]
    crossover: List[CrossoverRow]

    def timing(self, mode: str) -> ModeTiming:
        for timing in self.modes:
            if timing.mode == mode:
                return timing
        raise KeyError(mode)


_FLOAT_TOKEN = "__float17__"


def _format_float(value: float) -> str:
    # Non-finite values have no JSON literal; null matches pydantic's default.
    return "%.17g" % value if math.isfinite(value) else "null"


def report_json(report: BaseModel) -> str:
    """
    Serializes a report as indented JSON with every float printed to 17
    significant digits, so values read back bit for bit.
    """
    floats: List[float] = []

    def mark(value: Any) -> Any:
        if isinstance(value, float):
            floats.append(value)
            return f"{_FLOAT_TOKEN}{len(floats) - 1}"
        if isinstance(value, dict):
            return {key: mark(item) for key, item in value.items()}
        if isinstance(value, list):
            return [mark(item) for item in value]
        return value

    text = json.dumps(mark(report.model_dump(mode="json")), indent=2)
    return re.sub(
        rf'"{_FLOAT_TOKEN}(\d+)"', lambda m: _format_float(floats[int(m.group(1))]), text
    )


def write_report(report: BaseModel, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(report_json(report) + "\n", encoding="utf-8")
    except OSError as e:
        raise PipelineConfigurationError(f"cannot write report: {e}", str(path)) from e
    SpectralLogger.get().info(
        **wrap_constants(
            message="Report written",
            **{
                LC.EVENT_TYPE: "io",
                LC.ACTION: "report_written",
                LC.PATH: str(path),
                LC.CUSTOM: {"report": type(report).__name__},
            },
        )
    )


def read_report(model: Type[R], path: Union[str, Path]) -> R:
    try:
        return model.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise PipelineConfigurationError(f"cannot read report: {e}", str(path)) from e
    except ValidationError as e:
        raise PipelineConfigurationError(str(e), str(path)) from e
