import json
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from spectralchain.core.exceptions import (
    PipelineConfigurationError,
    SpectralChainException,
)
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import ActivationMode, LMultiplyMethod, PlanningMode
from spectralchain.harness.csvio import load_map
from spectralchain.harness.synthetic import LCG_MODULUS, SyntheticStream
from spectralchain.planner.builder import LayerGraphBuilder
from spectralchain.planner.graph import LayerGraph
from spectralchain.spectral.kernels import KernelSet
from spectralchain.transforms.maps import SpatialMap


class SyntheticGrid(BaseModel):
    """Seeded uniform samples in [low, high) for one map."""

    height: int = Field(ge=1)
    width: int = Field(ge=1)
    low: float = -1.0
    high: float = 1.0

    @model_validator(mode="after")
    def _ordered_range(self):
        if not self.low < self.high:
            raise ValueError(f"low ({self.low}) must be below high ({self.high})")
        return self


class SyntheticKernels(SyntheticGrid):
    count: int = Field(default=1, ge=1)


class InputConfig(BaseModel):
    path: Optional[str] = None
    synthetic: Optional[SyntheticGrid] = None

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.path is None) == (self.synthetic is None):
            raise ValueError("input needs exactly one of 'path' or 'synthetic'")
        return self


class ConvolutionOp(BaseModel):
    kind: Literal["convolution"] = "convolution"
    kernels: Optional[List[str]] = None
    synthetic: Optional[SyntheticKernels] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.kernels is None) == (self.synthetic is None):
            raise ValueError("convolution needs exactly one of 'kernels' or 'synthetic'")
        if self.kernels is not None and not self.kernels:
            raise ValueError("convolution kernel list is empty")
        return self


class ActivationOp(BaseModel):
    kind: Literal["activation"] = "activation"
    activation_mode: ActivationMode = ActivationMode.PAPER_MASK
    label: Optional[str] = None


class PoolingOp(BaseModel):
    kind: Literal["pooling"] = "pooling"
    out_height: int = Field(ge=1)
    out_width: int = Field(ge=1)
    label: Optional[str] = None


class BoundaryOp(BaseModel):
    kind: Literal["boundary"] = "boundary"
    label: Optional[str] = None


OpConfig = Annotated[
    Union[ConvolutionOp, ActivationOp, PoolingOp, BoundaryOp],
    Field(discriminator="kind"),
]


class PipelineConfig(BaseModel):
    """
    A pipeline description: an input map, an ordered op chain and how to run it.

    Relative paths are resolved against `base_dir`, which `load_config` sets
    to the directory holding the config file.

    Attributes
    ----------
    `name` : `str`
        Pipeline name used in logs and reports.
    `input` : `InputConfig`
        A CSV path or a synthetic grid.
    `ops` : `List[OpConfig]`
        Convolution, activation, pooling and boundary descriptors, in order.
    `mode` : `PlanningMode`
        Default placement mode; CLI and callers may override it.
    `seed` : `int`
        Seed of the synthetic stream. The input is drawn first, then kernels
        in op order.
    `fast_padding` : `Optional[bool]`
        Overrides `SPECTRALCHAIN_FAST_PADDING` for this pipeline.
    `l_multiply_method` : `LMultiplyMethod`
        Evaluation of the spectral activation product.
    """

    name: str = "pipeline"
    input: InputConfig
    ops: List[OpConfig] = Field(min_length=1)
    mode: PlanningMode = PlanningMode.FUSED_SPECTRAL
    seed: int = Field(default=0, ge=0, lt=LCG_MODULUS)
    fast_padding: Optional[bool] = None
    l_multiply_method: LMultiplyMethod = LMultiplyMethod.FFT
    base_dir: Optional[str] = Field(default=None, exclude=True)

    def with_activation_mode(self, activation_mode: ActivationMode) -> "PipelineConfig":
        """Returns a copy whose activation ops all use `activation_mode`."""
        ops = [
            op.model_copy(update={"activation_mode": ActivationMode(activation_mode)})
            if isinstance(op, ActivationOp)
            else op
            for op in self.ops
        ]
        return self.model_copy(update={"ops": ops})

    def resolve_path(self, reference: str) -> Path:
        path = Path(reference)
        if not path.is_absolute() and self.base_dir:
            path = Path(self.base_dir) / path
        if not path.exists():
            raise PipelineConfigurationError("referenced file not found", str(path))
        return path


def load_config(path: Union[str, Path]) -> PipelineConfig:
    """
    Reads and validates a JSON pipeline config.

    Raises:
        PipelineConfigurationError: on unreadable files, invalid JSON or
            schema violations.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise PipelineConfigurationError(f"cannot read config: {e}", str(path)) from e
    except json.JSONDecodeError as e:
        raise PipelineConfigurationError(f"invalid JSON: {e}", str(path)) from e
    if not isinstance(raw, dict):
        raise PipelineConfigurationError("config must be a JSON object", str(path))
    raw.setdefault("name", path.stem)
    raw["base_dir"] = str(path.resolve().parent)
    try:
        config = PipelineConfig.model_validate(raw)
    except ValidationError as e:
        raise PipelineConfigurationError(str(e), str(path)) from e

    SpectralLogger.get().info(
        **wrap_constants(
            message="Pipeline config loaded",
            **{
                LC.EVENT_TYPE: "harness",
                LC.ACTION: "config_loaded",
                LC.PATH: str(path),
                LC.PIPELINE_NAME: config.name,
                LC.SEED: config.seed,
                LC.CUSTOM: {"ops": [op.kind for op in config.ops]},
            },
        )
    )
    return config


@dataclass(frozen=True)
class ResolvedPipeline:
    """
    A config with every reference loaded: the input map, kernel sets keyed by
    op position, and the shape-annotated layer graph.
    """

    config: PipelineConfig
    image: SpatialMap
    kernels: Dict[int, KernelSet]
    graph: LayerGraph


def resolve_pipeline(config: PipelineConfig) -> ResolvedPipeline:
    """
    Loads or synthesizes every map the config refers to and checks that
    dimensions stay consistent through the chain.

    Raises:
        PipelineConfigurationError: on unresolved references, mismatched
            kernel sizes or inconsistent dimensions.
    """
    stream = SyntheticStream(config.seed)
    if config.input.path is not None:
        image = load_map(config.resolve_path(config.input.path))
    else:
        grid = config.input.synthetic
        image = stream.grid(grid.height, grid.width, grid.low, grid.high)

    kernels: Dict[int, KernelSet] = {}
    try:
        builder = LayerGraphBuilder(image.height, image.width, config.name)
        for position, op in enumerate(config.ops):
            if isinstance(op, ConvolutionOp):
                if op.kernels is not None:
                    maps = [load_map(config.resolve_path(ref)) for ref in op.kernels]
                else:
                    spec = op.synthetic
                    maps = [
                        stream.grid(spec.height, spec.width, spec.low, spec.high)
                        for _ in range(spec.count)
                    ]
                kernel_set = KernelSet.of(maps)
                kernels[position] = kernel_set
                builder.add_convolution(
                    kernel_set.kernel_height,
                    kernel_set.kernel_width,
                    kernel_set.channel_count,
                    op.label,
                )
            elif isinstance(op, ActivationOp):
                builder.add_activation(op.activation_mode, op.label)
            elif isinstance(op, PoolingOp):
                builder.add_pooling(op.out_height, op.out_width, op.label)
            else:
                builder.add_boundary(op.label)
        graph = builder.build()
    except PipelineConfigurationError:
        raise
    except SpectralChainException as e:
        raise PipelineConfigurationError(str(e)) from e

    return ResolvedPipeline(config=config, image=image, kernels=kernels, graph=graph)
