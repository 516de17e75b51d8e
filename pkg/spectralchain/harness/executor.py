import asyncio
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.signal

import spectralchain
from spectralchain.core.exceptions import (
    InvalidPlanningModeError,
    SpectralChainException,
    StageExecutionError,
)
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_context import LogContext
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import ActivationMode, PlanningMode
from spectralchain.core.settings import SpectralSettings, current_settings
from spectralchain.core.state import PipelineState
from spectralchain.harness.config import PipelineConfig, ResolvedPipeline, resolve_pipeline
from spectralchain.harness.reports import RunReport, StageRecord, TransformCounts
from spectralchain.oracle.spatial import (
    direct_conv2,
    position_mask,
    relu_pointwise,
    truncation_lowpass_oracle,
)
from spectralchain.oracle.support import SupportBox
from spectralchain.planner.cost import CostReport, cost_estimate
from spectralchain.planner.graph import LayerKind, LayerNode, PlannedGraph
from spectralchain.planner.placement import place_transforms
from spectralchain.spectral.block import activate
from spectralchain.spectral.kernels import KernelSet, KernelSpectrumCache
from spectralchain.spectral.ops import (
    multichannel_spectral_conv,
    spectral_pool,
    spectral_regrid,
    support_bounds,
)
from spectralchain.transforms.fourier import fast_length, forward_transform, inverse_transform
from spectralchain.transforms.maps import SpatialMap, SpectralMap
from spectralchain.transforms.tally import transform_tally


class ExecutionMode(str, Enum):
    NAIVE = "naive"
    LEGACY_SPECTRAL = "legacy_spectral"
    FUSED_SPECTRAL = "fused_spectral"
    ORACLE = "oracle"  # naive plan, brute-force reference implementations only

    @property
    def planning_mode(self) -> PlanningMode:
        if self is ExecutionMode.ORACLE:
            return PlanningMode.NAIVE
        return PlanningMode(self.value)


MODE_ALIASES = {
    "naive": ExecutionMode.NAIVE,
    "legacy": ExecutionMode.LEGACY_SPECTRAL,
    "legacy_spectral": ExecutionMode.LEGACY_SPECTRAL,
    "fused": ExecutionMode.FUSED_SPECTRAL,
    "fused_spectral": ExecutionMode.FUSED_SPECTRAL,
    "oracle": ExecutionMode.ORACLE,
}


def parse_execution_mode(value: Union[ExecutionMode, PlanningMode, str]) -> ExecutionMode:
    """Accepts an ExecutionMode, a PlanningMode or a CLI alias such as `fused`."""
    if isinstance(value, ExecutionMode):
        return value
    if isinstance(value, PlanningMode):
        return ExecutionMode(value.value)
    mode = MODE_ALIASES.get(str(value).strip().lower())
    if mode is None:
        raise InvalidPlanningModeError(value)
    return mode


@dataclass
class RunResult:
    """
    Output of one pipeline execution.

    Attributes
    ----------
    `output` : `SpatialMap`
        The final map.
    `report` : `RunReport`
        Deterministic run report (no timings).
    `stage_durations_ms` : `List[float]`
        Wall-clock time of every planned node, in plan order.
    """

    output: SpatialMap
    report: RunReport
    stage_durations_ms: List[float] = field(default_factory=list)


class PipelineExecutor:
    """
    PipelineExecutor runs a resolved pipeline node by node along its planned graph.

    Stages run in worker threads under a semaphore, so several executors (for
    instance the two activation modes of a comparison) can share one
    concurrency cap. Transforms are counted by kind while the run is active,
    and every failure is re-raised as a StageExecutionError naming the stage.

    Attributes:
        pipeline: The resolved pipeline (input, kernels, layer graph).
        mode: The execution mode.
        plan: The planned graph the executor walks.
        cost: The planner's cost report for `plan`.
        fast_padding: Whether padded grids are rounded up to fast FFT lengths.
        semaphore: Concurrency cap on stages in flight.
        cache: Kernel spectrum cache.
    """

    def __init__(
        self,
        pipeline: ResolvedPipeline,
        mode: Union[ExecutionMode, PlanningMode, str, None] = None,
        semaphore: Optional[asyncio.Semaphore] = None,
        cache: Optional[KernelSpectrumCache] = None,
        settings: Optional[SpectralSettings] = None,
    ) -> None:
        settings = settings if settings is not None else current_settings()
        config = pipeline.config
        self.pipeline = pipeline
        self.mode = parse_execution_mode(mode if mode is not None else config.mode)
        self.plan: PlannedGraph = place_transforms(pipeline.graph, self.mode.planning_mode)
        self.cost: CostReport = cost_estimate(self.plan)
        self.fast_padding = (
            config.fast_padding if config.fast_padding is not None else settings.fast_padding
        )
        self.semaphore = semaphore if semaphore is not None else asyncio.Semaphore(settings.max_workers)
        # Per-executor cache keeps reported kernel counts independent of earlier runs.
        self.cache = cache if cache is not None else KernelSpectrumCache()

        # plan position -> layer graph position, for kernel lookup
        self._graph_positions: Dict[int, int] = {}
        graph_position = 0
        for index, node in enumerate(self.plan.nodes):
            if not node.is_transform:
                self._graph_positions[index] = graph_position
                graph_position += 1

        SpectralLogger.get().info(
            **wrap_constants(
                message="PipelineExecutor initialized",
                **{
                    LC.EVENT_TYPE: "executor",
                    LC.ACTION: "executor_init",
                    LC.PIPELINE_NAME: config.name,
                    LC.MODE: self.mode.value,
                    LC.PREDICTED_COUNT: self.plan.transform_count,
                    LC.CUSTOM: {
                        "plan": self.plan.render(),
                        "fast_padding": self.fast_padding,
                        "max_workers": settings.max_workers,
                    },
                },
            )
        )

    # ──────────────── Grid policy ────────────────

    def _pad(self, height: int, width: int) -> Tuple[int, int]:
        if self.fast_padding:
            return (fast_length(height), fast_length(width))
        return (height, width)

    def _grid_for(self, start: int, shape: Tuple[int, int]) -> Tuple[int, int]:
        """
        Padded grid holding every convolution support reached from plan
        position `start` before the next pooling or the end of the region.
        """
        height, width = shape
        for node in self.plan.nodes[start:]:
            if node.kind is LayerKind.CONVOLUTION:
                height += node.kernel_height - 1
                width += node.kernel_width - 1
            elif node.kind in (LayerKind.POOLING, LayerKind.INVERSE_TRANSFORM):
                break
        return self._pad(height, width)

    def _kernels(self, index: int) -> KernelSet:
        return self.pipeline.kernels[self._graph_positions[index]]

    # ──────────────── Stages ────────────────

    def _spectral_stage(self, index: int, node: LayerNode, spec: SpectralMap) -> SpectralMap:
        if node.kind is LayerKind.CONVOLUTION:
            kernels = self._kernels(index)
            box = support_bounds(*spec.source_shape, kernels.kernel_height, kernels.kernel_width)
            if not box.fits(*spec.padded_shape):
                spec = spectral_regrid(spec, *self._grid_for(index, spec.source_shape))
            return multichannel_spectral_conv(spec, self.cache.spectra(kernels, *spec.padded_shape))
        if node.kind is LayerKind.ACTIVATION:
            box = SupportBox(*spec.source_shape)
            return activate(
                spec, box, node.activation_mode, self.pipeline.config.l_multiply_method
            )
        if node.kind is LayerKind.POOLING:
            if spec.padded_shape != spec.source_shape:
                spec = spectral_regrid(spec, *spec.source_shape)
            return spectral_pool(spec, node.out_height, node.out_width)
        raise StageExecutionError(index, node.kind.value, "node cannot run in the frequency domain")

    def _spatial_stage(self, index: int, node: LayerNode, map: SpatialMap) -> SpatialMap:
        if node.kind is LayerKind.CONVOLUTION:
            kernels = self._kernels(index)
            if self.mode is ExecutionMode.ORACLE:
                total = sum(direct_conv2(map, k).samples for k in kernels.kernels)
            else:
                total = sum(
                    scipy.signal.convolve2d(map.samples, k.samples, mode="full")
                    for k in kernels.kernels
                )
            return SpatialMap(np.asarray(total))
        if node.kind is LayerKind.ACTIVATION:
            if node.activation_mode is ActivationMode.PAPER_MASK:
                return position_mask(map, SupportBox(map.height, map.width))
            if node.activation_mode is ActivationMode.TRUE_RELU_ROUNDTRIP:
                return relu_pointwise(map)
            return map
        if node.kind is LayerKind.POOLING:
            return truncation_lowpass_oracle(map, node.out_height, node.out_width)
        return map

    def _run_stage(self, index: int, node: LayerNode, state: PipelineState) -> PipelineState:
        if node.kind is LayerKind.FORWARD_TRANSFORM:
            pad = self._grid_for(index + 1, state.source_shape)
            return PipelineState(spectral=forward_transform(state.spatial, *pad))
        if node.kind is LayerKind.INVERSE_TRANSFORM:
            spec = state.spectral
            return PipelineState(spatial=inverse_transform(spec).window(*spec.source_shape))
        if state.in_frequency_domain:
            return PipelineState(spectral=self._spectral_stage(index, node, state.spectral))
        return PipelineState(spatial=self._spatial_stage(index, node, state.spatial))

    # ──────────────── Execution ────────────────

    async def execute(self) -> RunResult:
        """
        Executes every planned node in order.

        Returns:
            The output map, the run report and per-stage durations.

        Raises:
            StageExecutionError: if any stage fails.
        """
        log = SpectralLogger.get()
        config = self.pipeline.config
        LogContext.set(
            {
                LC.RUN_ID: str(uuid.uuid4()),
                LC.PIPELINE_NAME: config.name,
                LC.MODE: self.mode.value,
            }
        )
        log.info(
            **wrap_constants(
                message="Pipeline execution started",
                **{
                    LC.EVENT_TYPE: "executor",
                    LC.ACTION: "execution_start",
                    LC.SHAPE: list(self.pipeline.image.shape),
                    LC.SEED: config.seed,
                },
            )
        )

        stages: List[StageRecord] = []
        durations: List[float] = []
        state = PipelineState(spatial=self.pipeline.image)

        with transform_tally() as tally:
            for index, node in enumerate(self.plan.nodes):
                before = TransformCounts.from_tally(tally)
                input_shape = list(state.source_shape)
                domain = "spectral" if state.in_frequency_domain else "spatial"
                started = time.perf_counter()
                async with self.semaphore:
                    try:
                        state = await asyncio.to_thread(self._run_stage, index, node, state)
                    except StageExecutionError:
                        raise
                    except SpectralChainException as e:
                        raise StageExecutionError(index, node.kind.value, str(e)) from e
                    except Exception as e:
                        raise StageExecutionError(
                            index, node.kind.value, f"{type(e).__name__}: {e}"
                        ) from e
                elapsed = round((time.perf_counter() - started) * 1000.0, 3)
                durations.append(elapsed)
                if node.is_transform:
                    domain = "boundary"

                stages.append(
                    StageRecord(
                        index=index,
                        kind=node.kind.value,
                        symbol=node.symbol,
                        domain=domain,
                        input_shape=input_shape,
                        output_shape=list(state.source_shape),
                        transforms=TransformCounts.from_tally(tally).minus(before),
                    )
                )
                log.info(
                    **wrap_constants(
                        message="Stage execution complete",
                        **{
                            LC.EVENT_TYPE: "stage",
                            LC.ACTION: "execute_end",
                            LC.STAGE_INDEX: index,
                            LC.OP_KIND: node.kind.value,
                            LC.SHAPE: list(state.source_shape),
                            LC.DURATION_MS: elapsed,
                        },
                    )
                )
            counts = TransformCounts.from_tally(tally)

        output = state.spatial
        report = RunReport(
            version=spectralchain.__version__,
            pipeline=config.name,
            seed=config.seed,
            mode=self.mode.value,
            planning_mode=self.plan.mode.value,
            plan=self.plan.render(),
            predicted_transform_count=self.plan.transform_count,
            measured_transform_count=counts.boundary,
            transforms=counts,
            stages=stages,
            cost=self.cost,
            output_shape=list(output.shape),
            output_digest=output.digest(),
        )

        if not report.counts_match:
            log.error(
                **wrap_constants(
                    message="Measured transform count differs from planner prediction",
                    **{
                        LC.EVENT_TYPE: "executor",
                        LC.ACTION: "transform_count_mismatch",
                        LC.TRANSFORM_COUNT: report.measured_transform_count,
                        LC.PREDICTED_COUNT: report.predicted_transform_count,
                    },
                )
            )
        log.info(
            **wrap_constants(
                message="Pipeline execution completed",
                **{
                    LC.EVENT_TYPE: "executor",
                    LC.ACTION: "execution_end",
                    LC.SHAPE: list(output.shape),
                    LC.TRANSFORM_COUNT: report.measured_transform_count,
                    LC.PREDICTED_COUNT: report.predicted_transform_count,
                    LC.DURATION_MS: round(sum(durations), 3),
                    LC.SUCCESS: report.counts_match,
                },
            )
        )
        return RunResult(output=output, report=report, stage_durations_ms=durations)


def _resolved(config: Union[PipelineConfig, ResolvedPipeline]) -> ResolvedPipeline:
    if isinstance(config, ResolvedPipeline):
        return config
    return resolve_pipeline(config)


async def run_pipeline_async(
    config: Union[PipelineConfig, ResolvedPipeline],
    mode: Union[ExecutionMode, PlanningMode, str, None] = None,
    semaphore: Optional[asyncio.Semaphore] = None,
    cache: Optional[KernelSpectrumCache] = None,
) -> RunResult:
    """Resolves `config` if needed and executes it in `mode` (default: the config's)."""
    executor = PipelineExecutor(_resolved(config), mode, semaphore=semaphore, cache=cache)
    return await executor.execute()


def run_pipeline(
    config: Union[PipelineConfig, ResolvedPipeline],
    mode: Union[ExecutionMode, PlanningMode, str, None] = None,
    cache: Optional[KernelSpectrumCache] = None,
) -> RunResult:
    """
    Executes the planned pipeline and returns the output map with its report.

    The measured signal transform count in the report always equals the
    planner's count for the same graph and mode.

    Raises:
        PipelineConfigurationError: if inputs fail to load or validate.
        InvalidPlanningModeError: if `mode` is unknown.
        StageExecutionError: if a stage fails.
    """
    return asyncio.run(run_pipeline_async(config, mode, cache=cache))
