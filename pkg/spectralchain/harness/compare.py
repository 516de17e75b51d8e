import asyncio
from typing import Optional

import numpy as np

import spectralchain
from spectralchain.core.exceptions import EquivalenceCheckError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import ActivationMode
from spectralchain.core.numerics import relative_error
from spectralchain.core.settings import current_settings
from spectralchain.harness.config import PipelineConfig, resolve_pipeline
from spectralchain.harness.executor import (
    ExecutionMode,
    PipelineExecutor,
    RunResult,
    run_pipeline_async,
)
from spectralchain.harness.reports import DiscrepancyReport

# Outputs agreeing within this relative error are treated as identical.
EQUIVALENCE_TOLERANCE = 1e-9


async def compare_modes_async(
    config: PipelineConfig, semaphore: Optional[asyncio.Semaphore] = None
) -> DiscrepancyReport:
    """
    Runs the pipeline once with position-mask activations and once with ReLU
    activations, concurrently, and reports how the outputs differ.
    """
    if semaphore is None:
        semaphore = asyncio.Semaphore(current_settings().max_workers)
    masked_pipeline = resolve_pipeline(config.with_activation_mode(ActivationMode.PAPER_MASK))
    relu_pipeline = resolve_pipeline(
        config.with_activation_mode(ActivationMode.TRUE_RELU_ROUNDTRIP)
    )
    masked, relu = await asyncio.gather(
        PipelineExecutor(masked_pipeline, config.mode, semaphore=semaphore).execute(),
        PipelineExecutor(relu_pipeline, config.mode, semaphore=semaphore).execute(),
    )

    a = masked.output.samples
    b = relu.output.samples
    scale = max(1.0, float(np.max(np.abs(a))))
    threshold = EQUIVALENCE_TOLERANCE * scale
    diff = np.abs(a - b)
    differing = diff > threshold
    negative = a < -threshold

    report = DiscrepancyReport(
        version=spectralchain.__version__,
        pipeline=config.name,
        seed=config.seed,
        planning_mode=masked.report.planning_mode,
        max_abs_diff=float(np.max(diff)),
        rms_diff=float(np.sqrt(np.mean(diff**2))),
        fraction_of_pixels_differing=float(np.count_nonzero(differing)) / diff.size,
        pixels_differing=int(np.count_nonzero(differing)),
        negative_masked_pixels=int(np.count_nonzero(negative)),
        differences_match_negative_pixels=bool(np.array_equal(differing, negative)),
        transform_counts={
            ActivationMode.PAPER_MASK.value: masked.report.measured_transform_count,
            ActivationMode.TRUE_RELU_ROUNDTRIP.value: relu.report.measured_transform_count,
        },
        stage_transforms={
            ActivationMode.PAPER_MASK.value: [s.transforms for s in masked.report.stages],
            ActivationMode.TRUE_RELU_ROUNDTRIP.value: [
                s.transforms for s in relu.report.stages
            ],
        },
    )
    SpectralLogger.get().info(
        **wrap_constants(
            message="Activation modes compared",
            **{
                LC.EVENT_TYPE: "harness",
                LC.ACTION: "modes_compared",
                LC.PIPELINE_NAME: config.name,
                LC.CUSTOM: {
                    "max_abs_diff": report.max_abs_diff,
                    "fraction_of_pixels_differing": report.fraction_of_pixels_differing,
                    "differences_match_negative_pixels": report.differences_match_negative_pixels,
                },
            },
        )
    )
    return report


def compare_modes(config: PipelineConfig) -> DiscrepancyReport:
    """Synchronous wrapper around `compare_modes_async`."""
    return asyncio.run(compare_modes_async(config))


def check_discrepancy(report: DiscrepancyReport) -> None:
    """
    Raises:
        EquivalenceCheckError: unless the two activation modes differ exactly
            at the negative pixels of the masked output.
    """
    if not report.differences_match_negative_pixels:
        raise EquivalenceCheckError(
            "activation_discrepancy",
            f"{report.pixels_differing} differing pixel(s) vs "
            f"{report.negative_masked_pixels} negative masked pixel(s)",
        )


async def verify_run_async(
    config: PipelineConfig, result: RunResult
) -> float:
    """
    Checks a run against the planner and against the oracle execution of the
    same config.

    Returns:
        The relative error between the run's output and the oracle output.

    Raises:
        EquivalenceCheckError: if transform counts disagree or the outputs
            differ beyond tolerance.
    """
    report = result.report
    if not report.counts_match:
        raise EquivalenceCheckError(
            "transform_count",
            f"measured {report.measured_transform_count}, "
            f"planned {report.predicted_transform_count}",
        )
    oracle = await run_pipeline_async(config, ExecutionMode.ORACLE)
    error = relative_error(result.output.samples, oracle.output.samples)
    if not error <= EQUIVALENCE_TOLERANCE:
        raise EquivalenceCheckError(
            "oracle_equivalence",
            f"relative error {error:.3e} exceeds {EQUIVALENCE_TOLERANCE:.0e}",
        )
    SpectralLogger.get().info(
        **wrap_constants(
            message="Run verified against oracle",
            **{
                LC.EVENT_TYPE: "harness",
                LC.ACTION: "check_passed",
                LC.MODE: report.mode,
                LC.SUCCESS: True,
                LC.CUSTOM: {"relative_error": error},
            },
        )
    )
    return error


def verify_run(config: PipelineConfig, result: RunResult) -> float:
    return asyncio.run(verify_run_async(config, result))
