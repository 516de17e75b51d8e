import time
from typing import List, Optional, Union

import numpy as np
import scipy.signal

import spectralchain
from spectralchain.core.exceptions import PipelineConfigurationError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import ActivationMode
from spectralchain.harness.config import PipelineConfig, resolve_pipeline
from spectralchain.harness.executor import ExecutionMode, parse_execution_mode, run_pipeline
from spectralchain.harness.reports import BenchReport, CrossoverRow, ModeTiming
from spectralchain.harness.synthetic import SyntheticStream
from spectralchain.planner.graph import LayerKind
from spectralchain.spectral.block import SpectralBlockConfig, run_spectral_block
from spectralchain.spectral.kernels import KernelSet, KernelSpectrumCache
from spectralchain.transforms.maps import SpatialMap

BENCH_MODES = (
    ExecutionMode.NAIVE,
    ExecutionMode.LEGACY_SPECTRAL,
    ExecutionMode.FUSED_SPECTRAL,
)


def _median_ms(samples: List[float]) -> float:
    return round(float(np.median(samples)), 3)


def _direct(image: SpatialMap, kernels: KernelSet) -> np.ndarray:
    return sum(
        scipy.signal.convolve2d(image.samples, k.samples, mode="full")
        for k in kernels.kernels
    )


def _time_ms(fn, repetitions: int) -> float:
    samples = []
    for _ in range(repetitions):
        started = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - started) * 1000.0)
    return _median_ms(samples)


def benchmark(
    config: PipelineConfig,
    repetitions: int,
    modes: Optional[List[Union[ExecutionMode, str]]] = None,
) -> BenchReport:
    """
    Times the pipeline in each mode and every convolution stage in isolation.

    Per mode, the report holds the median total and per-stage wall-clock
    times over `repetitions` runs, the output digest, and whether every
    repetition produced bitwise-identical output. Crossover rows compare
    direct convolution with a spectral block (activation `none`) on each
    convolution stage's shapes, with kernel spectra precomputed as in the
    pipeline.

    Raises:
        PipelineConfigurationError: if `repetitions` is below 1.
    """
    if repetitions < 1:
        raise PipelineConfigurationError(f"repetitions must be >= 1, got {repetitions}")
    log = SpectralLogger.get()
    pipeline = resolve_pipeline(config)
    modes = [parse_execution_mode(m) for m in (modes if modes is not None else BENCH_MODES)]

    timings: List[ModeTiming] = []
    for mode in modes:
        totals, per_stage, digests = [], [], set()
        transform_count = 0
        # Shared across repetitions: after the first run kernel spectra are precomputed.
        cache = KernelSpectrumCache()
        for _ in range(repetitions):
            result = run_pipeline(pipeline, mode, cache=cache)
            totals.append(sum(result.stage_durations_ms))
            per_stage.append(result.stage_durations_ms)
            digests.add(result.report.output_digest)
            transform_count = result.report.measured_transform_count
        timings.append(
            ModeTiming(
                mode=mode.value,
                median_ms=_median_ms(totals),
                stage_medians_ms=[_median_ms(list(s)) for s in zip(*per_stage)],
                transform_count=transform_count,
                output_digest=sorted(digests)[0],
                deterministic=len(digests) == 1,
            )
        )

    crossover: List[CrossoverRow] = []
    stream = SyntheticStream(config.seed)
    block_config = SpectralBlockConfig(
        activation_mode=ActivationMode.NONE, fast_padding=config.fast_padding
    )
    for position, node in enumerate(pipeline.graph.nodes):
        if node.kind is not LayerKind.CONVOLUTION:
            continue
        kernels = pipeline.kernels[position]
        image = stream.grid(node.height, node.width)
        cache = KernelSpectrumCache()
        run_spectral_block(image, kernels, block_config, cache)  # warm the kernel cache
        direct_ms = _time_ms(lambda: _direct(image, kernels), repetitions)
        spectral_ms = _time_ms(
            lambda: run_spectral_block(image, kernels, block_config, cache), repetitions
        )
        crossover.append(
            CrossoverRow(
                stage_index=position,
                n=node.n,
                k=node.k,
                channels=node.channels,
                direct_ms=direct_ms,
                spectral_ms=spectral_ms,
                spectral_faster=spectral_ms < direct_ms,
            )
        )

    first_conv = next(
        (n for n in pipeline.graph.nodes if n.kind is LayerKind.CONVOLUTION), None
    )
    report = BenchReport(
        version=spectralchain.__version__,
        pipeline=config.name,
        seed=config.seed,
        repetitions=repetitions,
        n=pipeline.image.height * pipeline.image.width,
        k=first_conv.k if first_conv is not None else None,
        modes=timings,
        crossover=crossover,
    )
    log.info(
        **wrap_constants(
            message="Benchmark completed",
            **{
                LC.EVENT_TYPE: "bench",
                LC.ACTION: "bench_completed",
                LC.PIPELINE_NAME: config.name,
                LC.REPETITIONS: repetitions,
                LC.CUSTOM: {t.mode: t.median_ms for t in timings},
            },
        )
    )
    return report
