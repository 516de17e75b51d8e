from spectralchain.harness.config import (
    PipelineConfig,
    ResolvedPipeline,
    load_config,
    resolve_pipeline,
)
from spectralchain.harness.csvio import load_map, save_map
from spectralchain.harness.synthetic import SyntheticStream
from spectralchain.harness.executor import (
    ExecutionMode,
    PipelineExecutor,
    RunResult,
    run_pipeline,
    run_pipeline_async,
)
from spectralchain.harness.compare import compare_modes, compare_modes_async
from spectralchain.harness.bench import benchmark
from spectralchain.harness.reports import (
    BenchReport,
    DiscrepancyReport,
    RunReport,
)

__all__ = [
    "BenchReport",
    "DiscrepancyReport",
    "ExecutionMode",
    "PipelineConfig",
    "PipelineExecutor",
    "ResolvedPipeline",
    "RunReport",
    "RunResult",
    "SyntheticStream",
    "benchmark",
    "compare_modes",
    "compare_modes_async",
    "load_config",
    "load_map",
    "resolve_pipeline",
    "run_pipeline",
    "run_pipeline_async",
    "save_map",
]
