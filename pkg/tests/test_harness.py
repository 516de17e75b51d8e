import asyncio
import json

import numpy as np
import pytest

from spectralchain.core.exceptions import (
    EquivalenceCheckError,
    InvalidPlanningModeError,
    PipelineConfigurationError,
    StageExecutionError,
)
from spectralchain.core.numerics import relative_error
from spectralchain.core.settings import MAX_WORKERS_ENV, SpectralSettings, current_settings
from spectralchain.harness.compare import check_discrepancy, compare_modes_async
from spectralchain.harness.config import PipelineConfig, load_config, resolve_pipeline
from spectralchain.harness.csvio import load_map, save_map
from spectralchain.harness.executor import (
    ExecutionMode,
    PipelineExecutor,
    run_pipeline,
    run_pipeline_async,
)
from spectralchain.harness.reports import (
    DiscrepancyReport,
    RunReport,
    read_report,
    report_json,
    write_report,
)
from spectralchain.harness.synthetic import SyntheticStream
from spectralchain.spectral.kernels import KernelSpectrumCache
from spectralchain.transforms.fourier import forward_transform
from spectralchain.transforms.maps import SpatialMap


def _write_config(tmp_path, body: dict, name: str = "pipeline.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return path


def _synthetic_config(ops, size=8, seed=7, **extra) -> PipelineConfig:
    return PipelineConfig.model_validate(
        {
            "name": "synthetic",
            "input": {"synthetic": {"height": size, "width": size}},
            "ops": ops,
            "seed": seed,
            **extra,
        }
    )


CONV = {"kind": "convolution", "synthetic": {"height": 3, "width": 3}}
MASK = {"kind": "activation", "activation_mode": "paper_mask"}


def test_01_synthetic_stream_is_the_documented_lcg():
    stream = SyntheticStream(0)
    assert stream.next_uint64() == 1442695040888963407
    expected = (6364136223846793005 * 1442695040888963407 + 1442695040888963407) % 2**64
    assert stream.next_uint64() == expected
    value = SyntheticStream(0).uniform()
    assert value == -1.0 + 2.0 * ((1442695040888963407 >> 11) / 2.0**53)


def test_02_synthetic_grids_are_seeded_and_bounded():
    a = SyntheticStream(42).grid(4, 5)
    b = SyntheticStream(42).grid(4, 5)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert np.all(a.samples >= -1.0) and np.all(a.samples < 1.0)
    positive = SyntheticStream(3).grid(3, 3, 0.5, 2.0)
    assert np.all(positive.samples >= 0.5)
    with pytest.raises(PipelineConfigurationError):
        SyntheticStream(-1)


def test_03_csv_round_trip_is_exact(tmp_path):
    m = SpatialMap(np.array([[0.1, -1.0 / 3.0], [1e-300, 12345.678901234567]]))
    save_map(m, tmp_path / "m.csv")
    np.testing.assert_array_equal(load_map(tmp_path / "m.csv").samples, m.samples)
    single = SpatialMap.from_rows([[1.5, 2.5, 3.5]])
    save_map(single, tmp_path / "row.csv")
    assert load_map(tmp_path / "row.csv").shape == (1, 3)


def test_04_csv_errors_carry_the_path(tmp_path):
    with pytest.raises(PipelineConfigurationError) as info:
        load_map(tmp_path / "missing.csv")
    assert info.value.path.endswith("missing.csv")
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    with pytest.raises(PipelineConfigurationError):
        load_map(ragged)


def test_05_config_validation_errors(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(PipelineConfigurationError):
        load_config(bad_json)
    with pytest.raises(PipelineConfigurationError):
        load_config(_write_config(tmp_path, {"input": {"synthetic": {"height": 4, "width": 4}}, "ops": []}))
    with pytest.raises(PipelineConfigurationError):
        load_config(
            _write_config(
                tmp_path,
                {"input": {"synthetic": {"height": 4, "width": 4}}, "ops": [{"kind": "dropout"}]},
            )
        )
    with pytest.raises(PipelineConfigurationError):
        load_config(_write_config(tmp_path, {"input": {}, "ops": [MASK]}))


def test_06_references_resolve_relative_to_config(tmp_path):
    save_map(SpatialMap.from_rows([[1, -2], [3, 4]]), tmp_path / "image.csv")
    save_map(SpatialMap.from_rows([[1]]), tmp_path / "delta.csv")
    path = _write_config(
        tmp_path,
        {
            "input": {"path": "image.csv"},
            "ops": [{"kind": "convolution", "kernels": ["delta.csv"]}, MASK],
        },
    )
    config = load_config(path)
    assert config.name == "pipeline"
    pipeline = resolve_pipeline(config)
    assert pipeline.image.shape == (2, 2)
    assert pipeline.kernels[0].channel_count == 1

    missing = _write_config(
        tmp_path,
        {"input": {"path": "image.csv"}, "ops": [{"kind": "convolution", "kernels": ["nope.csv"]}]},
        name="missing.json",
    )
    with pytest.raises(PipelineConfigurationError):
        resolve_pipeline(load_config(missing))


def test_07_inconsistent_dimensions_are_config_errors():
    config = _synthetic_config([{"kind": "pooling", "out_height": 9, "out_width": 2}], size=4)
    with pytest.raises(PipelineConfigurationError):
        resolve_pipeline(config)


def test_08_delta_chain_returns_input_with_two_transforms(tmp_path):
    save_map(SpatialMap.from_rows([[1, -2], [3, 4]]), tmp_path / "image.csv")
    save_map(SpatialMap.from_rows([[1]]), tmp_path / "delta.csv")
    config = load_config(
        _write_config(
            tmp_path,
            {
                "input": {"path": "image.csv"},
                "ops": [{"kind": "convolution", "kernels": ["delta.csv"]}, MASK],
                "mode": "fused_spectral",
            },
        )
    )
    result = run_pipeline(config)
    np.testing.assert_allclose(result.output.samples, [[1, -2], [3, 4]], atol=1e-12)
    assert result.report.measured_transform_count == 2
    assert result.report.predicted_transform_count == 2


@pytest.mark.asyncio
async def test_09_fused_chain_matches_oracle():
    config = _synthetic_config([CONV, MASK, CONV, MASK])
    fused = await run_pipeline_async(config, ExecutionMode.FUSED_SPECTRAL)
    oracle = await run_pipeline_async(config, ExecutionMode.ORACLE)
    assert fused.output.shape == (12, 12)
    assert relative_error(fused.output.samples, oracle.output.samples) <= 1e-9
    assert fused.report.plan == "F -> C -> A -> C -> A -> F^-1"


@pytest.mark.asyncio
@pytest.mark.parametrize("mode", ["naive", "legacy", "fused", "oracle"])
async def test_10_measured_counts_equal_predictions(mode):
    ops = [CONV, MASK, {"kind": "boundary"}, CONV, {"kind": "activation", "activation_mode": "true_relu_roundtrip"}]
    config = _synthetic_config(ops)
    result = await run_pipeline_async(config, mode)
    report = result.report
    assert report.counts_match
    assert report.measured_transform_count == sum(
        s.transforms.signal_forward + s.transforms.signal_inverse for s in report.stages
    )
    if mode == "fused":
        assert report.measured_transform_count == 4


@pytest.mark.asyncio
async def test_11_pooling_inside_fused_region_matches_oracle():
    ops = [CONV, MASK, {"kind": "pooling", "out_height": 5, "out_width": 4}, CONV, MASK]
    config = _synthetic_config(ops, size=9)
    fused = await run_pipeline_async(config, "fused")
    legacy = await run_pipeline_async(config, "legacy")
    oracle = await run_pipeline_async(config, "oracle")
    assert fused.report.measured_transform_count == 2
    assert fused.report.transforms.embedded > 0
    assert relative_error(fused.output.samples, oracle.output.samples) <= 1e-9
    assert relative_error(legacy.output.samples, oracle.output.samples) <= 1e-9


@pytest.mark.asyncio
async def test_12_exact_padding_gives_the_same_result():
    fast = _synthetic_config([CONV, MASK, CONV], size=11, fast_padding=True)
    exact = _synthetic_config([CONV, MASK, CONV], size=11, fast_padding=False)
    a = await run_pipeline_async(fast)
    b = await run_pipeline_async(exact)
    assert relative_error(a.output.samples, b.output.samples) <= 1e-10


def test_13_runs_are_deterministic():
    config = _synthetic_config([CONV, MASK, CONV, MASK], seed=123)
    first = run_pipeline(config, "fused")
    second = run_pipeline(config, "fused")
    np.testing.assert_array_equal(first.output.samples, second.output.samples)
    assert first.report.model_dump_json() == second.report.model_dump_json()


def test_14_invalid_execution_mode():
    with pytest.raises(InvalidPlanningModeError):
        run_pipeline(_synthetic_config([CONV]), "warp")


@pytest.mark.asyncio
async def test_15_stage_failures_name_the_stage(monkeypatch):
    pipeline = resolve_pipeline(_synthetic_config([CONV, MASK]))
    executor = PipelineExecutor(pipeline, "fused")

    def explode(*args, **kwargs):
        raise FloatingPointError("overflow")

    monkeypatch.setattr(executor, "_spectral_stage", explode)
    with pytest.raises(StageExecutionError) as info:
        await executor.execute()
    assert info.value.stage_index == 1
    assert info.value.kind == "convolution"


@pytest.mark.asyncio
async def test_16_compare_on_signed_input_flags_negative_pixels():
    config = _synthetic_config([CONV, MASK], seed=99)
    report = await compare_modes_async(config)
    assert 0.0 < report.fraction_of_pixels_differing <= 1.0
    assert report.differences_match_negative_pixels
    assert report.pixels_differing == report.negative_masked_pixels
    assert report.transform_counts == {"paper_mask": 2, "true_relu_roundtrip": 2}


@pytest.mark.asyncio
async def test_17_compare_on_nonnegative_input_agrees():
    config = PipelineConfig.model_validate(
        {
            "input": {"synthetic": {"height": 6, "width": 6, "low": 0.0, "high": 1.0}},
            "ops": [
                {"kind": "convolution", "synthetic": {"height": 3, "width": 3, "low": 0.0, "high": 1.0, "count": 2}},
                MASK,
            ],
        }
    )
    report = await compare_modes_async(config, semaphore=asyncio.Semaphore(1))
    assert report.max_abs_diff <= 1e-9


def test_18_reports_round_trip(tmp_path):
    result = run_pipeline(_synthetic_config([CONV, MASK]), "legacy")
    write_report(result.report, tmp_path / "run.json")
    parsed = read_report(RunReport, tmp_path / "run.json")
    assert parsed == result.report
    assert parsed.model_dump_json() == result.report.model_dump_json()
    with pytest.raises(PipelineConfigurationError):
        read_report(DiscrepancyReport, tmp_path / "run.json")


def test_19_settings_from_environment(monkeypatch):
    monkeypatch.setenv(MAX_WORKERS_ENV, "3")
    assert SpectralSettings.from_env().max_workers == 3
    monkeypatch.setenv(MAX_WORKERS_ENV, "0")
    with pytest.raises(PipelineConfigurationError):
        SpectralSettings.from_env()


def test_20_discrepancy_check_rejects_misaligned_differences():
    report = DiscrepancyReport(
        version="0",
        pipeline="p",
        seed=0,
        planning_mode="fused_spectral",
        max_abs_diff=0.5,
        rms_diff=0.1,
        fraction_of_pixels_differing=0.5,
        pixels_differing=2,
        negative_masked_pixels=1,
        differences_match_negative_pixels=False,
        transform_counts={},
        stage_transforms={},
    )
    with pytest.raises(EquivalenceCheckError):
        check_discrepancy(report)
    check_discrepancy(report.model_copy(update={"differences_match_negative_pixels": True}))


def test_21_every_run_transforms_its_own_kernels():
    config = _synthetic_config([CONV, MASK, CONV, MASK], seed=123)
    first = run_pipeline(config, "fused")
    second = run_pipeline(config, "fused")
    assert first.report.transforms.kernel_forward > 0
    assert first.report.transforms == second.report.transforms
    assert [s.transforms for s in first.report.stages] == [
        s.transforms for s in second.report.stages
    ]


def test_22_a_shared_cache_is_reused_across_runs():
    config = _synthetic_config([CONV, MASK, CONV, MASK], seed=123)
    cache = KernelSpectrumCache()
    first = run_pipeline(config, "fused", cache=cache)
    second = run_pipeline(config, "fused", cache=cache)
    assert first.report.transforms.kernel_forward == len(cache)
    assert second.report.transforms.kernel_forward == 0
    assert cache.hits == first.report.transforms.kernel_forward
    np.testing.assert_array_equal(first.output.samples, second.output.samples)


def test_23_report_floats_use_17_significant_digits(tmp_path):
    report = DiscrepancyReport(
        version="0",
        pipeline="p",
        seed=0,
        planning_mode="fused_spectral",
        max_abs_diff=0.1,
        rms_diff=2.0,
        fraction_of_pixels_differing=1.0 / 3.0,
        pixels_differing=1,
        negative_masked_pixels=1,
        differences_match_negative_pixels=True,
        transform_counts={"paper_mask": 2},
        stage_transforms={},
    )
    text = report_json(report)
    assert '"max_abs_diff": 0.10000000000000001' in text
    assert '"fraction_of_pixels_differing": 0.33333333333333331' in text
    assert '"rms_diff": 2,' in text
    write_report(report, tmp_path / "d.json")
    assert read_report(DiscrepancyReport, tmp_path / "d.json") == report


def test_24_settings_are_resolved_once(monkeypatch):
    current_settings.cache_clear()
    monkeypatch.setenv(MAX_WORKERS_ENV, "2")
    try:
        first = current_settings()
        assert first.max_workers == 2
        monkeypatch.setenv(MAX_WORKERS_ENV, "0")
        assert current_settings() is first
        spectrum = forward_transform(SpatialMap.from_rows([[1.0]]), 2, 2)
        assert spectrum.padded_shape == (2, 2)
        current_settings.cache_clear()
        with pytest.raises(PipelineConfigurationError):
            current_settings()
    finally:
        current_settings.cache_clear()
