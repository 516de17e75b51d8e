import json

from click.testing import CliRunner

from spectralchain.core.logger import SpectralLogger
from spectralchain.harness.__main__ import cli
from spectralchain.harness.csvio import load_map, save_map
from spectralchain.harness.reports import BenchReport, DiscrepancyReport, RunReport
from spectralchain.transforms.maps import SpatialMap


def _config(tmp_path, ops, **extra):
    body = {"input": {"synthetic": {"height": 8, "width": 8}}, "ops": ops, "seed": 11, **extra}
    path = tmp_path / "net.json"
    path.write_text(json.dumps(body))
    return str(path)


CONV = {"kind": "convolution", "synthetic": {"height": 3, "width": 3, "count": 2}}
MASK = {"kind": "activation"}


def test_01_run_writes_map_and_report(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV, MASK, CONV, MASK])
    out = tmp_path / "out.csv"
    report_path = tmp_path / "report.json"
    result = runner.invoke(
        cli,
        ["run", "--config", config, "--mode", "fused", "--out", str(out), "--report", str(report_path), "--check"],
    )
    assert result.exit_code == 0, result.output
    assert load_map(out).shape == (12, 12)
    report = RunReport.model_validate_json(report_path.read_text())
    assert report.mode == "fused_spectral"
    assert report.measured_transform_count == 2
    assert report.pipeline == "net"


def test_02_run_prints_report_without_report_path(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV, MASK])
    result = runner.invoke(cli, ["run", "--config", config, "--mode", "legacy", "--out", str(tmp_path / "o.csv")])
    assert result.exit_code == 0, result.output
    report = RunReport.model_validate_json(result.output)
    assert report.plan == "F -> C -> F^-1 -> A"


def test_03_missing_config_fails():
    runner = CliRunner()
    result = runner.invoke(cli, ["run", "--config", "nope.json", "--out", "x.csv"])
    assert result.exit_code != 0
    assert "Pipeline configuration error" in result.output


def test_04_invalid_mode_is_rejected(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV])
    result = runner.invoke(cli, ["run", "--config", config, "--mode", "greedy", "--out", "x.csv"])
    assert result.exit_code != 0


def test_05_compare_check_on_known_image(tmp_path):
    save_map(SpatialMap.from_rows([[1, -2], [3, 4]]), tmp_path / "image.csv")
    save_map(SpatialMap.from_rows([[1]]), tmp_path / "delta.csv")
    body = {
        "input": {"path": "image.csv"},
        "ops": [{"kind": "convolution", "kernels": ["delta.csv"]}, MASK],
    }
    (tmp_path / "pair.json").write_text(json.dumps(body))
    out = tmp_path / "discrepancy.json"
    runner = CliRunner()
    result = runner.invoke(
        cli, ["compare", "--config", str(tmp_path / "pair.json"), "--out", str(out), "--check"]
    )
    assert result.exit_code == 0, result.output
    report = DiscrepancyReport.model_validate_json(out.read_text())
    assert report.pixels_differing == 1
    assert abs(report.max_abs_diff - 2.0) <= 1e-12
    assert report.fraction_of_pixels_differing == 0.25


def test_06_plan_prints_graph_and_cost(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV, MASK, {"kind": "boundary"}, CONV, MASK])
    result = runner.invoke(cli, ["plan", "--config", config])
    assert result.exit_code == 0, result.output
    first_line, _, rest = result.output.partition("\n")
    assert first_line == "F -> C -> A -> F^-1 -> B -> F -> C -> A -> F^-1"
    cost = json.loads(rest)
    assert cost["transform_count"] == 4
    assert "activation_note" in cost


def test_07_bench_reports_every_mode(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV, MASK])
    out = tmp_path / "bench.json"
    result = runner.invoke(cli, ["bench", "--config", config, "--reps", "2", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = BenchReport.model_validate_json(out.read_text())
    assert [t.mode for t in report.modes] == ["naive", "legacy_spectral", "fused_spectral"]
    assert all(t.deterministic for t in report.modes)
    assert (report.n, report.k) == (64, 9)
    assert len(report.crossover) == 1


def test_08_log_file_option_writes_json_lines(tmp_path):
    runner = CliRunner()
    config = _config(tmp_path, [CONV, MASK])
    log_path = tmp_path / "run.log"
    try:
        result = runner.invoke(cli, ["--log-file", str(log_path), "plan", "--config", config])
    finally:
        SpectralLogger.reset()
    assert result.exit_code == 0, result.output
    entries = [json.loads(line) for line in log_path.read_text().splitlines()]
    assert any(e.get("action") == "transforms_placed" for e in entries)
