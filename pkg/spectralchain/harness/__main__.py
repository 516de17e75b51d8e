#!/usr/bin/env python
import click

from spectralchain.core.exceptions import SpectralChainException
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.settings import LOG_FILE_ENV
from spectralchain.harness.bench import benchmark
from spectralchain.harness.compare import check_discrepancy, compare_modes, verify_run
from spectralchain.harness.config import PipelineConfig, load_config, resolve_pipeline
from spectralchain.harness.csvio import save_map
from spectralchain.harness.executor import MODE_ALIASES, parse_execution_mode, run_pipeline
from spectralchain.harness.reports import report_json, write_report
from spectralchain.planner.cost import cost_estimate
from spectralchain.planner.placement import place_transforms

_CLI_MODES = ["naive", "legacy", "fused", "oracle"]


def _load(path: str) -> PipelineConfig:
    try:
        return load_config(path)
    except SpectralChainException as e:
        raise click.ClickException(f"❌ {e}")


def _emit(report, path) -> None:
    if path:
        write_report(report, path)
    else:
        click.echo(report_json(report))


@click.group()
@click.option(
    "--log-file",
    envvar=LOG_FILE_ENV,
    default=None,
    help="Write structured JSON logs to this file.",
)
def cli(log_file):
    """Plan, run, compare and benchmark spectral convolution pipelines."""
    if log_file:
        SpectralLogger.initialize(log_file)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--mode", type=click.Choice(_CLI_MODES), default=None, help="Override the config's mode.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Output map (CSV).")
@click.option("--report", "report_path", default=None, type=click.Path(dir_okay=False), help="Run report (JSON); stdout when omitted.")
@click.option("--check", is_flag=True, help="Fail unless counts match the plan and the output matches the oracle.")
def run(config_path, mode, out, report_path, check):
    """Execute a pipeline and write its output map."""
    config = _load(config_path)
    try:
        result = run_pipeline(config, mode)
        save_map(result.output, out)
        _emit(result.report, report_path)
        if check:
            error = verify_run(config, result)
            click.echo(f"✅ check passed (relative error {error:.3e})", err=True)
    except SpectralChainException as e:
        raise click.ClickException(f"❌ {e}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Discrepancy report (JSON).")
@click.option("--check", is_flag=True, help="Fail unless the modes differ exactly at negative masked pixels.")
def compare(config_path, out, check):
    """Compare position-mask and ReLU activations on one pipeline."""
    config = _load(config_path)
    try:
        report = compare_modes(config)
        write_report(report, out)
        click.echo(
            f"max_abs_diff={report.max_abs_diff:.17g} "
            f"fraction_of_pixels_differing={report.fraction_of_pixels_differing:.17g}"
        )
        if check:
            check_discrepancy(report)
            click.echo("✅ check passed", err=True)
    except SpectralChainException as e:
        raise click.ClickException(f"❌ {e}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--reps", default=5, show_default=True, type=click.IntRange(min=1))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Benchmark report (JSON).")
def bench(config_path, reps, out):
    """Time each planning mode and each convolution stage."""
    config = _load(config_path)
    try:
        report = benchmark(config, reps)
        write_report(report, out)
    except SpectralChainException as e:
        raise click.ClickException(f"❌ {e}")
    for timing in report.modes:
        click.echo(f"  • {timing.mode}: {timing.median_ms:.3f} ms (transforms: {timing.transform_count})")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--mode", type=click.Choice(sorted(MODE_ALIASES)), default=None, help="Override the config's mode.")
def plan(config_path, mode):
    """Print the planned graph and its cost report."""
    config = _load(config_path)
    try:
        pipeline = resolve_pipeline(config)
        planning_mode = parse_execution_mode(mode if mode else config.mode).planning_mode
        planned = place_transforms(pipeline.graph, planning_mode)
        report = cost_estimate(planned)
    except SpectralChainException as e:
        raise click.ClickException(f"❌ {e}")
    click.echo(planned.render())
    click.echo(report_json(report))


if __name__ == "__main__":
    cli()
