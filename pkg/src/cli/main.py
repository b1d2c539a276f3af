"""
edgecc command line.

    edgecc analytic --config sample_configs/paper_fig2.cfg --out fig2.csv
    edgecc simulate --config sample_configs/paper_fig2.cfg --seed 7
    edgecc cce      --config sample_configs/peak_hour.cfg --out peak.csv
    edgecc validate --config sample_configs/paper_fig2.cfg --replications 2000 --seed 7

CSV goes to --out, or standard output. Logs and the one-line summary go
to standard error. Exit status: 0 success, 1 validation failure, 2 usage
or configuration error.
"""

import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import click

from src.analytic.sweep import write_sweep_csv
from src.cce.scenario import write_summary_csv, write_timeseries_csv
from src.harness.config import ScenarioConfig, load_config, with_overrides
from src.harness.experiments import analytic_curves, run_cce, simulate, write_csv
from src.harness.validation import CellStatus, validate, write_report_csv
from src.shared.errors import ConfigError, EdgeSimError
from src.shared.logs import configure_logging
from src.shared.seeding import MAX_SEED

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2


def _config_option(f: Callable) -> Callable:
    return click.option(
        "--config", "config_path", required=True,
        type=click.Path(dir_okay=False, path_type=Path), help="Scenario configuration file",
    )(f)


def _out_option(f: Callable) -> Callable:
    return click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
        help="CSV output path (default: standard output)",
    )(f)


def _quiet_option(f: Callable) -> Callable:
    return click.option("--quiet", is_flag=True, help="Only warnings; no summary line")(f)


def _sampling_options(f: Callable) -> Callable:
    f = click.option(
        "--replications", type=click.IntRange(min=1), default=None,
        help="Override sim.replications",
    )(f)
    return click.option(
        "--seed", type=click.IntRange(0, MAX_SEED), default=None, help="Override sim.seed (u64)",
    )(f)


def _load(
    config_path: Path, seed: int | None = None, replications: int | None = None
) -> ScenarioConfig:
    config = load_config(config_path)
    return with_overrides(config, seed=seed, replications=replications)


def _sink(out: Path | None):
    return out if out is not None else sys.stdout


def _summary(quiet: bool, text: str) -> None:
    if not quiet:
        click.echo(text, err=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Edge-assisted congestion control: analytic model, simulation and CCE runs."""


@cli.command()
@_config_option
@_out_option
@_quiet_option
def analytic(config_path: Path, out: Path | None, quiet: bool) -> int:
    """Closed-form curves over the deadline grid."""
    configure_logging(quiet)
    config = _load(config_path)
    table = analytic_curves(config)
    write_sweep_csv(table, _sink(out))
    _summary(quiet, f"analytic: {len(config.population.h0)} h0 values x "
                    f"{len(table) // len(config.population.h0)} deadlines -> {out or 'stdout'}")
    return EXIT_OK


@cli.command(name="simulate")
@_config_option
@_out_option
@_sampling_options
@_quiet_option
def simulate_command(
    config_path: Path, out: Path | None, seed: int | None, replications: int | None, quiet: bool
) -> int:
    """Monte-Carlo points next to their closed-form values."""
    configure_logging(quiet)
    config = _load(config_path, seed, replications)
    table = simulate(config)
    write_csv(table, _sink(out))
    _summary(quiet, f"simulate: {len(table)} points, {config.sim.replications} replications "
                    f"each, seed {config.sim.seed} -> {out or 'stdout'}")
    return EXIT_OK


@cli.command()
@_config_option
@_out_option
@_quiet_option
def cce(config_path: Path, out: Path | None, quiet: bool) -> int:
    """Load profile with and without the congestion control engine."""
    configure_logging(quiet)
    config = _load(config_path)
    metrics = run_cce(config)
    write_timeseries_csv(metrics, _sink(out))
    if out is not None:
        summary_path = out.with_name(f"{out.stem}.summary.csv")
        write_summary_csv(metrics, summary_path)
        logger.info("✓ Wrote summary to %s", summary_path)
    _summary(quiet, f"cce: peak utilization {metrics.peak_baseline_util:.3f} -> "
                    f"{metrics.peak_cce_util:.3f}, {len(metrics.actions)} actions, "
                    f"{metrics.deadline_misses} deadline misses")
    return EXIT_OK


@cli.command(name="validate")
@_config_option
@_out_option
@_sampling_options
@_quiet_option
def validate_command(
    config_path: Path, out: Path | None, seed: int | None, replications: int | None, quiet: bool
) -> int:
    """Simulator against closed forms; exit 1 if any cell fails."""
    configure_logging(quiet)
    config = _load(config_path, seed, replications)
    report = validate(config)
    write_report_csv(report, _sink(out))
    degenerate = sum(c.status is CellStatus.DEGENERATE for c in report.cells)
    verdict = "PASS" if report.passed else "FAIL"
    _summary(quiet, f"validate: {verdict} {len(report.cells) - len(report.failures)}/"
                    f"{len(report.cells)} cells ({degenerate} degenerate)")
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one subcommand and return its exit status.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
    """
    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        with click.Context(cli, info_name="edgecc") as ctx:
            click.echo(cli.get_help(ctx), err=True)
        return EXIT_USAGE

    try:
        status = cli.main(args=args, prog_name="edgecc", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except (ConfigError, FileNotFoundError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    except EdgeSimError as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        return EXIT_USAGE
    return EXIT_OK if status is None else int(status)


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
