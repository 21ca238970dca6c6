"""CLI entrypoints."""

import functools
from collections.abc import Callable
from pathlib import Path

import click
import pydantic

from gridpeak.exceptions import (
    ArgumentError,
    IncompatibleRunsError,
    NetworkFileError,
    TopologyError,
)
from gridpeak.scenario import (
    RunRecord,
    RunSettings,
    ScenarioConfig,
    current_change_map,
    demand_factor_sweep,
    resource_path,
    run_case,
    run_comparison,
)
from gridpeak.scenario.sweep import DEFAULT_SWEEP_HOUR
from gridpeak.util import LOG_ENV_VAR, configure_logging, parse_floats, parse_hours

EXIT_INPUT_ERROR = 1
EXIT_INFEASIBLE = 2

INPUT_ERRORS = (
    ArgumentError,
    NetworkFileError,
    TopologyError,
    IncompatibleRunsError,
    FileNotFoundError,
    pydantic.ValidationError,
)

DEFAULT_FACTORS = "0.5,0.7,0.85,0.9,0.95"


def _input_errors(command: Callable[..., None]) -> Callable[..., None]:
    """Report input errors on one line, and exit with the input error code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> None:
        try:
            command(*args, **kwargs)
        except INPUT_ERRORS as e:
            click.echo(f"Error: {e}", err=True)
            raise SystemExit(EXIT_INPUT_ERROR) from e

    return wrapper


def _input_options(command: Callable[..., None]) -> Callable[..., None]:
    """Add the options shared by commands that read a scenario."""
    options = [
        click.option(
            "--network",
            type=click.Path(dir_okay=False, path_type=Path),
            default=lambda: resource_path("feeder20.json"),
            show_default="packaged feeder20.json",
            help="Network file.",
        ),
        click.option(
            "--weather",
            type=click.Path(dir_okay=False, path_type=Path),
            default=lambda: resource_path("weather_cool_windy.csv"),
            show_default="packaged weather_cool_windy.csv",
            help="Weather file.",
        ),
        click.option(
            "--prices",
            type=click.Path(dir_okay=False, path_type=Path),
            default=lambda: resource_path("prices.csv"),
            show_default="packaged prices.csv",
            help="Energy price file.",
        ),
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Run config file. Options given on the command line take precedence.",
        ),
        click.option("--hours", default=None, help="Event hours, e.g. 10-21."),
        click.option("--seed", type=int, default=None, help="Swarm seed."),
        click.option(
            "--demand-factor",
            type=float,
            default=None,
            help="Multiplier on all baseline loads.",
        ),
        click.option("--particles", type=int, default=None, help="Swarm size."),
        click.option("--iterations", type=int, default=None, help="Swarm iterations."),
        click.option(
            "--workers",
            type=int,
            default=None,
            help="Threads evaluating particles.",
        ),
    ]

    for option in reversed(options):
        command = option(command)

    return command


def _scenario(
    output_dir: Path,
    network: Path,
    weather: Path | None,
    prices: Path,
    config_path: Path | None,
    **overrides,
) -> ScenarioConfig:
    """Combine the run config file, command line options and defaults."""
    settings = (
        RunSettings.from_file(config_path) if config_path is not None else RunSettings()
    )
    data = settings.model_dump()

    swarm_keys = {
        "seed": "seed",
        "particles": "particle_count",
        "iterations": "max_iterations",
        "workers": "workers",
    }

    for key, value in overrides.items():
        if value is None:
            continue

        if key in swarm_keys:
            data["swarm"][swarm_keys[key]] = value
        elif key == "hours":
            data["event_hours"] = parse_hours(value)
        else:
            data[key] = value

    return ScenarioConfig(
        network_path=network,
        weather_path=weather,
        prices_path=prices,
        output_dir=output_dir,
        settings=RunSettings.model_validate(data),
    )


@click.group()
@click.option(
    "--log-level",
    envvar=LOG_ENV_VAR,
    default=None,
    help=f"Log level, e.g. INFO or DEBUG. Defaults to ${LOG_ENV_VAR} or WARNING.",
)
def cli(log_level: str | None) -> None:
    """Simulate and optimize peak events on radial distribution networks."""
    configure_logging(log_level)


@click.command()
@_input_options
@click.option(
    "--case",
    "case_mode",
    type=click.Choice(["static", "cvr", "cvr-dtr", "cvr_dtr"], case_sensitive=False),
    default=None,
    help="Which measures are available.",
)
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Output directory.",
)
@_input_errors
def run(output_dir: Path, **options) -> None:
    """Optimize one case of a peak event."""
    config = _scenario(output_dir, **options)
    record = run_case(config)
    schedule = record.schedule

    click.echo(
        f"{schedule.case_mode.value}: total cost {schedule.total_cost_usd:.2f} USD"
    )

    if schedule.diverged_hours:
        click.echo(
            f"Diverged hours, energy cost left out: {schedule.diverged_hours}",
            err=True,
        )

    if not schedule.feasible:
        click.echo(f"Infeasible hours: {schedule.infeasible_hours}", err=True)
        raise SystemExit(EXIT_INFEASIBLE)


@click.command()
@_input_options
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Output directory, with one subdirectory per case.",
)
@click.option(
    "--parallel-cases",
    type=click.IntRange(1, 3),
    default=1,
    show_default=True,
    help="Number of cases to run concurrently.",
)
@_input_errors
def compare(output_dir: Path, parallel_cases: int, **options) -> None:
    """Run and compare the static, cvr and cvr_dtr cases."""
    config = _scenario(output_dir, case_mode="cvr_dtr", **options)
    report = run_comparison(config, output_dir, workers=parallel_cases)

    click.echo(report.summary().to_string(index=False))

    if any(not run.schedule.feasible for run in report.runs.values()):
        raise SystemExit(EXIT_INFEASIBLE)


@click.command()
@click.option(
    "--network",
    type=click.Path(dir_okay=False, path_type=Path),
    default=lambda: resource_path("feeder20.json"),
    show_default="packaged feeder20.json",
    help="Network file.",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Run config file, for the voltage bounds.",
)
@click.option(
    "--factors",
    default=DEFAULT_FACTORS,
    show_default=True,
    help="Demand factors, in ascending order.",
)
@click.option(
    "--hour",
    type=click.IntRange(0, 23),
    default=DEFAULT_SWEEP_HOUR,
    show_default=True,
    help="The hour of the day to sweep.",
)
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Output directory.",
)
@_input_errors
def sweep(
    network: Path,
    config_path: Path | None,
    factors: str,
    hour: int,
    output_dir: Path,
) -> None:
    """Find the lowest feasible substation voltage for several demand factors."""
    config = _scenario(
        output_dir,
        network=network,
        weather=None,
        prices=resource_path("prices.csv"),
        config_path=config_path,
        case_mode="static",
    )
    table = demand_factor_sweep(config, parse_floats(factors), hour=hour)

    output_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(output_dir / "sweep.csv", index=False)

    click.echo(table.to_string(index=False))

    if not table["feasible"].all():
        raise SystemExit(EXIT_INFEASIBLE)


@click.command()
@click.option(
    "--baseline",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory of the baseline run.",
)
@click.option(
    "--case",
    "case_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory of the compared run.",
)
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Output directory. Defaults to the directory of the compared run.",
)
@_input_errors
def currents(baseline: Path, case_dir: Path, output_dir: Path | None) -> None:
    """Compute the relative change of every branch current against a baseline run."""
    table = current_change_map(RunRecord.read(case_dir), RunRecord.read(baseline))

    output_dir = output_dir or case_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(output_dir / "current_change.csv", index=False)

    click.echo(table.to_string(index=False))


cli.add_command(run)
cli.add_command(compare)
cli.add_command(sweep)
cli.add_command(currents)

if __name__ == "__main__":
    cli()
