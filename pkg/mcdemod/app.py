import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from os.path import join
from pathlib import Path
from typing import Annotated, Optional

import numpy as np
import typer
from pydantic import ValidationError

import mcdemod
from mcdemod.circuit.annihilation import deterministic_annihilation, stochastic_agreement, three_species_scenarios
from mcdemod.crn.ssa import RngSpec
from mcdemod.errors import (
    AmbiguousAnnihilationError,
    ConfigurationError,
    FilterDomainError,
    SimulationError,
    UnboundedMeanError,
)
from mcdemod.experiments import output
from mcdemod.experiments.ber import run_baseline_experiment, run_ber_experiment
from mcdemod.experiments.channel import build_channel
from mcdemod.experiments.config import ExperimentConfig, load_config
from mcdemod.experiments.demod import run_demod_experiment
from mcdemod.experiments.fitting import run_dcs2_experiment
from mcdemod.experiments.runner import run_all
from mcdemod.hill.fit import HillFitConfig, fit_hill
from mcdemod.rdme.meanfield import steady_state_mean
from mcdemod.settings import Settings

logger = logging.getLogger("mcdemod")

EXIT_CONFIG = 2
EXIT_SIMULATION = 3

# surviving counts of the two three-species schedules
THREE_SPECIES_STEADY_STATES = {"late-Y2": [0.0, 0.0, 30.0], "late-Y1": [0.0, 10.0, 0.0]}

description = """
Demodulation of concentration-modulated molecular signals.

Every experiment reads one YAML config (see `configs/`) and writes plot-ready
CSV and JSON into its own directory under `MCDEMOD_OUTPUT_DIR`.
"""

app = typer.Typer(name="mcdemod", help=description, no_args_is_help=True, add_completion=False)

ConfigArg = Annotated[Path, typer.Argument(help="experiment config (YAML)", exists=True, dir_okay=False)]
PathsOpt = Annotated[bool, typer.Option("--paths/--no-paths", help="also write per-run trajectories and filters")]


@app.callback()
def configure() -> None:
    settings = Settings()
    logging.basicConfig(level=settings.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map package errors onto the CLI exit codes."""
    try:
        yield
    except (ConfigurationError, ValidationError, UnboundedMeanError) as exc:
        logger.error("configuration error: %s", exc)
        raise typer.Exit(EXIT_CONFIG) from exc
    except (SimulationError, FilterDomainError, AmbiguousAnnihilationError) as exc:
        logger.error("simulation error: %s", exc)
        raise typer.Exit(EXIT_SIMULATION) from exc


def _load(path: Path, scenarios: tuple[str, ...]) -> ExperimentConfig:
    config = load_config(path)
    if config.scenario not in scenarios:
        raise ConfigurationError(f"scenario {config.scenario!r} is not supported here; expected one of {scenarios}")
    return config


def _seed(config: ExperimentConfig, settings: Settings) -> int:
    return settings.default_seed if config.seed is None else config.seed


@app.command()
def simulate(config_path: ConfigArg) -> None:
    """Channel and receptor SSA runs only; writes trajectories and the filter references."""
    with exit_codes():
        settings = Settings()
        config = _load(config_path, ("colocated", "diffusion"))
        channel = build_channel(config, settings)
        outcomes = run_all(channel, _seed(config, settings), config.runs, settings.workers, full=False)
        directory = output.prepare(config, settings.output_dir)
        output.write_trajectories(directory, outcomes, settings.filter_dt)
        output.write_references(directory, channel, settings.filter_dt)
        at_end = [int(o.active_at(np.array([channel.horizon]))[0]) for o in outcomes]
        output.write_summary(
            directory,
            {
                "amplitudes": list(channel.symbols.amplitudes),
                "runs_per_symbol": config.runs,
                "mean_active_at_horizon": {
                    str(k): float(np.mean([n for n, o in zip(at_end, outcomes, strict=True) if o.symbol == k]))
                    for k in range(channel.K)
                },
            },
        )
        typer.echo(directory)


@app.command()
def demod(config_path: ConfigArg, paths: PathsOpt = True) -> None:
    """Filter-quality experiment: RMS curves, ensemble means, matched accuracy."""
    with exit_codes():
        settings = Settings()
        config = _load(config_path, ("colocated", "diffusion"))
        report = run_demod_experiment(config, settings)
        directory = output.prepare(config, settings.output_dir)
        if paths:
            output.write_trajectories(directory, report.outcomes, settings.filter_dt)
            output.write_filters(directory, report.outcomes)
        output.write_references(directory, report.channel, settings.filter_dt)
        output.write_series(directory, "rms.csv", report.grid, report.rms)
        output.write_series(directory, "means.csv", report.grid, report.means)
        output.write_summary(directory, report.summary())
        typer.echo(json.dumps(report.summary(), indent=2, sort_keys=True))


@app.command()
def ber(config_path: ConfigArg, paths: PathsOpt = False) -> None:
    """Bit error rate of the history filter, the molecular circuit and the one-sample rule."""
    with exit_codes():
        settings = Settings()
        config = _load(config_path, ("colocated", "diffusion"))
        report = run_ber_experiment(config, settings)
        directory = output.prepare(config, settings.output_dir)
        if paths:
            output.write_trajectories(directory, report.outcomes, settings.filter_dt)
            output.write_filters(directory, report.outcomes)
        output.write_ber(directory, report.results)
        output.write_summary(directory, report.summary())
        typer.echo(json.dumps(report.summary(), indent=2, sort_keys=True))


@app.command()
def baseline(config_path: ConfigArg) -> None:
    """Best single-sample threshold rule at every decision time."""
    with exit_codes():
        settings = Settings()
        config = _load(config_path, ("colocated", "diffusion"))
        report = run_baseline_experiment(config, settings)
        directory = output.prepare(config, settings.output_dir)
        output.write_ber(directory, report.results)
        output.write_summary(directory, report.summary())
        typer.echo(json.dumps(report.summary(), indent=2, sort_keys=True))


@app.command("fit-hill")
def fit_hill_command(
    amplitudes: Annotated[list[float], typer.Argument(help="symbol amplitudes a_k")],
    starts: Annotated[str, typer.Option(help="optimizer start set: grid or single")] = "grid",
    points: Annotated[int, typer.Option(help="fit grid size")] = 200,
) -> None:
    """Hill parameters approximating [log a - a/q]_+ for each amplitude."""
    with exit_codes():
        config = HillFitConfig(starts=starts, points=points)
        fits = []
        for a in amplitudes:
            params = fit_hill(a, config)
            fits.append({**params.model_dump(), "at_amplitude": float(params(a)), "target": float(np.log(a) - 1)})
        typer.echo(json.dumps(fits, indent=2, sort_keys=True))


@app.command("fit-dcs2")
def fit_dcs2_command(config_path: ConfigArg) -> None:
    """Fit the five free promoter parameters to measured (or synthetic) mYFP."""
    with exit_codes():
        settings = Settings()
        config = _load(config_path, ("dcs2",))
        report = run_dcs2_experiment(config, settings)
        directory = output.prepare(config, settings.output_dir)
        with open(join(directory, "dcs2_fit.json"), "w") as fh:
            fh.write(report.result.model_dump_json(indent=2))
        for j, dataset in enumerate(report.datasets):
            times = dataset.myfp.times
            idx = np.searchsorted(report.times, times)
            output.write_series(
                directory,
                f"overlay_{j:02d}.csv",
                times,
                {"measured": dataset.myfp.values, "simulated": report.fitted[idx, j]},
            )
        output.write_summary(directory, report.summary())
        typer.echo(json.dumps(report.summary(), indent=2, sort_keys=True))


@app.command("check-appendix-c")
def check_appendix_c(
    k_a: Annotated[float, typer.Option("--k-a", help="annihilation constant of the stochastic check")] = 1e4,
    runs: Annotated[int, typer.Option(help="stochastic runs per scenario")] = 1000,
    seed: Annotated[Optional[int], typer.Option(help="master seed")] = None,  # noqa: UP007
) -> None:
    """Three-species annihilation counterexample: deterministic limit and stochastic agreement."""
    with exit_codes():
        settings = Settings()
        rng = RngSpec(master_seed=settings.default_seed if seed is None else seed)
        report = {}
        for i, scenario in enumerate(three_species_scenarios()):
            steady = deterministic_annihilation(scenario.impulses)
            report[scenario.name] = {
                "steady_state": [float(v) for v in steady],
                "agreement": stochastic_agreement(scenario, k_a, runs, rng.spawn(i)),
            }
        report["passed"] = all(
            report[name]["steady_state"] == expected and report[name]["agreement"] >= 0.99
            for name, expected in THREE_SPECIES_STEADY_STATES.items()
        )
        typer.echo(json.dumps(report, indent=2, sort_keys=True))


@app.command("steady-state")
def steady_state(
    config_path: ConfigArg,
    rate: Annotated[
        Optional[list[float]],  # noqa: UP007
        typer.Option(help="emission rate (repeatable); defaults to the config rates"),
    ] = None,
) -> None:
    """Mean receiver-voxel count under continuous emission (the design amplitudes a_k)."""
    with exit_codes():
        config = _load(config_path, ("diffusion",))
        grid = config.grid.build()
        rates = rate or list(config.emission.rates)
        result = {repr(float(r)): steady_state_mean(grid, r) for r in rates}
        typer.echo(json.dumps(result, indent=2, sort_keys=True))


@app.command()
def version() -> None:
    typer.echo(mcdemod.__version__)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
