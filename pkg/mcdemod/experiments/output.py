"""Experiment directory writer.

Layout: ``config.snapshot``, ``trajectories/``, ``filters/``, ``ber.csv``,
``rms.csv`` and ``summary.json``. Nothing time- or host-dependent is written, so
equal configs and seeds give byte-identical directories.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from collections.abc import Mapping, Sequence
from os.path import join

import numpy as np

from mcdemod.crn.trajectory import uniform_grid
from mcdemod.experiments.ber import BERResult
from mcdemod.experiments.channel import Channel, RunOutcome
from mcdemod.experiments.config import ExperimentConfig

logger = logging.getLogger(__name__)


def experiment_dir(config: ExperimentConfig, root: str) -> str:
    return config.output_dir or join(root, config.name)


def _writer(fh):
    return csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")


def _stem(outcome: RunOutcome) -> str:
    return f"s{outcome.symbol}_r{outcome.run:04d}"


def write_snapshot(directory: str, config: ExperimentConfig) -> None:
    with open(join(directory, "config.snapshot"), "w") as fh:
        fh.write(config.snapshot())


def write_trajectories(directory: str, outcomes: Sequence[RunOutcome], dt: float) -> None:
    target = join(directory, "trajectories")
    os.makedirs(target, exist_ok=True)
    for outcome in outcomes:
        outcome.trajectory.write_events(join(target, f"{_stem(outcome)}.events"))
        outcome.trajectory.to_csv(join(target, f"{_stem(outcome)}.csv"), dt)


def write_filters(directory: str, outcomes: Sequence[RunOutcome]) -> None:
    target = join(directory, "filters")
    os.makedirs(target, exist_ok=True)
    for outcome in outcomes:
        stem = _stem(outcome)
        for family, paths in sorted(outcome.filters.items()):
            for k, path in enumerate(paths):
                path.to_csv(join(target, f"{stem}_{family}{k}.csv"))
        for k, production in enumerate(outcome.productions):
            production.to_csv(join(target, f"{stem}_y{k}.csv"))
        if outcome.counts is not None:
            outcome.counts.to_csv(join(target, f"{stem}_annihilation.csv"))


def write_references(directory: str, channel: Channel, dt: float) -> None:
    """sigma_k(t) (or lambda_k(t)) on the ``dt`` grid, one column per symbol."""
    grid = uniform_grid(channel.horizon, dt)
    with open(join(directory, "references.csv"), "w", newline="") as fh:
        writer = _writer(fh)
        writer.writerow(["time", *(f"reference{k}" for k in range(channel.K))])
        columns = [np.asarray(ref(grid), dtype=float) for ref in channel.references]
        for i, t in enumerate(grid):
            writer.writerow([repr(float(t)), *(repr(float(c[i])) for c in columns)])


def write_ber(directory: str, results: Sequence[BERResult]) -> None:
    K = len(results[0].runs)
    with open(join(directory, "ber.csv"), "w", newline="") as fh:
        writer = _writer(fh)
        writer.writerow(["method", "time", *(f"errors{k}" for k in range(K)), "runs", "ber", "threshold"])
        for result in results:
            ber = result.ber
            for i, t in enumerate(result.decision_times):
                threshold = "" if result.thresholds is None else result.thresholds[i]
                row = [result.method, repr(t), *result.errors[i], sum(result.runs), repr(float(ber[i])), threshold]
                writer.writerow(row)


def write_series(directory: str, name: str, grid: np.ndarray, series: Mapping[str, np.ndarray]) -> None:
    keys = sorted(series)
    with open(join(directory, name), "w", newline="") as fh:
        writer = _writer(fh)
        writer.writerow(["time", *keys])
        for i, t in enumerate(grid):
            writer.writerow([repr(float(t)), *(repr(float(series[k][i])) for k in keys)])


def write_summary(directory: str, summary: Mapping) -> None:
    with open(join(directory, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def prepare(config: ExperimentConfig, root: str) -> str:
    directory = experiment_dir(config, root)
    os.makedirs(directory, exist_ok=True)
    write_snapshot(directory, config)
    logger.info("writing experiment output to %s", directory)
    return directory
