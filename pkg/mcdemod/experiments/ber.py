"""Bit error rates of the history filter, the molecular circuit and the one-sample threshold rule."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveInt, model_validator

from mcdemod.crn.trajectory import Trajectory
from mcdemod.errors import ConfigurationError
from mcdemod.experiments.channel import Channel, RunOutcome, build_channel
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.experiments.runner import run_all
from mcdemod.rdme.network import ACTIVE
from mcdemod.settings import Settings

logger = logging.getLogger(__name__)

Method = Literal["history-filter", "molecular-circuit", "one-sample"]


class BERResult(BaseModel):
    """Decision errors of one method.

    ``errors[i][k]`` counts wrong decisions on symbol ``k`` at ``decision_times[i]``.
    """

    model_config = ConfigDict(frozen=True)

    method: Method
    decision_times: tuple[float, ...]
    errors: tuple[tuple[NonNegativeInt, ...], ...]
    runs: tuple[PositiveInt, ...]
    thresholds: tuple[int, ...] | None = None

    @model_validator(mode="after")
    def _check(self) -> BERResult:
        if len(self.errors) != len(self.decision_times):
            raise ValueError("one row of errors per decision time is required")
        for row in self.errors:
            if len(row) != len(self.runs):
                raise ValueError("one error count per symbol is required")
            if any(e > n for e, n in zip(row, self.runs, strict=True)):
                raise ValueError("errors cannot exceed runs")
        if self.thresholds is not None and len(self.thresholds) != len(self.decision_times):
            raise ValueError("one threshold per decision time is required")
        return self

    @property
    def ber(self) -> np.ndarray:
        return np.asarray(self.errors, dtype=float).reshape(len(self.decision_times), -1).sum(axis=1) / sum(self.runs)

    def at(self, t: float) -> float:
        i = int(np.argmin(np.abs(np.asarray(self.decision_times) - t)))
        return float(self.ber[i])


def _threshold_errors(samples_0: np.ndarray, samples_1: np.ndarray, M: int) -> tuple[int, int, int]:
    thetas = np.arange(M + 1)
    wrong_0 = (samples_0[None, :] >= thetas[:, None]).sum(axis=1)
    wrong_1 = (samples_1[None, :] < thetas[:, None]).sum(axis=1)
    best = int(np.argmin(wrong_0 + wrong_1))
    return best, int(wrong_0[best]), int(wrong_1[best])


def threshold_baseline(samples: Sequence[ArrayLike], M: int) -> tuple[int, float]:
    """Best rule "decide 1 iff x_*(t) >= theta" over theta = 0..M; ties go to the smallest theta.

    ``samples[k]`` holds the active-receptor counts of the runs that sent symbol ``k``.
    """
    if len(samples) != 2:
        raise ConfigurationError("the threshold rule separates exactly two symbols")
    s0, s1 = (np.asarray(s, dtype=np.int64) for s in samples)
    if s0.size == 0 or s1.size == 0:
        raise ConfigurationError("both symbols need at least one sample")
    theta, e0, e1 = _threshold_errors(s0, s1, M)
    return theta, (e0 + e1) / (s0.size + s1.size)


def one_sample_baseline(
    trajectories: Sequence[Sequence[Trajectory]], t: float, M: int, species: str = ACTIVE
) -> tuple[int, float]:
    """Threshold rule on ``x_*(t)`` read from the receptor trajectories of each symbol."""
    samples = [[int(trajectory.path(species)(t)) for trajectory in runs] for runs in trajectories]
    return threshold_baseline(samples, M)


def history_decisions(outcomes: Sequence[RunOutcome], times: np.ndarray, family: str = "exact") -> np.ndarray:
    """argmax over filters at each decision time; shape (runs, times)."""
    out = np.empty((len(outcomes), times.size), dtype=np.int64)
    for i, outcome in enumerate(outcomes):
        paths = outcome.filters[family]
        values = np.array([[p.at(t) for t in times] for p in paths])
        out[i] = np.argmax(values, axis=0)
    return out


def circuit_decisions(outcomes: Sequence[RunOutcome], times: np.ndarray) -> np.ndarray:
    return np.array([np.argmax(outcome.counts.at(times), axis=1) for outcome in outcomes], dtype=np.int64)


def _errors_by_symbol(outcomes: Sequence[RunOutcome], decisions: np.ndarray, K: int) -> tuple[tuple[int, ...], ...]:
    sent = np.array([o.symbol for o in outcomes])
    wrong = decisions != sent[:, None]
    return tuple(tuple(int(wrong[sent == k, i].sum()) for k in range(K)) for i in range(decisions.shape[1]))


def ber_results(channel: Channel, outcomes: Sequence[RunOutcome]) -> list[BERResult]:
    times = channel.decision_times
    runs = tuple(sum(o.symbol == k for o in outcomes) for k in range(channel.K))
    common = dict(decision_times=tuple(float(t) for t in times), runs=runs)
    results = [
        BERResult(
            method="history-filter",
            errors=_errors_by_symbol(outcomes, history_decisions(outcomes, times), channel.K),
            **common,
        ),
        BERResult(
            method="molecular-circuit",
            errors=_errors_by_symbol(outcomes, circuit_decisions(outcomes, times), channel.K),
            **common,
        ),
    ]
    if channel.K == 2:
        results.append(baseline_result(channel, outcomes))
    return results


def baseline_result(channel: Channel, outcomes: Sequence[RunOutcome]) -> BERResult:
    times = channel.decision_times
    active = {k: np.array([o.active_at(times) for o in outcomes if o.symbol == k]) for k in range(2)}
    thresholds, errors = [], []
    for i in range(times.size):
        theta, e0, e1 = _threshold_errors(active[0][:, i], active[1][:, i], channel.receptors.M)
        thresholds.append(theta)
        errors.append((e0, e1))
    return BERResult(
        method="one-sample",
        decision_times=tuple(float(t) for t in times),
        errors=tuple(errors),
        runs=(len(active[0]), len(active[1])),
        thresholds=tuple(thresholds),
    )


@dataclass(frozen=True, eq=False)
class BERReport:
    channel: Channel
    outcomes: list[RunOutcome]
    results: list[BERResult]

    def summary(self) -> dict:
        return {
            "amplitudes": list(self.channel.symbols.amplitudes),
            "runs_per_symbol": list(self.results[0].runs),
            "ber_at_last_decision": {r.method: float(r.ber[-1]) for r in self.results},
            "decision_time_last": float(self.channel.decision_times[-1]),
        }


def run_ber_experiment(config: ExperimentConfig, settings: Settings | None = None) -> BERReport:
    settings = settings or Settings()
    seed = settings.default_seed if config.seed is None else config.seed
    channel = build_channel(config, settings)
    outcomes = run_all(channel, seed, config.runs, settings.workers)
    results = ber_results(channel, outcomes)
    for result in results:
        logger.info("%s BER at t=%g: %.3f", result.method, result.decision_times[-1], result.ber[-1])
    return BERReport(channel, outcomes, results)


def run_baseline_experiment(config: ExperimentConfig, settings: Settings | None = None) -> BERReport:
    """Threshold rule only; skips filters and circuit."""
    settings = settings or Settings()
    seed = settings.default_seed if config.seed is None else config.seed
    channel = build_channel(config, settings)
    if channel.K != 2:
        raise ConfigurationError("the threshold rule separates exactly two symbols")
    outcomes = run_all(channel, seed, config.runs, settings.workers, full=False)
    return BERReport(channel, outcomes, [baseline_result(channel, outcomes)])
