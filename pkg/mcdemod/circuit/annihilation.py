"""Pairwise annihilation ``Y_i + Y_j -> 0`` of the filter output species.

``annihilate`` samples the birth (at given production times) plus annihilation
system exactly; ``deterministic_annihilation`` is its infinitely fast limit for
impulsive production.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from os import PathLike

import numpy as np
from numba import njit
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from mcdemod.circuit.nhpp import CountingPath
from mcdemod.crn.ssa import RngSpec, as_generator
from mcdemod.errors import AmbiguousAnnihilationError, ConfigurationError

logger = logging.getLogger(__name__)

Impulse = tuple[float, int]


class AnnihilationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_a: PositiveFloat = Field(default=1.0, description="annihilation constant (1/(count s))")
    K: int = Field(default=2, ge=2, description="number of output species")


@dataclass(frozen=True, eq=False)
class SpeciesCounts:
    """Counts of every output species after each event; row 0 is the state at t = 0."""

    times: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != times.size or times.size == 0:
            raise ValueError("counts need one row per event time")
        if np.any(np.diff(times) < 0) or np.any(counts < 0):
            raise ValueError("event times must be non-decreasing and counts non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "counts", counts)

    @property
    def final(self) -> np.ndarray:
        return self.counts[-1]

    def at(self, t: float | ArrayLike) -> np.ndarray:
        """Counts in force at ``t`` (right-continuous); 2-D for an array of times."""
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, None)
        return self.counts[idx]

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", *(f"Y{k}" for k in range(self.counts.shape[1]))])
            for t, row in zip(self.times, self.counts, strict=True):
                writer.writerow([repr(float(t)), *(int(v) for v in row)])


def _births(productions: Sequence[CountingPath | ArrayLike]) -> tuple[np.ndarray, np.ndarray]:
    times, species = [], []
    for k, production in enumerate(productions):
        t = production.times if isinstance(production, CountingPath) else np.asarray(production, dtype=float)
        if t.ndim != 1 or np.any(np.diff(t) < 0) or (t.size and t[0] < 0):
            raise ConfigurationError(f"production times of species {k} must be non-negative and non-decreasing")
        times.append(t)
        species.append(np.full(t.size, k, dtype=np.int64))
    times_all = np.concatenate(times) if times else np.zeros(0)
    species_all = np.concatenate(species) if species else np.zeros(0, dtype=np.int64)
    order = np.argsort(times_all, kind="stable")
    return times_all[order], species_all[order]


def annihilate(
    productions: Sequence[CountingPath | ArrayLike],
    k_a: float | AnnihilationConfig,
    rng: RngSpec | np.random.Generator,
    horizon: float = np.inf,
) -> SpeciesCounts:
    """Exact sample of births at the given times plus pairwise annihilation at ``k_a * Y_i * Y_j``.

    Births sharing a time are all applied before the next annihilation. The run
    stops at ``horizon`` or, for an infinite horizon, once no births remain and
    at most one species is present.
    """
    if isinstance(k_a, AnnihilationConfig):
        if k_a.K != len(productions):
            raise ConfigurationError(f"{len(productions)} production paths for K={k_a.K}")
        k_a = k_a.k_a
    if len(productions) < 2:
        raise ConfigurationError("annihilation needs at least two species")
    birth_t, birth_sp = _births(productions)
    times, counts = _annihilation_kernel(as_generator(rng), birth_t, birth_sp, len(productions), float(k_a), horizon)
    return SpeciesCounts(times, counts)


@njit(cache=True)
def _annihilation_kernel(rg, birth_t, birth_sp, K, k_a, horizon):  # pragma: no cover - compiled
    y = np.zeros(K, dtype=np.int64)
    cap = 256
    times = np.empty(cap, dtype=np.float64)
    counts = np.empty((cap, K), dtype=np.int64)
    times[0] = 0.0
    counts[0] = y
    n = 1
    t = 0.0
    i = 0
    n_births = birth_t.size
    while True:
        total = 0.0
        for a in range(K):
            for b in range(a + 1, K):
                total += y[a] * y[b]
        total *= k_a
        next_birth = birth_t[i] if i < n_births else np.inf
        tau = t + rg.exponential(1.0 / total) if total > 0.0 else np.inf
        if tau < next_birth:
            if tau > horizon:
                break
            u = rg.random() * total / k_a
            pa, pb = K - 2, K - 1
            done = False
            for a in range(K):
                for b in range(a + 1, K):
                    u -= y[a] * y[b]
                    if u < 0.0:
                        pa, pb = a, b
                        done = True
                        break
                if done:
                    break
            y[pa] -= 1
            y[pb] -= 1
            t = tau
        else:
            if next_birth > horizon or i >= n_births:
                break
            t = next_birth
            while i < n_births and birth_t[i] == t:
                y[birth_sp[i]] += 1
                i += 1
        if n == times.size:
            new_times = np.empty(2 * n, dtype=np.float64)
            new_counts = np.empty((2 * n, K), dtype=np.int64)
            new_times[:n] = times
            new_counts[:n] = counts
            times, counts = new_times, new_counts
        times[n] = t
        counts[n] = y
        n += 1
    return times[:n], counts[:n]


def deterministic_annihilation(impulses: Sequence[Sequence[Impulse]]) -> np.ndarray:
    """Steady state of instantaneous pairwise annihilation under impulsive production.

    ``impulses[k]`` lists ``(time, amount)`` injections of species ``k``. At each
    injection time every impulse is added, then two coexisting species cancel
    until one is exhausted. Three or more coexisting species have no defined
    cancellation order and raise ``AmbiguousAnnihilationError``.
    """
    K = len(impulses)
    if K < 2:
        raise ConfigurationError("annihilation needs at least two species")
    events: dict[float, list[Impulse]] = {}
    for k, schedule in enumerate(impulses):
        for time, amount in schedule:
            if amount < 0:
                raise ConfigurationError(f"impulse amounts must be non-negative, got {amount}")
            events.setdefault(float(time), []).append((k, amount))

    y = np.zeros(K)
    for time in sorted(events):
        for k, amount in events[time]:
            y[k] += amount
        present = np.flatnonzero(y > 0)
        if present.size >= 3:
            raise AmbiguousAnnihilationError(
                f"species {present.tolist()} coexist at t={time}; the cancellation order is undefined"
            )
        if present.size == 2:
            y[present] -= y[present].min()
        logger.debug("after t=%g: %s", time, y)
    return y


def decide(counts: ArrayLike) -> int:
    """Index of the largest count; ties go to the lowest index."""
    return int(np.argmax(np.asarray(counts)))


@dataclass(frozen=True)
class ImpulseScenario:
    name: str
    impulses: tuple[tuple[Impulse, ...], ...]

    def births(self) -> list[np.ndarray]:
        """Production times with one entry per molecule."""
        return [
            np.concatenate([np.full(int(amount), float(t)) for t, amount in s] or [np.zeros(0)]) for s in self.impulses
        ]


def three_species_scenarios() -> list[ImpulseScenario]:
    """Two three-species schedules with equal totals whose steady states differ."""
    return [
        ImpulseScenario("late-Y2", (((0.0, 20),), ((0.0, 30),), ((10.0, 40),))),
        ImpulseScenario("late-Y1", (((0.0, 20),), ((10.0, 30),), ((0.0, 40),))),
    ]


def stochastic_agreement(
    scenario: ImpulseScenario,
    k_a: float,
    runs: int,
    rng: RngSpec,
) -> float:
    """Fraction of exact simulations whose final counts equal the infinitely fast limit."""
    expected = deterministic_annihilation(scenario.impulses)
    births = scenario.births()
    hits = 0
    for run in range(runs):
        result = annihilate(births, k_a, rng.spawn(run))
        hits += bool(np.array_equal(result.final, expected))
    return hits / runs
