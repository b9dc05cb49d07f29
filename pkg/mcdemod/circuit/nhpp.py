from __future__ import annotations

import csv
from dataclasses import dataclass
from os import PathLike

import numpy as np

from mcdemod.crn.ssa import RngSpec, as_generator
from mcdemod.crn.trajectory import Trajectory
from mcdemod.hill.fit import HillParams, hill_eval
from mcdemod.rdme.network import ACTIVE
from mcdemod.signals import Signal


@dataclass(frozen=True, eq=False)
class CountingPath:
    """Production events of one filter output species."""

    times: np.ndarray
    horizon: float

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or np.any(np.diff(times) <= 0):
            raise ValueError("jump times must be strictly increasing")
        if times.size and (times[0] < 0 or times[-1] > self.horizon):
            raise ValueError(f"jump times must lie within [0, {self.horizon}]")
        object.__setattr__(self, "times", times)

    def count(self, t: float | np.ndarray) -> np.ndarray:
        """Right-continuous count y(t)."""
        return np.searchsorted(self.times, t, side="right")

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "count"])
            writer.writerows([repr(float(t)), i + 1] for i, t in enumerate(self.times))


def simulate_y(
    trajectory: Trajectory,
    u: Signal,
    hill: HillParams,
    g_minus: float,
    rng: RngSpec | np.random.Generator,
    M: int | None = None,
    species: str = ACTIVE,
) -> CountingPath:
    """Thinning sample of the counting process with rate ``g_minus * x_*(t) * Hill(u(t))``.

    Candidates come from a homogeneous process at the envelope ``g_minus * M * h``;
    ``M`` defaults to the largest active count on the path.
    """
    rg = as_generator(rng)
    x_active = trajectory.path(species)
    bound = int(x_active.values.max()) if M is None else M
    horizon = trajectory.horizon
    envelope = g_minus * bound * hill.h
    if envelope <= 0:
        return CountingPath(np.zeros(0), horizon)

    n = rg.poisson(envelope * horizon)
    candidates = np.sort(rg.uniform(0.0, horizon, size=n))
    rate = g_minus * x_active(candidates) * hill_eval(hill, np.clip(u(candidates), 0.0, None))
    accepted = rg.uniform(0.0, envelope, size=n) < rate
    return CountingPath(candidates[accepted], horizon)
