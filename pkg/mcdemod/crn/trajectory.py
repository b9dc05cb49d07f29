from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from os import PathLike

import numpy as np

from mcdemod.errors import DataFormatError
from mcdemod.signals import PiecewiseConstant

EVENTS_MAGIC = "# mcdemod-events 1"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Event path of molecular counts.

    ``times[i]``, ``species_index[i]`` and ``deltas[i]`` describe one count change of
    ``species[species_index[i]]``. Entries written by the same firing share a time.
    Only the species listed in ``species`` were recorded.
    """

    species: tuple[str, ...]
    initial: np.ndarray
    times: np.ndarray
    species_index: np.ndarray
    deltas: np.ndarray
    horizon: float

    def __post_init__(self) -> None:
        initial = np.asarray(self.initial, dtype=np.int64)
        times = np.asarray(self.times, dtype=float)
        index = np.asarray(self.species_index, dtype=np.int64)
        deltas = np.asarray(self.deltas, dtype=np.int64)
        if initial.shape != (len(self.species),):
            raise ValueError("initial state does not match the recorded species")
        if not (times.shape == index.shape == deltas.shape) or times.ndim != 1:
            raise ValueError("event arrays must be 1-D and of equal length")
        if times.size:
            if np.any(np.diff(times) < 0):
                raise ValueError("event times must be non-decreasing")
            if times[0] < 0 or times[-1] > self.horizon:
                raise ValueError(f"event times must lie within [0, {self.horizon}]")
            if index.min() < 0 or index.max() >= len(self.species):
                raise ValueError("event species index out of range")
        if initial.size and initial.min() < 0:
            raise ValueError("initial counts must be non-negative")
        for i in np.unique(index):
            running = initial[i] + np.cumsum(deltas[index == i])
            if running.min() < 0:
                raise ValueError(f"counts of {self.species[i]} become negative")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "species_index", index)
        object.__setattr__(self, "deltas", deltas)

    @property
    def n_events(self) -> int:
        return int(self.times.size)

    def _position(self, name: str) -> int:
        try:
            return self.species.index(name)
        except ValueError:
            raise KeyError(f"species {name!r} was not recorded in this trajectory") from None

    @cached_property
    def _paths(self) -> dict[str, PiecewiseConstant]:
        paths = {}
        for i, name in enumerate(self.species):
            selected = self.species_index == i
            bp = np.concatenate([[0.0], self.times[selected]])
            values = np.concatenate([[self.initial[i]], self.initial[i] + np.cumsum(self.deltas[selected])])
            keep = np.append(np.diff(bp) > 0, True)
            paths[name] = PiecewiseConstant(bp[keep], values[keep])
        return paths

    def path(self, name: str) -> PiecewiseConstant:
        """Right-continuous count of ``name`` as a step signal."""
        self._position(name)
        return self._paths[name]

    def at(self, t: float) -> np.ndarray:
        """Count vector over the recorded species at time ``t``."""
        return np.array([int(self._paths[name](t)) for name in self.species], dtype=np.int64)

    def jump_times(self, name: str, sign: int = 1) -> np.ndarray:
        """Times of unit increments (``sign=1``) or decrements (``sign=-1``) of ``name``.

        An entry changing the count by more than one unit is repeated accordingly.
        """
        selected = (self.species_index == self._position(name)) & (np.sign(self.deltas) == np.sign(sign))
        return np.repeat(self.times[selected], np.abs(self.deltas[selected]))

    def sample(self, dt: float, horizon: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Counts on the uniform grid ``0, dt, ...`` up to the horizon; shape (grid, species)."""
        grid = uniform_grid(self.horizon if horizon is None else horizon, dt)
        counts = np.zeros((grid.size, len(self.species)), dtype=np.int64)
        for i, name in enumerate(self.species):
            counts[:, i] = self._paths[name](grid)
        return grid, counts

    def to_csv(self, path: str | PathLike, dt: float) -> None:
        grid, counts = self.sample(dt)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", *self.species])
            for t, row in zip(grid, counts, strict=True):
                writer.writerow([repr(float(t)), *(int(v) for v in row)])

    def write_events(self, path: str | PathLike) -> None:
        """Lossless event list: metadata lines, then ``time,species,delta`` rows."""
        with open(path, "w", newline="") as fh:
            fh.write(f"{EVENTS_MAGIC}\n")
            fh.write(f"# horizon={self.horizon!r}\n")
            fh.write("# initial " + " ".join(f"{n}={int(c)}" for n, c in zip(self.species, self.initial, strict=True)))
            fh.write("\n")
            writer = csv.writer(fh)
            writer.writerow(["time", "species", "delta"])
            for t, i, d in zip(self.times, self.species_index, self.deltas, strict=True):
                writer.writerow([repr(float(t)), self.species[i], int(d)])

    @classmethod
    def read_events(cls, path: str | PathLike) -> Trajectory:
        with open(path, newline="") as fh:
            lines = fh.read().splitlines()
        if len(lines) < 4 or lines[0] != EVENTS_MAGIC:
            raise DataFormatError(f"{path} is not an mcdemod event list")
        try:
            horizon = float(lines[1].removeprefix("# horizon="))
            pairs = [item.split("=") for item in lines[2].removeprefix("# initial").split()]
            species = tuple(name for name, _ in pairs)
            initial = np.array([int(count) for _, count in pairs], dtype=np.int64)
            rows = list(csv.reader(lines[4:]))
            position = {name: i for i, name in enumerate(species)}
            times = np.array([float(r[0]) for r in rows], dtype=float)
            index = np.array([position[r[1]] for r in rows], dtype=np.int64)
            deltas = np.array([int(r[2]) for r in rows], dtype=np.int64)
        except (ValueError, KeyError, IndexError) as exc:
            raise DataFormatError(f"malformed event list {path}: {exc}") from exc
        return cls(species, initial, times, index, deltas, horizon)


def uniform_grid(horizon: float, dt: float) -> np.ndarray:
    """``0, dt, 2dt, ...`` up to and including ``horizon`` (within rounding)."""
    n = int(np.floor(horizon / dt + 1e-9))
    return np.arange(n + 1) * dt
