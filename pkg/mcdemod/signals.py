"""Deterministic signals of time with exact running integrals.

Two shapes cover everything the filters consume: step signals (symbol
amplitudes, molecular counts read off a trajectory) and sampled signals
(mean-field references). Both expose ``__call__``, ``integral`` and ``knots``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike


class Signal(Protocol):
    def __call__(self, t: ArrayLike) -> np.ndarray: ...

    def integral(self, t: ArrayLike) -> np.ndarray: ...

    @property
    def knots(self) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class PiecewiseConstant:
    """Right-continuous step signal: ``values[i]`` holds on ``[breakpoints[i], breakpoints[i+1])``.

    The last value extends to +inf. ``values`` may be 2-D, one column per stacked signal.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or bp.size == 0:
            raise ValueError("a step signal needs at least one breakpoint")
        if bp[0] != 0.0:
            raise ValueError(f"first breakpoint must be 0, got {bp[0]}")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if vals.shape[0] != bp.size:
            raise ValueError(f"{bp.size} breakpoints but {vals.shape[0]} values")
        widths = np.diff(bp).reshape((-1,) + (1,) * (vals.ndim - 1))
        cumulative = np.concatenate([np.zeros((1,) + vals.shape[1:]), np.cumsum(vals[:-1] * widths, axis=0)])
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_cumulative", cumulative)

    @classmethod
    def constant(cls, value: float) -> PiecewiseConstant:
        return cls(np.zeros(1), np.array([value], dtype=float))

    @classmethod
    def rectangular(cls, on: float, off: float, duration: float) -> PiecewiseConstant:
        if duration <= 0:
            return cls.constant(off)
        return cls(np.array([0.0, duration]), np.array([on, off], dtype=float))

    @classmethod
    def stack(cls, signals: Sequence[PiecewiseConstant]) -> PiecewiseConstant:
        """Merge 1-D step signals onto their common breakpoints, one column each."""
        knots = merge_knots(*signals)
        return cls(knots, np.column_stack([s(knots) for s in signals]))

    @property
    def knots(self) -> np.ndarray:
        return self.breakpoints

    def _index(self, t: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, None)

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return self.values[self._index(np.asarray(t, dtype=float))]

    def integral(self, t: ArrayLike) -> np.ndarray:
        """Exact running integral from 0 to ``t``."""
        t = np.asarray(t, dtype=float)
        idx = self._index(t)
        offset = (t - self.breakpoints[idx]).reshape(t.shape + (1,) * (self.values.ndim - 1))
        return self._cumulative[idx] + self.values[idx] * offset


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Signal known at sample times, linearly interpolated in between and held after the last sample."""

    times: np.ndarray
    values: np.ndarray
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.size < 2 or times.shape != vals.shape:
            raise ValueError("a sampled signal needs matching 1-D times and values with at least two samples")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise ValueError("sample times must start at 0 and increase strictly")
        trapezoids = 0.5 * (vals[1:] + vals[:-1]) * np.diff(times)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_cumulative", np.concatenate([[0.0], np.cumsum(trapezoids)]))

    @property
    def knots(self) -> np.ndarray:
        return self.times

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return np.interp(np.asarray(t, dtype=float), self.times, self.values)

    def integral(self, t: ArrayLike) -> np.ndarray:
        """Running trapezoid integral; exact for the linear interpolant."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 1)
        start = self.times[idx]
        return self._cumulative[idx] + 0.5 * (t - start) * (self.values[idx] + self(t))


def merge_knots(*signals: Signal) -> np.ndarray:
    return np.unique(np.concatenate([np.asarray(s.knots, dtype=float) for s in signals]))
