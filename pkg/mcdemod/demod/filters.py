"""Log-posteriori demodulation filters driven by a receptor trajectory.

All integrals are taken piecewise on the merged knots of the active-receptor
path, the reference/input signals and the evaluation grid, so the result is
exact whenever the signals are piecewise constant (and exact for the linear
interpolant of a sampled reference).
"""

from __future__ import annotations

import csv
from collections.abc import Callable
from dataclasses import dataclass
from os import PathLike

import numpy as np
from numpy.typing import ArrayLike

from mcdemod.crn.trajectory import Trajectory, uniform_grid
from mcdemod.errors import FilterDomainError
from mcdemod.rdme.grid import ReceptorParams
from mcdemod.rdme.network import ACTIVE
from mcdemod.settings import Settings
from mcdemod.signals import PiecewiseConstant, Signal, merge_knots


@dataclass(frozen=True, eq=False)
class FilterPath:
    """Filter output sampled at ``times``; defined up to an unknown shift and scale."""

    times: np.ndarray
    values: np.ndarray
    initial: float

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("filter times and values must be 1-D arrays of equal length")
        if np.any(np.isnan(values)) or np.any(values == np.inf):
            raise ValueError("filter values must be finite or the -inf prior sentinel")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def at(self, t: float) -> float:
        """Value at the latest sample not after ``t``."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(self.values[max(i, 0)])

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "value"])
            writer.writerows([repr(float(t)), repr(float(v))] for t, v in zip(self.times, self.values, strict=True))


def _active_path(trajectory: Trajectory, species: str) -> PiecewiseConstant:
    try:
        return trajectory.path(species)
    except KeyError as exc:
        raise FilterDomainError(f"trajectory carries no {species!r} events to filter") from exc


def _eval_times(trajectory: Trajectory, times: ArrayLike | None) -> np.ndarray:
    if times is None:
        return uniform_grid(trajectory.horizon, Settings().filter_dt)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise ValueError("evaluation times must be a non-decreasing 1-D grid starting at t >= 0")
    return times


def _cumulative_on(knots: np.ndarray, pieces: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Running sum of per-interval integrals (``pieces[i]`` over ``[knots[i], knots[i+1]]``) read at ``times``."""
    running = np.concatenate([[0.0], np.cumsum(pieces)])
    return running[np.searchsorted(knots, times)]


def _rate_integral(
    x_active: PiecewiseConstant,
    signals: tuple[Signal, ...],
    factor: Callable[..., np.ndarray],
    times: np.ndarray,
) -> np.ndarray:
    """``int_0^t x_*(s) * factor(*signals(s)) ds`` at ``times`` for piecewise-constant integrands.

    ``factor`` is only evaluated where ``x_* > 0``.
    """
    end = times.max(initial=0.0)
    knots = merge_knots(x_active, *signals)
    knots = np.union1d(knots[knots <= end], times)
    left = knots[:-1]
    x = x_active(left)
    pieces = np.zeros(left.size)
    busy = x > 0
    if np.any(busy):
        pieces[busy] = x[busy] * factor(*(s(left[busy]) for s in signals)) * np.diff(knots)[busy]
    return _cumulative_on(knots, pieces, times)


def exact_filter(
    trajectory: Trajectory,
    reference: Signal,
    receptors: ReceptorParams,
    log_prior: float,
    times: ArrayLike | None = None,
    species: str = ACTIVE,
) -> FilterPath:
    """Event-driven log-posteriori filter.

    ``L(t) = L(0) + sum_{activations <= t} log ref(tau) - g_plus * int_0^t (M - x_*) ref ds``.
    Deactivations contribute nothing.
    """
    times = _eval_times(trajectory, times)
    x_active = _active_path(trajectory, species)
    activations = trajectory.jump_times(species, +1)
    at_events = np.asarray(reference(activations), dtype=float)
    if np.any(at_events <= 0):
        bad = activations[np.argmax(at_events <= 0)]
        raise FilterDomainError(f"reference is not positive at the activation at t={bad:.6g}")
    dirac = np.concatenate([[0.0], np.cumsum(np.log(at_events))])[np.searchsorted(activations, times, side="right")]

    knots = np.union1d(merge_knots(x_active, reference), times)
    knots = knots[knots <= times.max(initial=0.0)]
    if knots.size < 2:
        occupied = np.zeros(times.size)
    else:
        ref_pieces = np.diff(reference.integral(knots))
        inactive = receptors.M - x_active(knots[:-1])
        occupied = _cumulative_on(knots, inactive * ref_pieces, times)
    return FilterPath(times, log_prior + dirac - receptors.g_plus * occupied, log_prior)


def intermediate_filter(
    trajectory: Trajectory,
    u: Signal,
    reference: Signal,
    g_minus: float,
    log_prior: float = 0.0,
    times: ArrayLike | None = None,
    species: str = ACTIVE,
) -> FilterPath:
    """``dL/dt = g_minus * x_*(t) * (log lambda(t) - lambda(t)/u(t))`` with step signals ``u`` and ``lambda``."""
    times = _eval_times(trajectory, times)

    def factor(lam: np.ndarray, inp: np.ndarray) -> np.ndarray:
        if np.any(inp <= 0):
            raise FilterDomainError("input u(t) vanishes while receptors are active")
        if np.any(lam <= 0):
            raise FilterDomainError("reference lambda(t) is not positive while receptors are active")
        return np.log(lam) - lam / inp

    integral = _rate_integral(_active_path(trajectory, species), (reference, u), factor, times)
    return FilterPath(times, log_prior + g_minus * integral, log_prior)


def positive_filter(
    trajectory: Trajectory,
    u: Signal,
    amplitude: float,
    g_minus: float,
    initial: float = 0.0,
    times: ArrayLike | None = None,
    species: str = ACTIVE,
) -> FilterPath:
    """``dL/dt = g_minus * x_*(t) * [log a_k - a_k/u(t)]_+``; non-decreasing from ``initial``."""
    if amplitude <= 0:
        raise FilterDomainError(f"amplitude must be positive, got {amplitude}")
    times = _eval_times(trajectory, times)
    log_a = np.log(amplitude)

    def factor(inp: np.ndarray) -> np.ndarray:
        if np.any(inp <= 0):
            raise FilterDomainError("input u(t) vanishes while receptors are active")
        return np.maximum(log_a - amplitude / inp, 0.0)

    integral = _rate_integral(_active_path(trajectory, species), (u,), factor, times)
    return FilterPath(times, initial + g_minus * integral, initial)
