"""Gillespie direct-method SSA, JIT-compiled with numba.

Channels live in a binary sum tree so that selecting and updating a channel
costs O(log channels); a species -> channel dependency table limits the
propensity updates after each firing to the channels that can change.
Clamped species are overwritten at schedule breakpoints, after which every
propensity is recomputed and the exponential clock restarts.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field

from mcdemod.crn.network import CompiledNetwork, ReactionNetwork
from mcdemod.crn.trajectory import Trajectory
from mcdemod.errors import ConfigurationError, PropensityOverflowError, ScheduleGapError
from mcdemod.signals import PiecewiseConstant

logger = logging.getLogger(__name__)

STATUS_OK = 0
STATUS_OVERFLOW = 1


class RngSpec(BaseModel):
    """Seed of one simulation stream.

    The generator is derived with ``SeedSequence(master_seed, spawn_key=(stream, *path))``,
    so any (seed, stream, path) triple maps to a fixed, statistically independent stream
    regardless of which worker draws it.
    """

    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(ge=0, lt=2**64)
    stream: int = Field(default=0, ge=0)
    path: tuple[int, ...] = ()

    def spawn(self, *keys: int) -> RngSpec:
        return RngSpec(master_seed=self.master_seed, stream=self.stream, path=self.path + tuple(keys))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream, *self.path))
        return np.random.default_rng(seq)


def as_generator(rng: RngSpec | np.random.Generator) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngSpec) else rng


@dataclass(frozen=True)
class ClampSegment:
    start: float
    stop: float
    levels: Mapping[str, int]


@dataclass(frozen=True, eq=False)
class ClampSchedule:
    """Contiguous segments, each fixing the counts of the clamped species."""

    segments: tuple[ClampSegment, ...]

    def __post_init__(self) -> None:
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        if not segments:
            raise ScheduleGapError("a clamp schedule needs at least one segment")
        if segments[0].start != 0.0:
            raise ScheduleGapError(f"first clamp segment starts at {segments[0].start}, not 0")
        names = set(segments[0].levels)
        for seg in segments:
            if seg.stop <= seg.start:
                raise ScheduleGapError(f"empty clamp segment [{seg.start}, {seg.stop})")
            if set(seg.levels) != names:
                raise ConfigurationError("every clamp segment must fix the same species")
            if any(level < 0 for level in seg.levels.values()):
                raise ConfigurationError("clamped levels must be non-negative")
        for prev, nxt in zip(segments, segments[1:], strict=False):
            if prev.stop != nxt.start:
                raise ScheduleGapError(f"clamp segments leave [{prev.stop}, {nxt.start}) uncovered or overlapping")

    @property
    def species(self) -> tuple[str, ...]:
        return tuple(sorted(self.segments[0].levels))

    @property
    def end(self) -> float:
        return self.segments[-1].stop

    @classmethod
    def constant(cls, levels: Mapping[str, int], horizon: float) -> ClampSchedule:
        return cls((ClampSegment(0.0, horizon, dict(levels)),))

    @classmethod
    def from_signals(cls, signals: Mapping[str, PiecewiseConstant], horizon: float) -> ClampSchedule:
        """Segments on the merged breakpoints of integer-valued step signals."""
        knots = np.unique(np.concatenate([s.knots for s in signals.values()] + [np.zeros(1)]))
        knots = knots[knots < horizon]
        bounds = np.append(knots, horizon)
        segments = []
        for start, stop in zip(bounds[:-1], bounds[1:], strict=True):
            levels = {}
            for name, signal in signals.items():
                value = float(signal(start))
                if value != round(value):
                    raise ConfigurationError(f"clamped species {name} needs integer levels, got {value}")
                levels[name] = int(round(value))
            segments.append(ClampSegment(float(start), float(stop), levels))
        return cls(tuple(segments))

    def check_covers(self, horizon: float) -> None:
        if self.end < horizon:
            raise ScheduleGapError(f"clamp schedule ends at {self.end}, before the horizon {horizon}")


def ssa_simulate(
    network: ReactionNetwork,
    initial: Mapping[str, int] | Sequence[int] | np.ndarray,
    horizon: float,
    rng: RngSpec | np.random.Generator,
    record: Iterable[str] | None = None,
) -> Trajectory:
    """Exact sample path of ``network`` over ``[0, horizon]``.

    When the total propensity drops to zero the state is held until the horizon.
    ``record`` restricts the stored events to the named species (default: all).
    """
    return _simulate(network, network.state(initial), None, horizon, as_generator(rng), record)


def time_varying_ssa(
    network: ReactionNetwork,
    initial: Mapping[str, int] | Sequence[int] | np.ndarray,
    schedule: ClampSchedule,
    horizon: float,
    rng: RngSpec | np.random.Generator,
    record: Iterable[str] | None = None,
) -> Trajectory:
    """SSA with exogenous species overwritten at the breakpoints of ``schedule``."""
    schedule.check_covers(horizon)
    return _simulate(network, network.state(initial), schedule, horizon, as_generator(rng), record)


def _simulate(
    network: ReactionNetwork,
    x0: np.ndarray,
    schedule: ClampSchedule | None,
    horizon: float,
    rg: np.random.Generator,
    record: Iterable[str] | None,
) -> Trajectory:
    if not horizon > 0:
        raise ConfigurationError(f"horizon must be positive, got {horizon}")
    recorded = tuple(network.species) if record is None else tuple(record)
    mask = np.zeros(len(network.species), dtype=np.bool_)
    for name in recorded:
        mask[network.index(name)] = True

    if schedule is None:
        bounds = np.array([0.0, horizon])
        clamp_idx = np.zeros(0, dtype=np.int64)
        clamp_levels = np.zeros((1, 0), dtype=np.int64)
    else:
        segments = [s for s in schedule.segments if s.start < horizon]
        bounds = np.array([s.start for s in segments] + [horizon])
        clamp_idx = np.array([network.index(name) for name in schedule.species], dtype=np.int64)
        clamp_levels = np.array([[s.levels[name] for name in schedule.species] for s in segments], dtype=np.int64)

    c: CompiledNetwork = network.compiled
    status, t_fail, times, species, deltas = _ssa_kernel(
        rg,
        x0.copy(),
        bounds,
        clamp_idx,
        clamp_levels,
        mask,
        c.group_species,
        c.group_rate,
        c.group_ptr,
        c.group_rx,
        c.group_rx_rate,
        c.other_rx,
        c.other_rate,
        c.react_ptr,
        c.react_sp,
        c.react_ord,
        c.chg_ptr,
        c.chg_sp,
        c.chg_delta,
        c.dep_ptr,
        c.dep_ch,
    )
    if status == STATUS_OVERFLOW:
        raise PropensityOverflowError(f"total propensity is not finite at t={t_fail:.6g}; check the rate constants")

    # translate kernel species indices to positions among the recorded species
    position = np.full(len(network.species), -1, dtype=np.int64)
    for i, name in enumerate(recorded):
        position[network.index(name)] = i
    logger.debug("SSA finished: %d recorded events up to t=%g", times.size, horizon)
    return Trajectory(
        species=recorded,
        initial=x0[[network.index(name) for name in recorded]],
        times=times,
        species_index=position[species],
        deltas=deltas,
        horizon=float(horizon),
    )


@njit(cache=True)
def _channel_propensity(
    c, x, n_groups, group_species, group_rate, other_rate, react_ptr, react_sp, react_ord
):  # pragma: no cover - compiled
    if c < n_groups:
        return x[group_species[c]] * group_rate[c]
    o = c - n_groups
    value = other_rate[o]
    for j in range(react_ptr[o], react_ptr[o + 1]):
        count = x[react_sp[j]]
        order = react_ord[j]
        if count < order:
            return 0.0
        for m in range(order):
            value *= count - m
    return value


@njit(cache=True)
def _tree_set(tree, leaves, i, value):  # pragma: no cover - compiled
    node = leaves + i
    tree[node] = value
    node //= 2
    while node >= 1:
        tree[node] = tree[2 * node] + tree[2 * node + 1]
        node //= 2


@njit(cache=True)
def _tree_pick(tree, leaves, u):  # pragma: no cover - compiled
    node = 1
    while node < leaves:
        left = 2 * node
        if u < tree[left] or tree[left + 1] <= 0.0:
            node = left
        else:
            u -= tree[left]
            node = left + 1
    return node - leaves


@njit(cache=True)
def _grow(times, species, deltas):  # pragma: no cover - compiled
    n = times.size
    new_t = np.empty(2 * n, dtype=np.float64)
    new_s = np.empty(2 * n, dtype=np.int64)
    new_d = np.empty(2 * n, dtype=np.int64)
    new_t[:n] = times
    new_s[:n] = species
    new_d[:n] = deltas
    return new_t, new_s, new_d


@njit(cache=True)
def _ssa_kernel(
    rg,
    x,
    bounds,
    clamp_idx,
    clamp_levels,
    mask,
    group_species,
    group_rate,
    group_ptr,
    group_rx,
    group_rx_rate,
    other_rx,
    other_rate,
    react_ptr,
    react_sp,
    react_ord,
    chg_ptr,
    chg_sp,
    chg_delta,
    dep_ptr,
    dep_ch,
):  # pragma: no cover - compiled
    n_groups = group_species.size
    n_channels = n_groups + other_rx.size
    leaves = 1
    while leaves < max(n_channels, 1):
        leaves *= 2
    tree = np.zeros(2 * leaves, dtype=np.float64)

    clamped = np.zeros(x.size, dtype=np.bool_)
    for s in clamp_idx:
        clamped[s] = True

    cap = 1024
    times = np.empty(cap, dtype=np.float64)
    species = np.empty(cap, dtype=np.int64)
    deltas = np.empty(cap, dtype=np.int64)
    n = 0

    for seg in range(bounds.size - 1):
        t = bounds[seg]
        stop = bounds[seg + 1]
        for j in range(clamp_idx.size):
            s = clamp_idx[j]
            change = clamp_levels[seg, j] - x[s]
            if change != 0:
                x[s] = clamp_levels[seg, j]
                if mask[s]:
                    if n == times.size:
                        times, species, deltas = _grow(times, species, deltas)
                    times[n] = t
                    species[n] = s
                    deltas[n] = change
                    n += 1
        for c in range(n_channels):
            _tree_set(
                tree,
                leaves,
                c,
                _channel_propensity(
                    c, x, n_groups, group_species, group_rate, other_rate, react_ptr, react_sp, react_ord
                ),
            )

        while True:
            total = tree[1]
            if not np.isfinite(total):
                return STATUS_OVERFLOW, t, times[:n], species[:n], deltas[:n]
            if total <= 0.0:
                break
            t += rg.exponential(1.0 / total)
            if t >= stop:
                break

            c = _tree_pick(tree, leaves, rg.random() * total)
            if c < n_groups:
                u = rg.random() * group_rate[c]
                rx = group_rx[group_ptr[c + 1] - 1]
                for j in range(group_ptr[c], group_ptr[c + 1]):
                    u -= group_rx_rate[j]
                    if u < 0.0:
                        rx = group_rx[j]
                        break
            else:
                rx = other_rx[c - n_groups]

            for j in range(chg_ptr[rx], chg_ptr[rx + 1]):
                s = chg_sp[j]
                if clamped[s]:
                    continue
                x[s] += chg_delta[j]
                if mask[s]:
                    if n == times.size:
                        times, species, deltas = _grow(times, species, deltas)
                    times[n] = t
                    species[n] = s
                    deltas[n] = chg_delta[j]
                    n += 1
                for k in range(dep_ptr[s], dep_ptr[s + 1]):
                    ch = dep_ch[k]
                    _tree_set(
                        tree,
                        leaves,
                        ch,
                        _channel_propensity(
                            ch, x, n_groups, group_species, group_rate, other_rate, react_ptr, react_sp, react_ord
                        ),
                    )

    return STATUS_OK, bounds[-1], times[:n], species[:n], deltas[:n]
