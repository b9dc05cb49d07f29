"""Fitting the five free promoter parameters and checking the max-mYFP property."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize

from mcdemod.dcs2.data import Msn2Profile, TimeSeries, pulse_train, sample_times
from mcdemod.dcs2.model import (
    DEFAULT_STEP,
    REFERENCE_PARAMS,
    SYNTHETIC_CONSTANTS,
    DCS2Params,
    FixedConstants,
    simulate_batch,
)
from mcdemod.errors import ConfigurationError, IntegrationError
from mcdemod.hill.fit import HillParams
from mcdemod.signals import PiecewiseConstant

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dataset:
    """One input profile paired with the mYFP measured (or synthesised) under it."""

    msn2: PiecewiseConstant
    myfp: TimeSeries
    label: str = ""


# per-parameter multipliers on the published optimum; none of them reproduces it
DEFAULT_START_SCALES = (
    (0.8, 0.8, 0.8, 0.8, 0.8),
    (1.25, 1.25, 1.25, 1.25, 1.25),
    (1.25, 0.8, 1.25, 0.8, 1.25),
)


def _default_starts() -> tuple[tuple[float, ...], ...]:
    base = REFERENCE_PARAMS.to_vector()
    return tuple(tuple(float(v) for v in base * np.asarray(scale)) for scale in DEFAULT_START_SCALES)


class DCS2FitConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    starts: tuple[tuple[float, float, float, float, float], ...] = Field(
        default_factory=_default_starts,
        description="start vectors (g_plus, g_minus, a, d2, k3); default: three perturbations of the published optimum",
    )
    max_evaluations: int = Field(default=1500, ge=1)
    xatol: float = Field(default=1e-4, gt=0, description="simplex size tolerance in log-parameter units")
    fatol: float = Field(default=1e-6, gt=0)
    step: float = Field(default=DEFAULT_STEP, gt=0, description="RK4 step (min)")
    workers: int = Field(default=1, ge=1)


class DCS2FitResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: DCS2Params
    hill: HillParams
    error: float
    per_dataset: tuple[float, ...]
    labels: tuple[str, ...]
    converged: bool
    unidentifiable: bool = False


def _grid(datasets: Sequence[Dataset]) -> tuple[np.ndarray, list[np.ndarray]]:
    times = np.unique(np.concatenate([[0.0]] + [d.myfp.times for d in datasets]))
    return times, [np.searchsorted(times, d.myfp.times) for d in datasets]


def _residuals(
    params: DCS2Params,
    datasets: Sequence[Dataset],
    fixed: FixedConstants,
    step: float,
    max_refinements: int = 4,
) -> np.ndarray:
    times, index = _grid(datasets)
    sim = simulate_batch(params, [d.msn2 for d in datasets], times, fixed, step=step, max_refinements=max_refinements)
    myfp = sim["mYFP"]
    pairs = enumerate(zip(datasets, index, strict=True))
    return np.array([np.sum((myfp[idx, j] - d.myfp.values) ** 2) for j, (d, idx) in pairs])


def _objective(theta: np.ndarray, datasets: Sequence[Dataset], fixed: FixedConstants, step: float) -> float:
    values = np.exp(theta)
    if values[2] <= math.e * 1.0001 or not np.all(np.isfinite(values)):
        return np.inf
    try:
        return float(_residuals(DCS2Params.from_vector(values), datasets, fixed, step, max_refinements=1).sum())
    except IntegrationError:
        return np.inf


def _minimize_from(
    start: tuple[float, ...], datasets: Sequence[Dataset], fixed: FixedConstants, config: DCS2FitConfig
) -> tuple[np.ndarray, float, bool]:
    result = minimize(
        _objective,
        np.log(np.asarray(start)),
        args=(datasets, fixed, config.step),
        method="Nelder-Mead",
        options={"maxfev": config.max_evaluations, "xatol": config.xatol, "fatol": config.fatol},
    )
    return result.x, float(result.fun), bool(result.success)


def fit_dcs2(
    datasets: Sequence[Dataset],
    fixed: FixedConstants = SYNTHETIC_CONSTANTS,
    config: DCS2FitConfig | None = None,
) -> DCS2FitResult:
    """Least-squares fit of (g_plus, g_minus, a, d2, k3) to measured mYFP.

    The Hill gate is refitted from ``a`` at every objective evaluation. Starts run
    independently and the lowest error wins (first start on ties).
    """
    config = config or DCS2FitConfig()
    if not datasets:
        raise ConfigurationError("fitting needs at least one dataset")
    labels = tuple(d.label or d.myfp.label for d in datasets)

    if all(np.all(d.msn2.values == 0) for d in datasets):
        logger.warning("every Msn2 input is zero: the free parameters are unidentifiable")
        params = DCS2Params.from_vector(config.starts[0])
        per = _residuals(params, datasets, fixed, config.step)
        return DCS2FitResult(
            params=params,
            hill=params.hill(),
            error=float(per.sum()),
            per_dataset=tuple(float(v) for v in per),
            labels=labels,
            converged=False,
            unidentifiable=True,
        )

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(
                pool.map(
                    _minimize_from,
                    config.starts,
                    [datasets] * len(config.starts),
                    [fixed] * len(config.starts),
                    [config] * len(config.starts),
                )
            )
    else:
        outcomes = [_minimize_from(start, datasets, fixed, config) for start in config.starts]

    best = min(range(len(outcomes)), key=lambda i: (outcomes[i][1], i))
    theta, error, converged = outcomes[best]
    if not np.isfinite(error):
        raise IntegrationError("no start produced a stable simulation")
    if not converged:
        logger.warning("DCS2 fit stopped before convergence (error %.4g)", error)
    params = DCS2Params.from_vector(np.exp(theta))
    per = _residuals(params, datasets, fixed, config.step)
    logger.info("DCS2 fit from start %d: error %.4g, %s", best, per.sum(), params)
    return DCS2FitResult(
        params=params,
        hill=params.hill(),
        error=float(per.sum()),
        per_dataset=tuple(float(v) for v in per),
        labels=labels,
        converged=converged,
    )


def synthetic_datasets(
    params: DCS2Params,
    fixed: FixedConstants,
    profiles: Sequence[Msn2Profile],
    times: np.ndarray | None = None,
    step: float = DEFAULT_STEP,
) -> list[Dataset]:
    """Noiseless mYFP generated by the model itself under each profile."""
    times = sample_times() if times is None else np.asarray(times, dtype=float)
    signals = [p.signal() for p in profiles]
    sim = simulate_batch(params, signals, times, fixed, step=step)
    return [
        Dataset(signal, TimeSeries(times, sim["mYFP"][:, j], p.label), p.label)
        for j, (p, signal) in enumerate(zip(profiles, signals, strict=True))
    ]


def default_synthetic_profiles() -> list[Msn2Profile]:
    """Six inputs spanning the four amplitudes, several durations and one pulse train."""
    return [
        Msn2Profile(amplitude=313.2, pulses=((5.0, 40.0),), label="313.2x40"),
        Msn2Profile(amplitude=744.5, pulses=((5.0, 20.0),), label="744.5x20"),
        Msn2Profile(amplitude=1107.8, pulses=((5.0, 30.0),), label="1107.8x30"),
        Msn2Profile(amplitude=1410.1, pulses=((5.0, 10.0),), label="1410.1x10"),
        Msn2Profile(amplitude=1410.1, pulses=((5.0, 50.0),), label="1410.1x50"),
        pulse_train(4),
    ]


class ProportionalityResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    amplitude: float
    durations: tuple[float, ...]
    max_myfp: tuple[float, ...]
    slope: float
    relative_residual: float


def max_myfp_proportionality(
    params: DCS2Params,
    fixed: FixedConstants = SYNTHETIC_CONSTANTS,
    amplitude: float = 1107.8,
    durations: Sequence[float] = (10.0, 20.0, 30.0, 40.0, 50.0),
    profiles: Sequence[Msn2Profile] | None = None,
    start: float = 5.0,
    tail: float = 300.0,
    step: float = DEFAULT_STEP,
) -> ProportionalityResult:
    """Max mYFP against total ON time (mYFP decay switched off), with a line through the origin.

    ``profiles`` overrides the single pulses built from ``durations``.
    """
    if profiles is None:
        profiles = [Msn2Profile(amplitude=amplitude, pulses=((start, d),) if d > 0 else ()) for d in durations]
    on = np.array([p.total_on for p in profiles])
    horizon = max(p.end for p in profiles) + tail
    times = np.linspace(0.0, horizon, int(math.ceil(horizon)) + 1)
    sim = simulate_batch(params, [p.signal() for p in profiles], times, fixed.model_copy(update={"d4": 0.0}), step=step)
    peak = sim.max_myfp
    denom = float(np.dot(on, on))
    slope = float(np.dot(on, peak) / denom) if denom > 0 else 0.0
    norm = float(np.linalg.norm(peak))
    residual = float(np.linalg.norm(peak - slope * on) / norm) if norm > 0 else 0.0
    return ProportionalityResult(
        amplitude=profiles[0].amplitude,
        durations=tuple(float(v) for v in on),
        max_myfp=tuple(float(v) for v in peak),
        slope=slope,
        relative_residual=residual,
    )


def myfp_integral_identity(
    params: DCS2Params,
    fixed: FixedConstants,
    profile: Msn2Profile,
    horizon: float | None = None,
    step: float = DEFAULT_STEP,
) -> tuple[float, float]:
    """(simulated max mYFP, ``k4 k3 g_minus / (d3 d2) * int P_active * Hill(Msn2) dt``) with ``d4 = 0``."""
    horizon = profile.end + 300.0 if horizon is None else horizon
    signal = profile.signal()
    times = np.union1d(np.arange(0.0, horizon + step / 2, step), signal.knots[signal.knots <= horizon])
    hill = params.hill()
    sim = simulate_batch(params, [signal], times, fixed.model_copy(update={"d4": 0.0}), hill=hill, step=step)
    p_active = sim["P_active"][:, 0]
    gate = hill(signal(times[:-1]))
    integral = float(np.sum(gate * 0.5 * (p_active[1:] + p_active[:-1]) * np.diff(times)))
    predicted = fixed.k4 * params.k3 * params.g_minus / (fixed.d3 * params.d2) * integral
    return float(sim.max_myfp[0]), predicted
