"""CM-inspired promoter model: Msn2 drives the active promoter fraction, whose
Hill-gated output feeds initiation complex, mRNA, YFP and matured YFP.

Times are in minutes throughout this sub-package.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator

from mcdemod.errors import IntegrationError
from mcdemod.hill.fit import HillFitConfig, HillParams, fit_hill
from mcdemod.signals import PiecewiseConstant

STATE_NAMES = ("P_active", "C_init", "mRNA", "YFP", "mYFP")
FREE_PARAMETERS = ("g_plus", "g_minus", "a", "d2", "k3")

logger = logging.getLogger(__name__)

DEFAULT_STEP = 0.05
HILL_IN_FIT = HillFitConfig(starts="single")


class DCS2Params(BaseModel):
    """The five free rate constants; ``a`` fixes the Hill gate through ``fit_hill``."""

    model_config = ConfigDict(frozen=True)

    g_plus: PositiveFloat = Field(description="activation constant (1/(conc min))")
    g_minus: PositiveFloat = Field(description="deactivation rate (1/min)")
    a: PositiveFloat = Field(description="amplitude parameter (conc)")
    d2: PositiveFloat = Field(description="initiation complex decay (1/min)")
    k3: PositiveFloat = Field(description="transcription rate (1/min)")

    @model_validator(mode="after")
    def _check_amplitude(self) -> DCS2Params:
        if self.a <= math.e:
            raise ValueError(f"amplitude parameter must exceed e, got {self.a}")
        return self

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FREE_PARAMETERS])

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> DCS2Params:
        return cls(**dict(zip(FREE_PARAMETERS, (float(v) for v in vector), strict=True)))

    def hill(self, config: HillFitConfig = HILL_IN_FIT) -> HillParams:
        return fit_hill(self.a, config)


class FixedConstants(BaseModel):
    """Rate constants held fixed during fitting (1/min)."""

    model_config = ConfigDict(frozen=True)

    d3: PositiveFloat
    k4: PositiveFloat
    d4: float = Field(ge=0)
    k5: PositiveFloat


# optimum reported for the 30-profile Msn2/mYFP dataset
REFERENCE_PARAMS = DCS2Params(g_plus=3.19e-4, g_minus=0.15, a=1400.0, d2=0.40, k3=0.23)

# stand-ins for the unpublished fixed constants, used by the synthetic route
SYNTHETIC_CONSTANTS = FixedConstants(d3=0.1, k4=10.0, d4=0.001, k5=0.1)


@dataclass(frozen=True, eq=False)
class DCS2Trajectory:
    times: np.ndarray
    states: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return self.states[..., STATE_NAMES.index(name)]

    @property
    def max_myfp(self) -> np.ndarray:
        return self["mYFP"].max(axis=0)


def simulate_batch(
    params: DCS2Params,
    msn2: Sequence[PiecewiseConstant],
    times: np.ndarray,
    fixed: FixedConstants = SYNTHETIC_CONSTANTS,
    hill: HillParams | None = None,
    step: float = DEFAULT_STEP,
    max_refinements: int = 4,
    negative_tol: float = 1e-9,
) -> DCS2Trajectory:
    """Integrate every input from the zero state with fixed-step RK4.

    ``states`` has shape (times, inputs, 5). A negative or non-finite state halves
    the step and restarts, at most ``max_refinements`` times.
    """
    hill = hill or params.hill()
    inputs = PiecewiseConstant.stack(list(msn2))
    times = np.asarray(times, dtype=float)
    rates = np.array([params.g_plus, params.g_minus, params.d2, params.k3, fixed.d3, fixed.k4, fixed.d4, fixed.k5])
    gate = np.array([hill.h, hill.H, hill.n])
    for attempt in range(max_refinements + 1):
        ok, states = _rk4_kernel(times, inputs.breakpoints, inputs.values, rates, gate, step, negative_tol)
        if ok:
            return DCS2Trajectory(times, states)
        logger.warning("negative promoter state with RK4 step %.3g min (attempt %d); halving", step, attempt + 1)
        step /= 2.0
    raise IntegrationError(f"promoter model still unstable after {max_refinements} step refinements")


def simulate_dcs2(
    params: DCS2Params,
    msn2: PiecewiseConstant,
    times: np.ndarray,
    fixed: FixedConstants = SYNTHETIC_CONSTANTS,
    hill: HillParams | None = None,
    step: float = DEFAULT_STEP,
) -> DCS2Trajectory:
    """Single-input simulation; ``states`` has shape (times, 5)."""
    batch = simulate_batch(params, [msn2], times, fixed, hill, step)
    return DCS2Trajectory(batch.times, batch.states[:, 0, :])


@njit(cache=True)
def _input_at(knots, values, t, q):  # pragma: no cover - compiled
    i = max(np.searchsorted(knots, t, side="right") - 1, 0)
    q[:] = values[i]


@njit(cache=True)
def _deriv(y, q, rates, gate, dy):  # pragma: no cover - compiled
    g_plus, g_minus, d2, k3 = rates[0], rates[1], rates[2], rates[3]
    d3, k4, d4, k5 = rates[4], rates[5], rates[6], rates[7]
    h, H, n = gate[0], gate[1], gate[2]
    for j in range(y.shape[0]):
        p = y[j, 0]
        hill = 0.0
        if q[j] > 0.0:
            hill = h / (1.0 + (H / q[j]) ** n)
        dy[j, 0] = g_plus * q[j] * (1.0 - p) - g_minus * p
        dy[j, 1] = g_minus * p * hill - d2 * y[j, 1]
        dy[j, 2] = k3 * y[j, 1] - d3 * y[j, 2]
        dy[j, 3] = k4 * y[j, 2] - (d4 + k5) * y[j, 3]
        dy[j, 4] = k5 * y[j, 3] - d4 * y[j, 4]


@njit(cache=True)
def _rk4_kernel(times, knots, values, rates, gate, step, negative_tol):  # pragma: no cover - compiled
    n_sets = values.shape[1]
    out = np.zeros((times.size, n_sets, 5))
    y = np.zeros((n_sets, 5))
    q = np.zeros(n_sets)
    k1 = np.zeros((n_sets, 5))
    k2 = np.zeros((n_sets, 5))
    k3 = np.zeros((n_sets, 5))
    k4 = np.zeros((n_sets, 5))
    for i in range(times.size - 1):
        span = times[i + 1] - times[i]
        n_sub = max(1, int(np.ceil(span / step - 1e-12)))
        h = span / n_sub
        for j in range(n_sub):
            s = times[i] + j * h
            _input_at(knots, values, s, q)
            _deriv(y, q, rates, gate, k1)
            _input_at(knots, values, s + 0.5 * h, q)
            _deriv(y + 0.5 * h * k1, q, rates, gate, k2)
            _deriv(y + 0.5 * h * k2, q, rates, gate, k3)
            _input_at(knots, values, np.nextafter(s + h, s), q)
            _deriv(y + h * k3, q, rates, gate, k4)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.any(y < -negative_tol):
            return False, out
        out[i + 1] = y
    return True, out
