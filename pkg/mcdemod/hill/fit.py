"""Least-squares Hill approximation of the clamped matched-filter target.

The target for amplitude ``a`` is ``[log(a) - a/q]_+``; it vanishes below
``q = a/log(a)`` and saturates at ``log(a)``, which a Hill function
``h q^n / (H^n + q^n)`` tracks well once ``q`` is large enough.
"""

from __future__ import annotations

import itertools
import logging
import math
from functools import lru_cache
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, model_validator
from scipy.optimize import minimize

from mcdemod.errors import ConfigurationError

logger = logging.getLogger(__name__)


class HillParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: PositiveFloat
    H: PositiveFloat
    n: PositiveFloat
    a_k: PositiveFloat
    residual: NonNegativeFloat = 0.0
    q_min: NonNegativeFloat = 0.0
    q_max: NonNegativeFloat = 0.0
    degraded: bool = False

    def __call__(self, q: ArrayLike) -> np.ndarray:
        return hill_eval(self, q)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str | bytes) -> HillParams:
        return cls.model_validate_json(text)


class HillFitConfig(BaseModel):
    """Fit grid and optimizer set-up.

    The grid has ``points`` log-spaced values from ``lower_factor * a/log(a)`` to
    ``q_max_factor * a``.
    """

    model_config = ConfigDict(frozen=True)

    points: int = Field(default=200, ge=10, description="grid size; 200 spans the clamp boundary densely")
    lower_factor: float = Field(default=1.001, gt=1.0, description="grid start relative to a/log(a)")
    q_max_factor: float = Field(default=100.0, gt=1.0, description="Q_max relative to a; deep saturation")
    n_bounds: tuple[PositiveFloat, PositiveFloat] = (0.5, 10.0)
    starts: Literal["grid", "single"] = Field(
        default="grid", description="'grid' is a deterministic multi-start set, 'single' one start near (log a, a, 1)"
    )
    max_iter: int = Field(default=4000, ge=1)

    @model_validator(mode="after")
    def _check_bounds(self) -> HillFitConfig:
        if self.n_bounds[0] >= self.n_bounds[1]:
            raise ValueError("n_bounds must be an increasing pair")
        return self


def hill_eval(params: HillParams, q: ArrayLike) -> np.ndarray:
    """``h q^n / (H^n + q^n)``; 0 at ``q = 0`` and ``h`` as ``q -> inf``."""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("Hill function is defined for q >= 0")
    return _hill(q, params.h, params.H, params.n)


def _hill(q: np.ndarray, h: float, H: float, n: float) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return h / (1.0 + (H / q) ** n)


def hill_target(a: float, q: ArrayLike) -> np.ndarray:
    """``[log(a) - a/q]_+``."""
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        return np.maximum(math.log(a) - a / q, 0.0)


def fit_grid(a: float, config: HillFitConfig) -> np.ndarray:
    lower = config.lower_factor * a / math.log(a)
    return np.geomspace(lower, config.q_max_factor * a, config.points)


def fit_hill(a: float, config: HillFitConfig | None = None) -> HillParams:
    """Best Hill parameters for amplitude ``a`` on the configured grid.

    A fit whose best run did not converge within the budget is returned with
    ``degraded=True``.
    """
    if not a > math.e:
        raise ConfigurationError(f"Hill fitting needs an amplitude above e, got {a}")
    return _fit_cached(float(a), config or HillFitConfig())


@lru_cache(maxsize=256)
def _fit_cached(a: float, config: HillFitConfig) -> HillParams:
    q = fit_grid(a, config)
    target = hill_target(a, q)
    log_a = math.log(a)
    n_lo, n_hi = config.n_bounds

    def residual(theta: np.ndarray) -> float:
        h, H, n = math.exp(theta[0]), math.exp(theta[1]), theta[2]
        return float(np.sum((target - _hill(q, h, H, n)) ** 2))

    bounds = [
        (math.log(1e-3 * log_a), math.log(1e2 * log_a)),
        (math.log(1e-2 * q[0]), math.log(q[-1])),
        (n_lo, n_hi),
    ]
    if config.starts == "single":
        starts = [(math.log(log_a), math.log(a), min(max(1.0, n_lo), n_hi))]
    else:
        starts = [
            (math.log(log_a * hf), math.log(a * Hf), float(np.clip(n0, n_lo, n_hi)))
            for hf, Hf, n0 in itertools.product((1.0, 1.2), (1 / math.log(a), 1.0, 3.0), (1.0, 2.0, 4.0))
        ]

    best = None
    for x0 in starts:
        result = minimize(
            residual,
            np.array(x0),
            method="Powell",
            bounds=bounds,
            options={"maxiter": config.max_iter, "xtol": 1e-8, "ftol": 1e-12},
        )
        if best is None or result.fun < best.fun:
            best = result

    degraded = not best.success
    if degraded:
        logger.warning("Hill fit for a=%g did not converge: %s", a, best.message)
    h, H, n = math.exp(best.x[0]), math.exp(best.x[1]), float(best.x[2])
    logger.debug("Hill fit a=%g: h=%.4g H=%.4g n=%.4g residual=%.3g", a, h, H, n, best.fun)
    return HillParams(
        h=h,
        H=H,
        n=n,
        a_k=a,
        residual=float(best.fun),
        q_min=float(q[0]),
        q_max=float(q[-1]),
        degraded=degraded,
    )
