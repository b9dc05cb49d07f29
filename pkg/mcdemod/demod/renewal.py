"""Closed-form renewal quantities of the two-state receptor and the matched-filter function."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveFloat, PositiveInt, model_validator

from mcdemod.crn.trajectory import Trajectory
from mcdemod.rdme.network import ACTIVE


def phi(a: float, z: float | np.ndarray) -> float | np.ndarray:
    """``log(z) - z/a``: concave in ``z`` with its maximum at ``z = a``."""
    return np.log(z) - np.asarray(z) / a


def matched_argmax(a: float, amplitudes: Sequence[float]) -> int:
    """Symbol whose filter grows fastest under a constant input ``a`` (ties to the lowest index)."""
    return int(np.argmax(phi(a, np.asarray(amplitudes, dtype=float))))


class RenewalStats(BaseModel):
    """Inter-activation statistics of one receptor under a constant signal level."""

    model_config = ConfigDict(frozen=True)

    m: PositiveFloat
    var: PositiveFloat
    x_star: PositiveFloat
    M: PositiveInt
    g_minus: PositiveFloat

    @model_validator(mode="after")
    def _check(self) -> RenewalStats:
        if self.x_star >= self.M:
            raise ValueError("mean active count must stay below the receptor count")
        if not math.isclose(self.x_star * self.m * self.g_minus, self.M, rel_tol=1e-12):
            raise ValueError("x_star, m and g_minus violate x_star = M / (m g_minus)")
        return self

    def activation_mean(self, t: float) -> float:
        return self.M * t / self.m

    def activation_var(self, t: float) -> float:
        return self.M * self.var * t / self.m**3

    def activation_cv(self, t: float) -> float:
        """Coefficient of variation of the activation count over ``[0, t]``."""
        return math.sqrt(self.activation_var(t)) / self.activation_mean(t)


def renewal_stats(g_plus: float, g_minus: float, a: float, M: int) -> RenewalStats:
    on = g_plus * a
    m = 1.0 / on + 1.0 / g_minus
    return RenewalStats(
        m=m,
        var=1.0 / on**2 + 1.0 / g_minus**2,
        x_star=M * on / (on + g_minus),
        M=M,
        g_minus=g_minus,
    )


def activation_count(trajectory: Trajectory, t: float, species: str = ACTIVE) -> int:
    """Number of receptor activations in ``[0, t]``."""
    if t > trajectory.horizon:
        raise ValueError(f"window end {t} lies beyond the trajectory horizon {trajectory.horizon}")
    return int(np.searchsorted(trajectory.jump_times(species, +1), t, side="right"))
