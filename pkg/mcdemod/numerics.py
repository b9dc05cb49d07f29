import logging
import math
from collections.abc import Callable

import numpy as np

from mcdemod.errors import IntegrationError

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]


def rk4_integrate(
    rhs: Rhs,
    y0: np.ndarray,
    times: np.ndarray,
    max_step: float,
    negative_tol: float = 1e-9,
    max_refinements: int = 4,
) -> np.ndarray:
    """Classical fixed-step RK4, reporting the state at ``times``.

    Every output interval is split into equal sub-steps no longer than ``max_step``.
    A state below ``-negative_tol`` (or non-finite) is taken as step instability: the step is halved
    and the integration restarts, at most ``max_refinements`` times.

    Returns an array of shape ``(len(times),) + y0.shape``.
    """
    times = np.asarray(times, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    step = max_step
    for attempt in range(max_refinements + 1):
        out = _integrate(rhs, y0, times, step, negative_tol)
        if out is not None:
            return out
        logger.warning("negative state with RK4 step %.3g (attempt %d); halving", step, attempt + 1)
        step /= 2.0
    raise IntegrationError(f"RK4 still unstable after {max_refinements} step refinements (step {step:.3g})")


def _integrate(rhs: Rhs, y0: np.ndarray, times: np.ndarray, step: float, negative_tol: float) -> np.ndarray | None:
    out = np.empty((times.size,) + y0.shape)
    out[0] = y0
    y = y0.copy()
    for i in range(times.size - 1):
        t, span = times[i], times[i + 1] - times[i]
        n_sub = max(1, math.ceil(span / step - 1e-12))
        h = span / n_sub
        for j in range(n_sub):
            s = t + j * h
            k1 = rhs(s, y)
            k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
            # last stage stays inside the step, so step inputs switching at s + h are not seen early
            k4 = rhs(np.nextafter(s + h, s), y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.any(y < -negative_tol):
            return None
        out[i + 1] = y
    return out
