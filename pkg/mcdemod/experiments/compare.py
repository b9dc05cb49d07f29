from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from mcdemod.circuit.nhpp import CountingPath
from mcdemod.crn.trajectory import uniform_grid
from mcdemod.demod.filters import FilterPath
from mcdemod.errors import ConfigurationError

logger = logging.getLogger(__name__)


def counts_as_path(path: CountingPath, times: np.ndarray) -> FilterPath:
    """A counting process read at ``times``, for comparison with filter outputs."""
    times = np.asarray(times, dtype=float)
    return FilterPath(times, path.count(times).astype(float), 0.0)


def rms_compare(
    paths_a: Sequence[FilterPath], paths_b: Sequence[FilterPath], dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise RMS over paired runs of ``a - b`` on the grid ``0, dt, ...``.

    Paths ending at different times are compared up to the earliest end.
    """
    if len(paths_a) != len(paths_b):
        raise ConfigurationError(f"{len(paths_a)} paths cannot be paired with {len(paths_b)}")
    if len(paths_a) < 2:
        raise ConfigurationError("an RMS comparison needs at least two paired runs")
    ends = [float(p.times[-1]) for p in (*paths_a, *paths_b)]
    horizon = min(ends)
    if max(ends) > horizon:
        logger.warning("paths end between t=%g and t=%g; comparing up to t=%g", horizon, max(ends), horizon)
    grid = uniform_grid(horizon, dt)
    diff = np.array([_read(a, grid) - _read(b, grid) for a, b in zip(paths_a, paths_b, strict=True)])
    with np.errstate(invalid="ignore"):
        return grid, np.sqrt(np.mean(diff**2, axis=0))


def _read(path: FilterPath, grid: np.ndarray) -> np.ndarray:
    # latest sample not after each grid time, tolerant to grid rounding
    idx = np.searchsorted(path.times, grid + 1e-9, side="right") - 1
    return path.values[np.clip(idx, 0, None)]


def ensemble_mean(paths: Sequence[FilterPath], grid: np.ndarray) -> np.ndarray:
    return np.mean([_read(p, grid) for p in paths], axis=0)
