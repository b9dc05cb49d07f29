"""Mean-field (first-moment) solution of the voxel channel.

Every reaction that moves signalling molecules is first order and receptor
binding does not consume them, so the mean counts ``m`` obey the linear system
``dm/dt = A m + r(t) e_tx`` exactly.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from mcdemod.crn.trajectory import uniform_grid
from mcdemod.errors import ConfigurationError, UnboundedMeanError
from mcdemod.numerics import rk4_integrate
from mcdemod.rdme.grid import EmissionSchedule, VoxelGrid
from mcdemod.signals import PiecewiseConstant, SampledSignal

logger = logging.getLogger(__name__)


def transition_matrix(grid: VoxelGrid) -> sparse.csr_matrix:
    """Generator ``A`` of the mean counts: jumps in, jumps and escapes out."""
    rows, cols, vals = [], [], []
    for voxel in grid.voxels():
        i = grid.flat(voxel)
        neighbours = grid.neighbours(voxel)
        for other in neighbours:
            rows.append(grid.flat(other))
            cols.append(i)
            vals.append(grid.jump_rate)
        rows.append(i)
        cols.append(i)
        vals.append(-(grid.jump_rate * len(neighbours) + grid.escape_rate * grid.exterior_faces(voxel)))
    n = grid.n_voxels
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def steady_state_mean(grid: VoxelGrid, rate: float) -> float:
    """Mean receiver-voxel count under continuous emission at ``rate`` molecules/s."""
    if rate < 0:
        raise ConfigurationError(f"emission rate must be non-negative, got {rate}")
    if grid.escape_rate == 0:
        raise UnboundedMeanError("no escape channel anywhere: the mean count grows without bound")
    if rate == 0:
        return 0.0
    source = np.zeros(grid.n_voxels)
    source[grid.flat(grid.transmitter)] = rate
    mean = spsolve(transition_matrix(grid).tocsc(), -source)
    return float(mean[grid.flat(grid.receiver)])


def max_stable_step(grid: VoxelGrid) -> float:
    return 0.1 * grid.width**2 / (6 * grid.diffusion)


def mean_trajectory(
    grid: VoxelGrid,
    emission: EmissionSchedule,
    symbol: int,
    horizon: float,
    dt: float,
) -> SampledSignal:
    """sigma_k(t): mean receiver count for ``symbol`` sampled every ``dt`` from an empty medium."""
    if dt <= 0:
        raise ConfigurationError(f"sampling step must be positive, got {dt}")
    return _mean_from_rate(grid, emission.rate_signal(symbol), horizon, dt)


def _mean_from_rate(grid: VoxelGrid, rate: PiecewiseConstant, horizon: float, dt: float) -> SampledSignal:
    A = transition_matrix(grid)
    tx, rx = grid.flat(grid.transmitter), grid.flat(grid.receiver)
    times = uniform_grid(horizon, dt)

    def rhs(t: float, m: np.ndarray) -> np.ndarray:
        dm = A @ m
        dm[tx] += rate(t)
        return dm

    step = max_stable_step(grid)
    logger.debug("mean-field integration: %d samples, step <= %.3g s", times.size, step)
    means = rk4_integrate(rhs, np.zeros(grid.n_voxels), times, step)
    return SampledSignal(times, np.clip(means[:, rx], 0.0, None))


def rectangular_reference(amplitude: float, off_level: float, duration: float) -> PiecewiseConstant:
    """Rectangular stand-in for sigma_k: ``amplitude`` on ``[0, duration)``, ``off_level`` after."""
    return PiecewiseConstant.rectangular(amplitude, off_level, duration)
