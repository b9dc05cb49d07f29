from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from os import PathLike

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeFloat, PositiveFloat

from mcdemod.errors import DataFormatError
from mcdemod.signals import PiecewiseConstant

logger = logging.getLogger(__name__)

SAMPLING_INTERVAL = 2.5
SAMPLES_PER_PROFILE = 64

# Msn2 amplitude reached at each 1-NM-PP1 concentration
MSN2_AMPLITUDES = {"100nM": 313.2, "275nM": 744.5, "690nM": 1107.8, "3uM": 1410.1}

# total squared error over the 30 published profiles
CM_MODEL_ERROR = 3.9e7
BASELINE_MODEL_ERROR = 4.9e7


@dataclass(frozen=True, eq=False)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise DataFormatError(f"series {self.label!r}: times and values must be 1-D of equal length")
        if np.any(np.diff(times) <= 0):
            raise DataFormatError(f"series {self.label!r}: sample times must increase strictly")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.times.size)

    def to_step(self) -> PiecewiseConstant:
        """Sample-and-hold signal, with the first value held back to t = 0."""
        if self.times.size == 0:
            return PiecewiseConstant.constant(0.0)
        if self.times[0] > 0:
            return PiecewiseConstant(np.r_[0.0, self.times], np.r_[self.values[0], self.values])
        return PiecewiseConstant(self.times - self.times[0], self.values)


def ingest_timeseries(path: str | PathLike) -> list[TimeSeries]:
    """Read a CSV with a ``time`` column followed by one column per profile."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [(reader.line_num, row) for row in reader if row and any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise DataFormatError(f"{path}: no data rows (row count {max(len(rows) - 1, 0)})")
    header, body = [cell.strip() for cell in rows[0][1]], rows[1:]
    if len(header) < 2 or header[0].lower() != "time":
        raise DataFormatError(f"{path}: expected a 'time' column followed by profile columns, got {header}")
    for line, row in body:
        if len(row) != len(header):
            raise DataFormatError(f"{path}: line {line} has {len(row)} cells, expected {len(header)} columns")
    try:
        table = np.array([[float(cell) for cell in row] for _, row in body])
    except ValueError as exc:
        raise DataFormatError(f"{path}: non-numeric cell: {exc}") from exc

    times = table[:, 0]
    if np.any(np.diff(times) <= 0):
        raise DataFormatError(f"{path}: time column is not strictly increasing")
    spacing = np.diff(times)
    if spacing.size and not np.allclose(spacing, spacing[0], rtol=1e-6, atol=1e-9):
        logger.warning(
            "%s: non-uniform sampling (steps %g..%g); fitting uses the actual times", path, spacing.min(), spacing.max()
        )
    logger.info("read %d profiles of %d samples from %s", len(header) - 1, times.size, path)
    return [TimeSeries(times, table[:, j], header[j]) for j in range(1, len(header))]


class Msn2Profile(BaseModel):
    """Rectangular Msn2 input: ``amplitude`` during each ``(start, duration)`` pulse, 0 otherwise."""

    model_config = ConfigDict(frozen=True)

    amplitude: PositiveFloat
    pulses: tuple[tuple[NonNegativeFloat, NonNegativeFloat], ...] = ()
    label: str = ""

    @property
    def total_on(self) -> float:
        return float(sum(duration for _, duration in self.pulses))

    @property
    def end(self) -> float:
        return max((start + duration for start, duration in self.pulses), default=0.0)

    def signal(self) -> PiecewiseConstant:
        edges = {0.0: 0.0}
        for start, duration in sorted(self.pulses):
            if duration <= 0:
                continue
            if start < max(edges):
                raise ValueError(f"pulses of profile {self.label!r} overlap")
            edges[start] = self.amplitude
            edges[start + duration] = 0.0
        knots = np.array(sorted(edges))
        return PiecewiseConstant(knots, np.array([edges[k] for k in knots]))


def cm_profiles(
    amplitudes: Sequence[float] = tuple(MSN2_AMPLITUDES.values()),
    durations: Sequence[float] = (10.0, 20.0, 30.0, 40.0, 50.0),
    start: float = 5.0,
) -> list[Msn2Profile]:
    """Single-pulse profiles over the amplitude x duration grid."""
    return [
        Msn2Profile(amplitude=a, pulses=((start, d),), label=f"cm-{a:g}-{d:g}") for a in amplitudes for d in durations
    ]


def pulse_train(
    n: int,
    width: float = 5.0,
    gap: float = 10.0,
    amplitude: float = MSN2_AMPLITUDES["690nM"],
    start: float = 5.0,
) -> Msn2Profile:
    pulses = tuple((start + i * (width + gap), width) for i in range(n))
    return Msn2Profile(amplitude=amplitude, pulses=pulses, label=f"train-{n}x{width:g}")


def sample_times(n: int = SAMPLES_PER_PROFILE, interval: float = SAMPLING_INTERVAL) -> np.ndarray:
    return np.arange(n) * interval
