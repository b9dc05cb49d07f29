"""Geometry, emission and receptor parameters of the voxel channel."""

from __future__ import annotations

import math
from collections.abc import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from mcdemod.crn.ssa import ClampSchedule
from mcdemod.signals import PiecewiseConstant

Voxel = tuple[NonNegativeInt, NonNegativeInt, NonNegativeInt]

OFFSETS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


class VoxelGrid(BaseModel):
    """Rectangular lattice of cubic voxels with an absorbing outer surface.

    Molecules jump between face-adjacent voxels at ``D/W**2`` and leave the medium
    through every exterior face of a boundary voxel at ``D/(escape_divisor*W**2)``.
    An infinite ``escape_divisor`` closes the boundary.
    """

    model_config = ConfigDict(frozen=True)

    shape: tuple[PositiveInt, PositiveInt, PositiveInt] = Field(description="(nx, ny, nz) voxels")
    width: PositiveFloat = Field(description="voxel edge W (um)")
    diffusion: PositiveFloat = Field(description="diffusion coefficient D (um^2/s)")
    transmitter: Voxel
    receiver: Voxel
    escape_divisor: PositiveFloat = 50.0

    @model_validator(mode="after")
    def _check_voxels(self) -> VoxelGrid:
        for label, voxel in (("transmitter", self.transmitter), ("receiver", self.receiver)):
            if any(i >= n for i, n in zip(voxel, self.shape, strict=True)):
                raise ValueError(f"{label} voxel {voxel} lies outside a {self.shape} grid")
        if self.transmitter == self.receiver and self.n_voxels > 1:
            raise ValueError("transmitter and receiver must occupy different voxels")
        return self

    @classmethod
    def from_medium(
        cls,
        size: tuple[float, float, float],
        width: float,
        diffusion: float,
        transmitter_at: tuple[float, float, float],
        receiver_at: tuple[float, float, float],
        escape_divisor: float = 50.0,
    ) -> VoxelGrid:
        """Grid covering a medium of ``size`` (um) with transceivers given by position."""
        shape = tuple(int(round(s / width)) for s in size)
        if any(abs(n * width - s) > 1e-9 * max(s, 1.0) for n, s in zip(shape, size, strict=True)):
            raise ValueError(f"medium {size} is not a whole number of voxels of width {width}")

        def locate(position: tuple[float, float, float]) -> tuple[int, int, int]:
            return tuple(min(int(math.floor(p / width)), n - 1) for p, n in zip(position, shape, strict=True))

        return cls(
            shape=shape,
            width=width,
            diffusion=diffusion,
            transmitter=locate(transmitter_at),
            receiver=locate(receiver_at),
            escape_divisor=escape_divisor,
        )

    @property
    def n_voxels(self) -> int:
        return math.prod(self.shape)

    @property
    def jump_rate(self) -> float:
        return self.diffusion / self.width**2

    @property
    def escape_rate(self) -> float:
        return self.diffusion / (self.escape_divisor * self.width**2)

    def voxel_of(self, position: tuple[float, float, float]) -> tuple[int, int, int]:
        """0-based voxel containing ``position`` (um from the medium corner)."""
        voxel = tuple(int(math.floor(p / self.width)) for p in position)
        if any(not 0 <= i < n for i, n in zip(voxel, self.shape, strict=True)):
            raise ValueError(f"position {position} lies outside the medium")
        return voxel

    def flat(self, voxel: tuple[int, int, int]) -> int:
        return int(np.ravel_multi_index(voxel, self.shape))

    def voxels(self) -> Iterator[tuple[int, int, int]]:
        return (tuple(int(i) for i in v) for v in np.ndindex(*self.shape))

    def neighbours(self, voxel: tuple[int, int, int]) -> list[tuple[int, int, int]]:
        out = []
        for offset in OFFSETS:
            other = tuple(v + o for v, o in zip(voxel, offset, strict=True))
            if all(0 <= i < n for i, n in zip(other, self.shape, strict=True)):
                out.append(other)
        return out

    def exterior_faces(self, voxel: tuple[int, int, int]) -> int:
        return 6 - len(self.neighbours(voxel))


def reference_grid() -> VoxelGrid:
    """2 x 2 x 1 um medium, W = 1/3 um, D = 1 um^2/s; transceivers at (0.5,0.8,0.5) and (1.5,0.8,0.5) um."""
    return VoxelGrid.from_medium((2.0, 2.0, 1.0), 1 / 3, 1.0, (0.5, 0.8, 0.5), (1.5, 0.8, 0.5))


class EmissionSchedule(BaseModel):
    """Per-symbol Poisson emission: ``rates[k]`` molecules/s while ON, ``basal`` otherwise."""

    model_config = ConfigDict(frozen=True)

    rates: tuple[PositiveFloat, ...] = Field(min_length=1)
    duration: PositiveFloat
    basal: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _check_rates(self) -> EmissionSchedule:
        if any(r <= self.basal for r in self.rates):
            raise ValueError(f"every ON rate must exceed the basal rate {self.basal}")
        return self

    @property
    def n_symbols(self) -> int:
        return len(self.rates)

    def rate_signal(self, symbol: int) -> PiecewiseConstant:
        return PiecewiseConstant.rectangular(self.rates[symbol], self.basal, self.duration)

    def schedule(self, symbol: int, horizon: float) -> ClampSchedule:
        """Clamp levels of the emitter species while ``symbol`` is transmitted."""
        signals = {
            emitter_species(k): PiecewiseConstant.rectangular(1.0 if k == symbol else 0.0, 0.0, self.duration)
            for k in range(self.n_symbols)
        }
        if self.basal > 0:
            signals[BASAL_EMITTER] = PiecewiseConstant.rectangular(0.0, 1.0, self.duration)
        return ClampSchedule.from_signals(signals, horizon)


class ReceptorParams(BaseModel):
    """Receptor kinetics ``S + X -> S + X*`` (g_plus) and ``X* -> X`` (g_minus) with M receptors."""

    model_config = ConfigDict(frozen=True)

    g_plus: PositiveFloat = Field(description="activation constant (1/(count s))")
    g_minus: PositiveFloat = Field(description="deactivation rate (1/s)")
    M: PositiveInt = Field(description="receptor count")

    def active_mean(self, level: float) -> float:
        """Stationary mean active count at a constant signal level."""
        on = self.g_plus * level
        return self.M * on / (on + self.g_minus)


BASAL_EMITTER = "E[basal]"


def emitter_species(symbol: int) -> str:
    return f"E[{symbol}]"


def voxel_species(voxel: tuple[int, int, int]) -> str:
    return "S[{},{},{}]".format(*voxel)
