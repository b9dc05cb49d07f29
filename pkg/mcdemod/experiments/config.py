"""Experiment configuration: one YAML file validated into nested pydantic sections."""

from __future__ import annotations

import json
from os import PathLike
from typing import Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, model_validator

from mcdemod.crn.trajectory import uniform_grid
from mcdemod.dcs2.data import Msn2Profile, cm_profiles
from mcdemod.dcs2.fit import DCS2FitConfig
from mcdemod.dcs2.model import REFERENCE_PARAMS, SYNTHETIC_CONSTANTS, DCS2Params, FixedConstants
from mcdemod.errors import ConfigurationError
from mcdemod.hill.fit import HillFitConfig
from mcdemod.rdme.grid import EmissionSchedule, ReceptorParams, VoxelGrid

Scenario = Literal["colocated", "diffusion", "dcs2"]


class SymbolsSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    amplitudes: tuple[PositiveFloat, ...] | None = Field(
        default=None,
        description="a_k (molecules). Co-located default (11, 58); diffusion runs derive them from the steady state",
    )
    off_level: float = Field(default=1.0, ge=1.0, description="OFF level b (molecules)")
    duration: PositiveFloat = Field(default=50.0, description="ON duration d (s) of the co-located symbols")
    priors: tuple[float, ...] | None = Field(default=None, description="defaults to equiprobable symbols")


class GridSection(BaseModel):
    """Medium geometry; defaults give the 6 x 6 x 3 lattice of 1/3 um voxels."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    size: tuple[PositiveFloat, PositiveFloat, PositiveFloat] = (2.0, 2.0, 1.0)
    width: PositiveFloat = 1 / 3
    diffusion: PositiveFloat = 1.0
    transmitter_at: tuple[float, float, float] = (0.5, 0.8, 0.5)
    receiver_at: tuple[float, float, float] = (1.5, 0.8, 0.5)
    escape_divisor: PositiveFloat = Field(default=50.0, description="escape rate is D/(divisor W^2) per exterior face")

    def build(self) -> VoxelGrid:
        return VoxelGrid.from_medium(
            self.size, self.width, self.diffusion, self.transmitter_at, self.receiver_at, self.escape_divisor
        )


class CircuitSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    reference: Literal["mean-field", "rectangular"] = Field(
        default="mean-field", description="sigma_k(t) used by the diffusion history filter"
    )
    input: Literal["n_R", "clamped"] = Field(
        default="n_R",
        description="u(t) of the molecular circuit in diffusion runs: receiver-voxel count or the transmitted pulse",
    )
    k_a: PositiveFloat = Field(default=1.0, description="annihilation constant (1/(count s))")


class DCS2Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    data: str | None = Field(default=None, description="CSV of measured mYFP; None uses synthetic data")
    profiles: tuple[Msn2Profile, ...] = Field(
        default_factory=lambda: tuple(cm_profiles()),
        description="Msn2 input per data column, in column order",
    )
    fixed: FixedConstants = Field(default=SYNTHETIC_CONSTANTS, description="required whenever data is set")
    truth: DCS2Params = Field(default=REFERENCE_PARAMS, description="parameters generating synthetic data")
    fit: DCS2FitConfig = Field(default_factory=DCS2FitConfig)

    @model_validator(mode="after")
    def _measured_data_needs_constants(self) -> DCS2Section:
        # the synthetic stand-ins only describe data generated from them
        if self.data is not None and "fixed" not in self.model_fields_set:
            raise ConfigurationError(f"dcs2.data is {self.data!r}: dcs2.fixed must give the measured constants")
        return self


def _default_receptors() -> ReceptorParams:
    return ReceptorParams(g_plus=0.02, g_minus=0.5, M=100)


def _default_emission() -> EmissionSchedule:
    return EmissionSchedule(rates=(150.0, 600.0), duration=20.0)


class ExperimentConfig(BaseModel):
    """Everything one experiment needs.

    Receptor defaults are the co-located values (g_plus 0.02, g_minus 0.5, M 100);
    diffusion configs set g_plus = 0.005/W^3, g_minus = 1 and M = 40 or 10.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    scenario: Scenario = "colocated"
    symbols: SymbolsSection = Field(default_factory=SymbolsSection)
    receptors: ReceptorParams = Field(default_factory=_default_receptors)
    grid: GridSection = Field(default_factory=GridSection)
    emission: EmissionSchedule = Field(default_factory=_default_emission)
    circuit: CircuitSection = Field(default_factory=CircuitSection)
    hill: HillFitConfig = Field(default_factory=HillFitConfig)
    dcs2: DCS2Section = Field(default_factory=DCS2Section)
    runs: PositiveInt = 100
    horizon: PositiveFloat = Field(default=60.0, description="simulated time (s)")
    decision_times: tuple[float, ...] | None = Field(
        default=None, description="defaults to every 0.5 s over [0, min(horizon, 40)]"
    )
    seed: int | None = Field(default=None, ge=0, description="master seed; Settings.default_seed when unset")
    output_dir: str | None = None

    @model_validator(mode="before")
    @classmethod
    def _colocated_amplitudes(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("scenario", "colocated") == "colocated":
            symbols = data.get("symbols") or {}
            if isinstance(symbols, dict) and symbols.get("amplitudes") is None:
                data = {**data, "symbols": {**symbols, "amplitudes": (11.0, 58.0)}}
        return data

    @model_validator(mode="after")
    def _check(self) -> ExperimentConfig:
        times = self.decision_times
        if times is not None:
            if any(t < 0 or t > self.horizon for t in times):
                raise ValueError(f"decision times must lie within [0, {self.horizon}]")
            if list(times) != sorted(times):
                raise ValueError("decision times must be sorted")
        return self

    @property
    def decision_grid(self) -> np.ndarray:
        if self.decision_times is not None:
            return np.asarray(self.decision_times, dtype=float)
        return uniform_grid(min(self.horizon, 40.0), 0.5)

    def snapshot(self) -> str:
        """Canonical JSON dump, stable across runs."""
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def load_config(path: str | PathLike) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path} is not valid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping of sections")
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
