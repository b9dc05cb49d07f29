"""Chemical reaction networks with mass-action propensities."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, model_validator

RateConstant = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class Reaction(BaseModel):
    """One reaction channel. Stoichiometries map species name to coefficient."""

    model_config = ConfigDict(frozen=True)

    reactants: dict[str, NonNegativeInt] = Field(default_factory=dict)
    products: dict[str, NonNegativeInt] = Field(default_factory=dict)
    rate: RateConstant
    kind: Literal["mass-action"] = "mass-action"
    name: str = ""

    @property
    def order(self) -> int:
        return sum(self.reactants.values())

    def change(self) -> dict[str, int]:
        """Net stoichiometric change, zero entries dropped."""
        names = set(self.reactants) | set(self.products)
        delta = {s: self.products.get(s, 0) - self.reactants.get(s, 0) for s in names}
        return {s: d for s, d in sorted(delta.items()) if d != 0}


class ReactionNetwork(BaseModel):
    model_config = ConfigDict(frozen=True)

    species: tuple[str, ...]
    reactions: tuple[Reaction, ...] = ()

    @model_validator(mode="after")
    def _check_species(self) -> ReactionNetwork:
        if len(set(self.species)) != len(self.species):
            raise ValueError("species names must be unique")
        known = set(self.species)
        for reaction in self.reactions:
            missing = (set(reaction.reactants) | set(reaction.products)) - known
            if missing:
                raise ValueError(f"reaction {reaction.name or reaction} references unknown species {sorted(missing)}")
        return self

    def index(self, name: str) -> int:
        try:
            return self.species.index(name)
        except ValueError:
            raise KeyError(f"species {name!r} is not part of the network") from None

    def state(self, counts: Mapping[str, int] | Sequence[int] | np.ndarray | None = None) -> np.ndarray:
        """Full count vector from a name->count mapping (missing species are 0) or a sequence."""
        if counts is None:
            return np.zeros(len(self.species), dtype=np.int64)
        if isinstance(counts, Mapping):
            x = np.zeros(len(self.species), dtype=np.int64)
            for name, value in counts.items():
                x[self.index(name)] = value
        else:
            x = np.asarray(counts, dtype=np.int64).copy()
            if x.shape != (len(self.species),):
                raise ValueError(f"state has shape {x.shape}, network has {len(self.species)} species")
        if np.any(x < 0):
            raise ValueError("counts must be non-negative")
        return x

    @cached_property
    def compiled(self) -> CompiledNetwork:
        return CompiledNetwork.from_network(self)


def propensity(reaction: Reaction, state: Mapping[str, int]) -> float:
    """Mass-action propensity: rate constant times the falling factorials of the reactant counts."""
    value = reaction.rate
    for name, order in reaction.reactants.items():
        count = state.get(name, 0)
        if count < order:
            return 0.0
        value *= math.perm(count, order)
    return value


@dataclass(frozen=True, eq=False)
class CompiledNetwork:
    """Array form consumed by the SSA kernel.

    Unimolecular reactions (one reactant, coefficient 1) are grouped per reactant
    species into one channel whose propensity is ``count * sum(rates)``; every
    other reaction is its own channel. Channels ``[0, n_groups)`` are groups.
    """

    n_species: int
    group_species: np.ndarray
    group_rate: np.ndarray
    group_ptr: np.ndarray
    group_rx: np.ndarray
    group_rx_rate: np.ndarray
    other_rx: np.ndarray
    other_rate: np.ndarray
    react_ptr: np.ndarray
    react_sp: np.ndarray
    react_ord: np.ndarray
    chg_ptr: np.ndarray
    chg_sp: np.ndarray
    chg_delta: np.ndarray
    dep_ptr: np.ndarray
    dep_ch: np.ndarray

    @classmethod
    def from_network(cls, network: ReactionNetwork) -> CompiledNetwork:
        index = {name: i for i, name in enumerate(network.species)}
        groups: dict[int, list[int]] = {}
        others: list[int] = []
        for r, reaction in enumerate(network.reactions):
            if len(reaction.reactants) == 1 and next(iter(reaction.reactants.values())) == 1:
                groups.setdefault(index[next(iter(reaction.reactants))], []).append(r)
            else:
                others.append(r)

        group_species = np.array(sorted(groups), dtype=np.int64)
        members = [groups[s] for s in group_species]
        group_ptr = np.cumsum([0] + [len(m) for m in members], dtype=np.int64)
        group_rx = np.array([r for m in members for r in m], dtype=np.int64)
        group_rx_rate = np.array([network.reactions[r].rate for r in group_rx], dtype=np.float64)
        group_rate = np.array([sum(network.reactions[r].rate for r in m) for m in members], dtype=np.float64)

        react_ptr, react_sp, react_ord = [0], [], []
        for r in others:
            for name, order in sorted(network.reactions[r].reactants.items()):
                if order > 0:
                    react_sp.append(index[name])
                    react_ord.append(order)
            react_ptr.append(len(react_sp))

        chg_ptr, chg_sp, chg_delta = [0], [], []
        for reaction in network.reactions:
            for name, delta in reaction.change().items():
                chg_sp.append(index[name])
                chg_delta.append(delta)
            chg_ptr.append(len(chg_sp))

        n_groups = len(group_species)
        depends: list[list[int]] = [[] for _ in network.species]
        for g, s in enumerate(group_species):
            depends[s].append(g)
        for o, r in enumerate(others):
            for name in network.reactions[r].reactants:
                depends[index[name]].append(n_groups + o)
        dep_ptr = np.cumsum([0] + [len(d) for d in depends], dtype=np.int64)

        return cls(
            n_species=len(network.species),
            group_species=group_species,
            group_rate=group_rate,
            group_ptr=group_ptr,
            group_rx=group_rx,
            group_rx_rate=group_rx_rate,
            other_rx=np.array(others, dtype=np.int64),
            other_rate=np.array([network.reactions[r].rate for r in others], dtype=np.float64),
            react_ptr=np.array(react_ptr, dtype=np.int64),
            react_sp=np.array(react_sp, dtype=np.int64),
            react_ord=np.array(react_ord, dtype=np.int64),
            chg_ptr=np.array(chg_ptr, dtype=np.int64),
            chg_sp=np.array(chg_sp, dtype=np.int64),
            chg_delta=np.array(chg_delta, dtype=np.int64),
            dep_ptr=dep_ptr,
            dep_ch=np.array([c for d in depends for c in d], dtype=np.int64),
        )
