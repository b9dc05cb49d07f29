from __future__ import annotations

from mcdemod.crn.network import Reaction, ReactionNetwork
from mcdemod.rdme.grid import (
    BASAL_EMITTER,
    EmissionSchedule,
    ReceptorParams,
    VoxelGrid,
    emitter_species,
    voxel_species,
)

SIGNAL = "S"
INACTIVE = "X"
ACTIVE = "X*"


def receptor_reactions(signal: str, receptors: ReceptorParams) -> list[Reaction]:
    return [
        Reaction(
            reactants={signal: 1, INACTIVE: 1},
            products={signal: 1, ACTIVE: 1},
            rate=receptors.g_plus,
            name="activation",
        ),
        Reaction(reactants={ACTIVE: 1}, products={INACTIVE: 1}, rate=receptors.g_minus, name="deactivation"),
    ]


def build_colocated(receptors: ReceptorParams) -> ReactionNetwork:
    """Receptor pair with the signal species ``S`` left to a clamp schedule."""
    return ReactionNetwork(species=(SIGNAL, INACTIVE, ACTIVE), reactions=tuple(receptor_reactions(SIGNAL, receptors)))


def build_rdme(grid: VoxelGrid, emission: EmissionSchedule, receptors: ReceptorParams) -> ReactionNetwork:
    """Voxel network: diffusion jumps, boundary escape, emitter births and receiver-voxel receptors."""
    voxels = list(grid.voxels())
    emitters = [emitter_species(k) for k in range(emission.n_symbols)]
    rates = list(emission.rates)
    if emission.basal > 0:
        emitters.append(BASAL_EMITTER)
        rates.append(emission.basal)

    species = [voxel_species(v) for v in voxels] + [INACTIVE, ACTIVE] + emitters
    reactions: list[Reaction] = []
    for voxel in voxels:
        here = voxel_species(voxel)
        for other in grid.neighbours(voxel):
            reactions.append(
                Reaction(reactants={here: 1}, products={voxel_species(other): 1}, rate=grid.jump_rate, name="jump")
            )
        if grid.escape_rate > 0:
            reactions.extend(
                Reaction(reactants={here: 1}, products={}, rate=grid.escape_rate, name="escape")
                for _ in range(grid.exterior_faces(voxel))
            )

    source = voxel_species(grid.transmitter)
    for emitter, rate in zip(emitters, rates, strict=True):
        reactions.append(Reaction(reactants={emitter: 1}, products={emitter: 1, source: 1}, rate=rate, name="emit"))
    reactions.extend(receptor_reactions(voxel_species(grid.receiver), receptors))
    return ReactionNetwork(species=tuple(species), reactions=tuple(reactions))


def receptor_initial(receptors: ReceptorParams) -> dict[str, int]:
    """All receptors inactive, every other species empty."""
    return {INACTIVE: receptors.M, ACTIVE: 0}
