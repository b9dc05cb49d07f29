from mcdemod.rdme.grid import (
    EmissionSchedule,
    ReceptorParams,
    VoxelGrid,
    emitter_species,
    reference_grid,
    voxel_species,
)
from mcdemod.rdme.meanfield import mean_trajectory, rectangular_reference, steady_state_mean, transition_matrix
from mcdemod.rdme.network import ACTIVE, INACTIVE, SIGNAL, build_colocated, build_rdme, receptor_initial

__all__ = [
    "ACTIVE",
    "INACTIVE",
    "SIGNAL",
    "EmissionSchedule",
    "ReceptorParams",
    "VoxelGrid",
    "build_colocated",
    "build_rdme",
    "emitter_species",
    "mean_trajectory",
    "reference_grid",
    "receptor_initial",
    "rectangular_reference",
    "steady_state_mean",
    "transition_matrix",
    "voxel_species",
]
