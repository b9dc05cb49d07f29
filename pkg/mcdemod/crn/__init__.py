from mcdemod.crn.network import CompiledNetwork, Reaction, ReactionNetwork, propensity
from mcdemod.crn.ssa import ClampSchedule, ClampSegment, RngSpec, as_generator, ssa_simulate, time_varying_ssa
from mcdemod.crn.trajectory import Trajectory, uniform_grid

__all__ = [
    "ClampSchedule",
    "ClampSegment",
    "CompiledNetwork",
    "Reaction",
    "ReactionNetwork",
    "RngSpec",
    "Trajectory",
    "as_generator",
    "propensity",
    "ssa_simulate",
    "time_varying_ssa",
    "uniform_grid",
]
