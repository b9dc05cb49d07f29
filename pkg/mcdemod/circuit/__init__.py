from mcdemod.circuit.annihilation import (
    AnnihilationConfig,
    ImpulseScenario,
    SpeciesCounts,
    annihilate,
    three_species_scenarios,
    decide,
    deterministic_annihilation,
    stochastic_agreement,
)
from mcdemod.circuit.nhpp import CountingPath, simulate_y

__all__ = [
    "AnnihilationConfig",
    "CountingPath",
    "ImpulseScenario",
    "SpeciesCounts",
    "annihilate",
    "three_species_scenarios",
    "decide",
    "deterministic_annihilation",
    "simulate_y",
    "stochastic_agreement",
]
