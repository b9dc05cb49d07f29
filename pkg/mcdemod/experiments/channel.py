"""Per-experiment channel set-up and the single-run pipeline.

One run simulates the receptor trajectory for a transmitted symbol, evaluates the
demodulation filters, samples the molecular-circuit outputs and lets them
annihilate. Random streams: 0 for the channel SSA, 1 for the circuit outputs,
2 for annihilation, each spawned on ``(symbol, run)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from mcdemod.circuit.annihilation import SpeciesCounts, annihilate
from mcdemod.circuit.nhpp import CountingPath, simulate_y
from mcdemod.crn.network import ReactionNetwork
from mcdemod.crn.ssa import ClampSchedule, RngSpec, time_varying_ssa
from mcdemod.crn.trajectory import Trajectory, uniform_grid
from mcdemod.demod.filters import FilterPath, exact_filter, intermediate_filter, positive_filter
from mcdemod.demod.renewal import activation_count
from mcdemod.demod.symbols import CMSymbolSet
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.hill.fit import HillParams, fit_hill
from mcdemod.rdme.grid import ReceptorParams, voxel_species
from mcdemod.rdme.meanfield import mean_trajectory, rectangular_reference, steady_state_mean
from mcdemod.rdme.network import ACTIVE, INACTIVE, SIGNAL, build_colocated, build_rdme, receptor_initial
from mcdemod.settings import Settings
from mcdemod.signals import Signal

logger = logging.getLogger(__name__)

CHANNEL_STREAM, CIRCUIT_STREAM, ANNIHILATION_STREAM = 0, 1, 2


@dataclass(frozen=True, eq=False)
class Channel:
    """Everything the runs of one experiment share."""

    scenario: str
    symbols: CMSymbolSet
    receptors: ReceptorParams
    network: ReactionNetwork
    schedules: tuple[ClampSchedule, ...]
    references: tuple[Signal, ...]
    hills: tuple[HillParams, ...]
    record: tuple[str, ...]
    horizon: float
    filter_times: np.ndarray
    decision_times: np.ndarray
    k_a: float
    # None: u(t) is read off the receiver voxel of each trajectory
    inputs: tuple[Signal, ...] | None = None
    receiver: str | None = None

    @property
    def K(self) -> int:
        return self.symbols.K

    def initial_state(self, symbol: int) -> dict[str, int]:
        return {**receptor_initial(self.receptors), **self.schedules[symbol].segments[0].levels}


def build_channel(config: ExperimentConfig, settings: Settings) -> Channel:
    if config.scenario == "dcs2":
        raise ValueError("the dcs2 scenario has no communication channel")
    horizon = config.horizon
    decision_times = config.decision_grid
    filter_times = np.union1d(uniform_grid(horizon, settings.filter_dt), decision_times)
    section = config.symbols

    if config.scenario == "colocated":
        symbols = CMSymbolSet(
            amplitudes=section.amplitudes, off_level=section.off_level, duration=section.duration, priors=section.priors
        )
        pulses = tuple(symbols.signal(k) for k in range(symbols.K))
        schedules = tuple(ClampSchedule.from_signals({SIGNAL: pulse}, horizon) for pulse in pulses)
        channel_parts = dict(
            network=build_colocated(config.receptors),
            schedules=schedules,
            references=pulses,
            record=(INACTIVE, ACTIVE),
            inputs=pulses,
        )
    else:
        grid = config.grid.build()
        emission = config.emission
        amplitudes = tuple(steady_state_mean(grid, rate) for rate in emission.rates)
        logger.info("design amplitudes from continuous emission: %s", ", ".join(f"{a:.4g}" for a in amplitudes))
        symbols = CMSymbolSet(
            amplitudes=amplitudes, off_level=section.off_level, duration=emission.duration, priors=section.priors
        )
        if config.circuit.reference == "mean-field":
            references = tuple(
                mean_trajectory(grid, emission, k, horizon, settings.quadrature_dt) for k in range(symbols.K)
            )
        else:
            references = tuple(
                rectangular_reference(a, section.off_level, emission.duration) for a in symbols.amplitudes
            )
        receiver = voxel_species(grid.receiver)
        channel_parts = dict(
            network=build_rdme(grid, emission, config.receptors),
            schedules=tuple(emission.schedule(k, horizon) for k in range(symbols.K)),
            references=references,
            record=(receiver, INACTIVE, ACTIVE),
            inputs=tuple(symbols.signal(k) for k in range(symbols.K)) if config.circuit.input == "clamped" else None,
            receiver=receiver,
        )

    return Channel(
        scenario=config.scenario,
        symbols=symbols,
        receptors=config.receptors,
        hills=tuple(fit_hill(a, config.hill) for a in symbols.amplitudes),
        horizon=horizon,
        filter_times=filter_times,
        decision_times=decision_times,
        k_a=config.circuit.k_a,
        **channel_parts,
    )


@dataclass(frozen=True, eq=False)
class RunOutcome:
    symbol: int
    run: int
    trajectory: Trajectory
    filters: dict[str, tuple[FilterPath, ...]] = field(default_factory=dict)
    productions: tuple[CountingPath, ...] = ()
    counts: SpeciesCounts | None = None
    activations: int = 0

    @property
    def key(self) -> tuple[int, int]:
        return self.symbol, self.run

    def active_at(self, times: np.ndarray) -> np.ndarray:
        return self.trajectory.path(ACTIVE)(times)


def simulate_channel(channel: Channel, seed: int, symbol: int, run: int) -> Trajectory:
    rng = RngSpec(master_seed=seed, stream=CHANNEL_STREAM).spawn(symbol, run)
    return time_varying_ssa(
        channel.network,
        channel.initial_state(symbol),
        channel.schedules[symbol],
        channel.horizon,
        rng,
        record=channel.record,
    )


def simulate_run(channel: Channel, seed: int, symbol: int, run: int, full: bool = True) -> RunOutcome:
    """One run of the pipeline; ``full=False`` stops after the channel SSA."""
    trajectory = simulate_channel(channel, seed, symbol, run)
    if not full:
        return RunOutcome(symbol, run, trajectory)

    symbols, receptors, times = channel.symbols, channel.receptors, channel.filter_times
    log_priors = symbols.log_priors
    filters = {
        "exact": tuple(
            exact_filter(trajectory, channel.references[k], receptors, float(log_priors[k]), times)
            for k in range(channel.K)
        )
    }
    u = channel.inputs[symbol] if channel.inputs is not None else trajectory.path(channel.receiver)
    if channel.scenario == "colocated":
        filters["intermediate"] = tuple(
            intermediate_filter(trajectory, u, symbols.signal(k), receptors.g_minus, float(log_priors[k]), times)
            for k in range(channel.K)
        )
        filters["positive"] = tuple(
            positive_filter(trajectory, u, symbols.amplitudes[k], receptors.g_minus, times=times)
            for k in range(channel.K)
        )

    circuit_rng = RngSpec(master_seed=seed, stream=CIRCUIT_STREAM).spawn(symbol, run)
    productions = tuple(
        simulate_y(trajectory, u, channel.hills[k], receptors.g_minus, circuit_rng.spawn(k), M=receptors.M)
        for k in range(channel.K)
    )
    counts = annihilate(
        productions,
        channel.k_a,
        RngSpec(master_seed=seed, stream=ANNIHILATION_STREAM).spawn(symbol, run),
        horizon=channel.horizon,
    )
    window = min(symbols.duration, channel.horizon)
    return RunOutcome(
        symbol,
        run,
        trajectory,
        filters=filters,
        productions=productions,
        counts=counts,
        activations=activation_count(trajectory, window),
    )
