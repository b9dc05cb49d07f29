"""Filter-quality experiment: how close the approximate filters and the circuit stay to the exact filter."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from mcdemod.crn.trajectory import uniform_grid
from mcdemod.demod.renewal import renewal_stats
from mcdemod.experiments.channel import Channel, RunOutcome, build_channel
from mcdemod.experiments.compare import counts_as_path, ensemble_mean, rms_compare
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.experiments.runner import run_all
from mcdemod.settings import Settings

logger = logging.getLogger(__name__)

# (label, first family, second family) of each RMS curve
COMPARISONS = {
    "colocated": (("exact-intermediate", "exact", "intermediate"), ("positive-circuit", "positive", "circuit")),
    "diffusion": (("exact-circuit", "exact", "circuit"),),
}


@dataclass(frozen=True, eq=False)
class DemodReport:
    channel: Channel
    outcomes: list[RunOutcome]
    grid: np.ndarray
    rms: dict[str, np.ndarray] = field(default_factory=dict)
    means: dict[str, np.ndarray] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {"amplitudes": list(self.channel.symbols.amplitudes), **self.stats}


def _family(outcome: RunOutcome, family: str, k: int, times: np.ndarray):
    if family == "circuit":
        return counts_as_path(outcome.productions[k], times)
    return outcome.filters[family][k]


def _matched_accuracy(channel: Channel, outcomes: list[RunOutcome], family: str, t: float) -> dict[str, float]:
    out = {}
    for symbol in range(channel.K):
        sent = [o for o in outcomes if o.symbol == symbol]
        if family == "circuit":
            picks = [int(np.argmax([p.count(t) for p in o.productions])) for o in sent]
        else:
            picks = [int(np.argmax([p.at(t) for p in o.filters[family]])) for o in sent]
        out[str(symbol)] = float(np.mean(np.asarray(picks) == symbol))
    return out


def run_demod_experiment(config: ExperimentConfig, settings: Settings | None = None) -> DemodReport:
    """Runs every symbol ``config.runs`` times and summarises the filter families.

    RMS curves are keyed ``"<comparison>/s<symbol>/f<filter>"`` and ensemble means
    ``"<family>/s<symbol>/f<filter>"``, all on the ``Settings.filter_dt`` grid.
    """
    settings = settings or Settings()
    seed = settings.default_seed if config.seed is None else config.seed
    channel = build_channel(config, settings)
    outcomes = run_all(channel, seed, config.runs, settings.workers)
    grid = uniform_grid(channel.horizon, settings.filter_dt)
    comparisons = COMPARISONS[channel.scenario]
    families = sorted({f for _, a, b in comparisons for f in (a, b)})

    rms, means = {}, {}
    for symbol in range(channel.K):
        sent = [o for o in outcomes if o.symbol == symbol]
        for k in range(channel.K):
            paths = {f: [_family(o, f, k, channel.filter_times) for o in sent] for f in families}
            for f in families:
                means[f"{f}/s{symbol}/f{k}"] = ensemble_mean(paths[f], grid)
            if len(sent) >= 2:
                for label, a, b in comparisons:
                    _, curve = rms_compare(paths[a], paths[b], settings.filter_dt)
                    rms[f"{label}/s{symbol}/f{k}"] = curve

    d = min(channel.symbols.duration, channel.horizon)
    stats = {
        "decision_time": d,
        "matched_accuracy": {f: _matched_accuracy(channel, outcomes, f, d) for f in families},
    }
    if channel.scenario == "colocated":
        stats["matched_accuracy"]["intermediate"] = _matched_accuracy(channel, outcomes, "intermediate", d)
        receptors = channel.receptors
        activations = {}
        for symbol, a in enumerate(channel.symbols.amplitudes):
            counts = np.array([o.activations for o in outcomes if o.symbol == symbol], dtype=float)
            predicted = renewal_stats(receptors.g_plus, receptors.g_minus, a, receptors.M)
            activations[str(symbol)] = {
                "mean": float(counts.mean()),
                "predicted_mean": predicted.activation_mean(d),
                "cv": float(counts.std() / counts.mean()) if counts.mean() > 0 else 0.0,
                "predicted_cv": predicted.activation_cv(d),
            }
        stats["activations"] = activations
    for key, curve in rms.items():
        logger.debug("RMS %s at t=%g: %.4g", key, grid[-1], curve[-1])
    return DemodReport(channel, outcomes, grid, rms, means, stats)
