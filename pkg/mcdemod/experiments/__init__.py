from mcdemod.experiments.ber import (
    BERReport,
    BERResult,
    one_sample_baseline,
    run_baseline_experiment,
    run_ber_experiment,
    threshold_baseline,
)
from mcdemod.experiments.channel import Channel, RunOutcome, build_channel, simulate_run
from mcdemod.experiments.compare import counts_as_path, ensemble_mean, rms_compare
from mcdemod.experiments.config import ExperimentConfig, load_config
from mcdemod.experiments.demod import DemodReport, run_demod_experiment
from mcdemod.experiments.runner import run_all

__all__ = [
    "BERReport",
    "BERResult",
    "Channel",
    "DemodReport",
    "ExperimentConfig",
    "RunOutcome",
    "build_channel",
    "counts_as_path",
    "ensemble_mean",
    "load_config",
    "one_sample_baseline",
    "rms_compare",
    "run_all",
    "run_baseline_experiment",
    "run_ber_experiment",
    "run_demod_experiment",
    "simulate_run",
    "threshold_baseline",
]
