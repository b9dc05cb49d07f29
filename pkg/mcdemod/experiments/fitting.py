from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from mcdemod.dcs2.data import ingest_timeseries
from mcdemod.dcs2.fit import Dataset, DCS2FitResult, default_synthetic_profiles, fit_dcs2, synthetic_datasets
from mcdemod.dcs2.model import simulate_batch
from mcdemod.errors import ConfigurationError
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.settings import Settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DCS2Report:
    result: DCS2FitResult
    datasets: list[Dataset]
    times: np.ndarray
    fitted: np.ndarray
    synthetic: bool

    def summary(self) -> dict:
        return {
            "synthetic": self.synthetic,
            "params": self.result.params.model_dump(),
            "hill": self.result.hill.model_dump(),
            "error": self.result.error,
            "per_dataset": dict(zip(self.result.labels, self.result.per_dataset, strict=True)),
            "converged": self.result.converged,
            "unidentifiable": self.result.unidentifiable,
        }


def load_datasets(config: ExperimentConfig) -> tuple[list[Dataset], bool]:
    """Measured data when ``dcs2.data`` is set, otherwise noiseless data from ``dcs2.truth``."""
    section = config.dcs2
    if section.data is None:
        logger.info("no dcs2.data file: fitting synthetic data generated from %s", section.truth)
        profiles = default_synthetic_profiles()
        return synthetic_datasets(section.truth, section.fixed, profiles, step=section.fit.step), True
    series = ingest_timeseries(section.data)
    if len(series) != len(section.profiles):
        raise ConfigurationError(
            f"{section.data} has {len(series)} profiles but dcs2.profiles lists {len(section.profiles)}"
        )
    datasets = [
        Dataset(profile.signal(), measured, measured.label or profile.label)
        for profile, measured in zip(section.profiles, series, strict=True)
    ]
    return datasets, False


def run_dcs2_experiment(config: ExperimentConfig, settings: Settings | None = None) -> DCS2Report:
    settings = settings or Settings()
    section = config.dcs2
    datasets, synthetic = load_datasets(config)
    fit_config = section.fit
    if settings.workers > fit_config.workers:
        fit_config = fit_config.model_copy(update={"workers": settings.workers})
    result = fit_dcs2(datasets, section.fixed, fit_config)

    times = np.unique(np.concatenate([d.myfp.times for d in datasets] + [np.zeros(1)]))
    sim = simulate_batch(result.params, [d.msn2 for d in datasets], times, section.fixed, result.hill, fit_config.step)
    return DCS2Report(result, datasets, times, sim["mYFP"], synthetic)
