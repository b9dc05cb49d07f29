import numpy as np
import pytest

from mcdemod.experiments.config import ExperimentConfig, load_config
from mcdemod.experiments.demod import run_demod_experiment
from mcdemod.settings import Settings
from tests.conftest import CONFIG_DIR


class TestQuickDemod:
    def test_colocated_curves(self, quick_colocated: ExperimentConfig, settings: Settings) -> None:
        report = run_demod_experiment(quick_colocated, settings)
        assert set(report.rms) == {
            f"{label}/s{s}/f{k}" for label in ("exact-intermediate", "positive-circuit") for s in (0, 1) for k in (0, 1)
        }
        assert set(report.means) == {
            f"{family}/s{s}/f{k}"
            for family in ("circuit", "exact", "intermediate", "positive")
            for s in (0, 1)
            for k in (0, 1)
        }
        for curve in report.means.values():
            assert curve.shape == report.grid.shape
        assert report.stats["decision_time"] == 10.0
        assert set(report.stats["activations"]) == {"0", "1"}

    def test_diffusion_curves(self, quick_diffusion: ExperimentConfig, settings: Settings) -> None:
        report = run_demod_experiment(quick_diffusion, settings)
        assert {key.split("/")[0] for key in report.rms} == {"exact-circuit"}
        assert "activations" not in report.stats
        assert set(report.stats["matched_accuracy"]) == {"circuit", "exact"}


@pytest.mark.slow
class TestColocatedDemod:
    @pytest.fixture(scope="class")
    def report(self):
        return run_demod_experiment(load_config(CONFIG_DIR / "colocated.yaml"), Settings(workers=4))

    def test_activation_count_follows_the_renewal_prediction(self, report) -> None:
        for stats in report.stats["activations"].values():
            assert stats["mean"] == pytest.approx(stats["predicted_mean"], rel=0.05)
            assert stats["cv"] == pytest.approx(stats["predicted_cv"], rel=0.25)

    def test_matched_filters_pick_the_sent_symbol(self, report) -> None:
        for family in ("exact", "intermediate", "positive", "circuit"):
            assert min(report.stats["matched_accuracy"][family].values()) >= 0.95

    def test_intermediate_filter_stays_close_to_the_exact_one(self, report) -> None:
        i = int(np.searchsorted(report.grid, 45.0 - 1e-9))
        for k in (0, 1):
            rms = report.rms[f"exact-intermediate/s{k}/f{k}"][i]
            assert rms <= 0.15 * abs(report.means[f"intermediate/s{k}/f{k}"][i])

    @pytest.mark.parametrize("k", [0, 1])
    def test_circuit_tracks_the_positive_filter(self, report, k: int) -> None:
        i = int(np.searchsorted(report.grid, 50.0 - 1e-9))
        circuit, positive = report.means[f"circuit/s{k}/f{k}"][i], report.means[f"positive/s{k}/f{k}"][i]
        assert circuit == pytest.approx(positive, rel=0.1)
