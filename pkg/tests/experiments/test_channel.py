import numpy as np
import pytest

from mcdemod.experiments.channel import build_channel, simulate_run
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.rdme.network import ACTIVE, INACTIVE
from mcdemod.settings import Settings


@pytest.fixture(scope="class")
def colocated_channel(quick_colocated: ExperimentConfig):
    return build_channel(quick_colocated, Settings(workers=1))


@pytest.fixture(scope="class")
def diffusion_channel(quick_diffusion: ExperimentConfig):
    return build_channel(quick_diffusion, Settings(workers=1))


class TestBuildChannel:
    def test_colocated(self, colocated_channel) -> None:
        assert colocated_channel.K == 2
        assert colocated_channel.symbols.amplitudes == (11.0, 58.0)
        assert colocated_channel.record == (INACTIVE, ACTIVE)
        assert colocated_channel.receiver is None
        assert len(colocated_channel.hills) == 2
        assert colocated_channel.initial_state(1)["S"] == 58

    def test_filter_grid_contains_the_decision_times(self, colocated_channel) -> None:
        assert np.all(np.isin([5.0, 10.0, 15.0], colocated_channel.filter_times))
        assert colocated_channel.filter_times[-1] == pytest.approx(15.0)

    def test_diffusion_amplitudes_come_from_the_steady_state(self, diffusion_channel) -> None:
        assert diffusion_channel.symbols.amplitudes == pytest.approx((10.0, 40.0))
        assert diffusion_channel.symbols.duration == 20.0
        assert diffusion_channel.receiver == "S[0,0,0]"
        assert diffusion_channel.inputs is None

    def test_rectangular_reference(self, quick_diffusion: ExperimentConfig) -> None:
        config = quick_diffusion.model_copy(
            update={"circuit": quick_diffusion.circuit.model_copy(update={"reference": "rectangular"})}
        )
        channel = build_channel(config, Settings(workers=1))
        assert channel.references[1](np.array([0.0, 19.9, 20.0])) == pytest.approx([40.0, 40.0, 1.0])

    def test_dcs2_has_no_channel(self) -> None:
        with pytest.raises(ValueError):
            build_channel(ExperimentConfig(scenario="dcs2"), Settings(workers=1))


class TestSimulateRun:
    def test_same_key_same_run(self, colocated_channel) -> None:
        first = simulate_run(colocated_channel, 7, 1, 2)
        second = simulate_run(colocated_channel, 7, 1, 2)
        assert np.array_equal(first.trajectory.times, second.trajectory.times)
        assert np.array_equal(first.trajectory.deltas, second.trajectory.deltas)
        assert first.counts.final.tolist() == second.counts.final.tolist()
        for a, b in zip(first.productions, second.productions, strict=True):
            assert np.array_equal(a.times, b.times)

    def test_runs_draw_different_streams(self, colocated_channel) -> None:
        first = simulate_run(colocated_channel, 7, 1, 0, full=False)
        second = simulate_run(colocated_channel, 7, 1, 1, full=False)
        assert not np.array_equal(first.trajectory.times, second.trajectory.times)

    def test_channel_only(self, colocated_channel) -> None:
        outcome = simulate_run(colocated_channel, 7, 0, 0, full=False)
        assert outcome.key == (0, 0)
        assert outcome.filters == {}
        assert outcome.counts is None

    def test_colocated_filter_families(self, colocated_channel) -> None:
        outcome = simulate_run(colocated_channel, 7, 0, 0)
        assert set(outcome.filters) == {"exact", "intermediate", "positive"}
        for paths in outcome.filters.values():
            assert len(paths) == 2
            assert np.array_equal(paths[0].times, colocated_channel.filter_times)
        for path in outcome.filters["positive"]:
            assert np.all(np.diff(path.values) >= 0)
        assert len(outcome.productions) == 2
        assert outcome.activations >= 0

    def test_active_count_stays_within_the_receptors(self, colocated_channel) -> None:
        outcome = simulate_run(colocated_channel, 7, 1, 0, full=False)
        active = outcome.active_at(colocated_channel.filter_times)
        assert active.min() >= 0
        assert active.max() <= 100

    def test_diffusion_runs_only_the_exact_filter(self, diffusion_channel) -> None:
        outcome = simulate_run(diffusion_channel, 11, 1, 0)
        assert set(outcome.filters) == {"exact"}
        assert outcome.trajectory.species == ("S[0,0,0]", INACTIVE, ACTIVE)
        assert len(outcome.productions) == 2
        assert outcome.counts.final.min() >= 0
