import numpy as np
import pytest

from mcdemod.dcs2.data import BASELINE_MODEL_ERROR, Msn2Profile, TimeSeries, pulse_train, sample_times
from mcdemod.dcs2.fit import (
    Dataset,
    DCS2FitConfig,
    default_synthetic_profiles,
    fit_dcs2,
    max_myfp_proportionality,
    myfp_integral_identity,
    synthetic_datasets,
)
from mcdemod.dcs2.model import FREE_PARAMETERS, REFERENCE_PARAMS, SYNTHETIC_CONSTANTS, DCS2Params
from mcdemod.errors import ConfigurationError
from mcdemod.signals import PiecewiseConstant

FAST_RECEPTORS = DCS2Params(g_plus=3.19e-3, g_minus=1.5, a=1400.0, d2=0.40, k3=0.23)


@pytest.fixture(scope="class")
def synthetic() -> list[Dataset]:
    return synthetic_datasets(REFERENCE_PARAMS, SYNTHETIC_CONSTANTS, default_synthetic_profiles())


class TestDCS2FitConfig:
    def test_default_starts_avoid_the_published_optimum(self) -> None:
        base = REFERENCE_PARAMS.to_vector()
        starts = np.array(DCS2FitConfig().starts)
        assert starts.shape == (3, 5)
        assert not any(np.allclose(start, base) for start in starts)
        assert np.abs(np.log(starts / base)) == pytest.approx(np.full((3, 5), np.log(1.25)))


class TestFitDCS2:
    def test_noiseless_data_from_the_true_start(self, synthetic: list[Dataset]) -> None:
        config = DCS2FitConfig(starts=(tuple(REFERENCE_PARAMS.to_vector()),), max_evaluations=60)
        result = fit_dcs2(synthetic, SYNTHETIC_CONSTANTS, config)
        assert result.labels == tuple(d.label for d in synthetic)
        assert len(result.per_dataset) == len(synthetic)
        assert result.error < 1e-6 * BASELINE_MODEL_ERROR
        for name in FREE_PARAMETERS:
            assert getattr(result.params, name) == pytest.approx(getattr(REFERENCE_PARAMS, name), rel=1e-2)

    @pytest.mark.slow
    def test_recovers_the_generating_parameters(self, synthetic: list[Dataset]) -> None:
        start = tuple(REFERENCE_PARAMS.to_vector() * np.array([1.2, 0.85, 1.1, 0.9, 1.15]))
        result = fit_dcs2(synthetic, SYNTHETIC_CONSTANTS, DCS2FitConfig(starts=(start,), max_evaluations=3000))
        for name in FREE_PARAMETERS:
            assert getattr(result.params, name) == pytest.approx(getattr(REFERENCE_PARAMS, name), rel=0.1)

    def test_zero_input_is_unidentifiable(self) -> None:
        times = sample_times(8)
        dataset = Dataset(PiecewiseConstant.constant(0.0), TimeSeries(times, np.zeros(times.size), "flat"))
        result = fit_dcs2([dataset])
        assert result.unidentifiable
        assert not result.converged
        assert result.error == 0.0

    def test_needs_data(self) -> None:
        with pytest.raises(ConfigurationError):
            fit_dcs2([])


class TestMaxMyfp:
    def test_zero_on_time_gives_zero(self) -> None:
        result = max_myfp_proportionality(REFERENCE_PARAMS, durations=(0.0, 10.0))
        assert result.max_myfp[0] == 0.0
        assert result.max_myfp[1] > 0

    def test_proportional_to_on_time(self) -> None:
        result = max_myfp_proportionality(REFERENCE_PARAMS)
        assert result.durations == (10.0, 20.0, 30.0, 40.0, 50.0)
        assert result.relative_residual <= 0.05

    def test_doubling_on_time_doubles_the_peak(self) -> None:
        result = max_myfp_proportionality(FAST_RECEPTORS, durations=(10.0, 20.0))
        assert result.max_myfp[1] == pytest.approx(2 * result.max_myfp[0], rel=0.05)

    def test_pulse_train_matches_a_single_pulse(self) -> None:
        train = pulse_train(4)
        single = Msn2Profile(amplitude=train.amplitude, pulses=((5.0, train.total_on),))
        result = max_myfp_proportionality(FAST_RECEPTORS, profiles=[train, single])
        assert result.max_myfp[0] == pytest.approx(result.max_myfp[1], rel=0.1)

    def test_integral_identity(self) -> None:
        profile = Msn2Profile(amplitude=744.5, pulses=((5.0, 20.0),))
        simulated, predicted = myfp_integral_identity(REFERENCE_PARAMS, SYNTHETIC_CONSTANTS, profile)
        assert simulated == pytest.approx(predicted, rel=1e-2)
