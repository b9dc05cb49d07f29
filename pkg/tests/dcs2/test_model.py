import numpy as np
import pytest
from pydantic import ValidationError

from mcdemod.dcs2.model import (
    REFERENCE_PARAMS,
    SYNTHETIC_CONSTANTS,
    DCS2Params,
    simulate_batch,
    simulate_dcs2,
)
from mcdemod.signals import PiecewiseConstant

TIMES = np.linspace(0.0, 100.0, 101)


class TestDCS2Params:
    def test_vector_round_trip(self) -> None:
        assert DCS2Params.from_vector(REFERENCE_PARAMS.to_vector()) == REFERENCE_PARAMS

    def test_amplitude_above_e(self) -> None:
        with pytest.raises(ValidationError):
            DCS2Params(g_plus=1e-3, g_minus=0.1, a=2.0, d2=0.4, k3=0.2)

    def test_hill_gate_comes_from_the_amplitude(self) -> None:
        assert REFERENCE_PARAMS.hill().a_k == REFERENCE_PARAMS.a


class TestSimulate:
    def test_zero_input_stays_at_zero(self) -> None:
        run = simulate_dcs2(REFERENCE_PARAMS, PiecewiseConstant.constant(0.0), TIMES)
        assert np.all(run.states == 0.0)

    def test_active_fraction_equilibrium(self) -> None:
        c = 1107.8
        run = simulate_dcs2(REFERENCE_PARAMS, PiecewiseConstant.constant(c), TIMES)
        on = REFERENCE_PARAMS.g_plus * c
        assert run["P_active"][-1] == pytest.approx(on / (on + REFERENCE_PARAMS.g_minus), rel=1e-6)

    def test_states_stay_non_negative(self) -> None:
        pulse = PiecewiseConstant(np.array([0.0, 5.0, 25.0]), np.array([0.0, 1410.1, 0.0]))
        run = simulate_dcs2(REFERENCE_PARAMS, pulse, TIMES)
        assert np.all(run.states >= -1e-9)
        assert run.max_myfp > 0

    def test_matured_yfp_never_decreases_without_decay(self) -> None:
        pulse = PiecewiseConstant(np.array([0.0, 5.0, 25.0]), np.array([0.0, 744.5, 0.0]))
        fixed = SYNTHETIC_CONSTANTS.model_copy(update={"d4": 0.0})
        run = simulate_dcs2(REFERENCE_PARAMS, pulse, TIMES, fixed)
        assert np.all(np.diff(run["mYFP"]) >= -1e-12)

    def test_batch_matches_single_runs(self) -> None:
        inputs = [PiecewiseConstant.rectangular(313.2, 0.0, 30.0), PiecewiseConstant.rectangular(1410.1, 0.0, 10.0)]
        batch = simulate_batch(REFERENCE_PARAMS, inputs, TIMES)
        assert batch.states.shape == (TIMES.size, 2, 5)
        for j, signal in enumerate(inputs):
            single = simulate_dcs2(REFERENCE_PARAMS, signal, TIMES)
            assert batch.states[:, j, :] == pytest.approx(single.states)
