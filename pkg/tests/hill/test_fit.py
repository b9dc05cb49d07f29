import math

import numpy as np
import pytest
from pydantic import ValidationError

from mcdemod.errors import ConfigurationError
from mcdemod.hill.fit import HillFitConfig, HillParams, fit_grid, fit_hill, hill_eval, hill_target
from mcdemod.rdme.grid import reference_grid
from mcdemod.rdme.meanfield import steady_state_mean


class TestHillEval:
    params = HillParams(h=2.0, H=10.0, n=3.0, a_k=11.0)

    def test_zero_and_half_saturation(self) -> None:
        assert hill_eval(self.params, 0.0) == 0.0
        assert hill_eval(self.params, 10.0) == pytest.approx(1.0)

    def test_saturates_at_h(self) -> None:
        assert hill_eval(self.params, 1e6 * 10.0) == pytest.approx(2.0, abs=2e-3)

    def test_monotone(self) -> None:
        values = self.params(np.linspace(0.0, 100.0, 100))
        assert np.all(np.diff(values) > 0)

    def test_negative_input(self) -> None:
        with pytest.raises(ValueError):
            hill_eval(self.params, -1.0)

    def test_json_keeps_every_field(self) -> None:
        assert HillParams.from_json(self.params.to_json()) == self.params


class TestHillTarget:
    @pytest.mark.parametrize("a", [11.0, 58.0])
    def test_clamp_boundary(self, a: float) -> None:
        assert hill_target(a, a / math.log(a)) == pytest.approx(0.0, abs=1e-12)
        assert hill_target(a, 0.5 * a / math.log(a)) == 0.0
        assert hill_target(a, a) == pytest.approx(math.log(a) - 1.0)

    def test_grid_spans_the_boundary_to_deep_saturation(self) -> None:
        config = HillFitConfig()
        q = fit_grid(58.0, config)
        assert q.size == 200
        assert q[0] == pytest.approx(1.001 * 58.0 / math.log(58.0))
        assert q[-1] == pytest.approx(5800.0)


class TestFitHill:
    @pytest.mark.parametrize("a, target", [(11.0, 1.3979), (58.0, 3.0604)])
    def test_fit_is_close_at_the_amplitude(self, a: float, target: float) -> None:
        params = fit_hill(a)
        assert params.a_k == a
        assert params(a) == pytest.approx(target, rel=0.1)

    def test_fits_are_cached(self) -> None:
        assert fit_hill(11.0) is fit_hill(11.0)

    def test_single_start(self) -> None:
        params = fit_hill(58.0, HillFitConfig(starts="single", points=50))
        assert params.q_min > 0
        assert params.residual >= 0

    @pytest.mark.parametrize("a", [1.0, math.e])
    def test_amplitude_above_e(self, a: float) -> None:
        with pytest.raises(ConfigurationError):
            fit_hill(a)

    def test_bounds_must_increase(self) -> None:
        with pytest.raises(ValidationError):
            HillFitConfig(n_bounds=(4.0, 1.0))


@pytest.fixture(scope="class")
def reference_amplitudes() -> tuple[float, float]:
    grid = reference_grid()
    return steady_state_mean(grid, 150.0), steady_state_mean(grid, 600.0)


class TestReferenceGridFits:
    def test_amplitudes(self, reference_amplitudes: tuple[float, float]) -> None:
        a0, a1 = reference_amplitudes
        assert a0 == pytest.approx(5.54, abs=0.01)
        assert a1 == pytest.approx(4 * a0)

    @pytest.mark.parametrize("symbol", [0, 1])
    def test_fit_is_a_local_optimum(self, reference_amplitudes: tuple[float, float], symbol: int) -> None:
        a = reference_amplitudes[symbol]
        config = HillFitConfig()
        params = fit_hill(a, config)
        q = fit_grid(a, config)
        target = hill_target(a, q)

        def residual(**update: float) -> float:
            return float(np.sum((target - hill_eval(params.model_copy(update=update), q)) ** 2))

        assert not params.degraded
        assert residual() == pytest.approx(params.residual, rel=1e-9, abs=1e-15)
        for name in ("h", "H", "n"):
            for factor in (0.99, 1.01):
                assert residual(**{name: getattr(params, name) * factor}) >= params.residual * (1 - 1e-6)

    def test_upper_filter_is_small_at_the_lower_amplitude(self, reference_amplitudes: tuple[float, float]) -> None:
        a0, a1 = reference_amplitudes
        upper = fit_hill(a1)
        assert hill_target(a1, a0) == 0.0
        assert 0.0 < upper(a0) < 0.25 * upper(a1)
