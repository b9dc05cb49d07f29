import logging

import numpy as np
import pytest

from mcdemod.circuit.nhpp import CountingPath
from mcdemod.demod.filters import FilterPath
from mcdemod.errors import ConfigurationError
from mcdemod.experiments.compare import counts_as_path, ensemble_mean, rms_compare

TIMES = np.linspace(0.0, 10.0, 101)


def ramp(offset: float = 0.0, times: np.ndarray = TIMES) -> FilterPath:
    return FilterPath(times, times + offset, offset)


class TestRmsCompare:
    def test_identical_paths(self) -> None:
        grid, rms = rms_compare([ramp(), ramp()], [ramp(), ramp()], 0.5)
        assert grid[-1] == 10.0
        assert np.all(rms == 0.0)

    def test_constant_offset(self) -> None:
        _, rms = rms_compare([ramp(2.0), ramp(-2.0)], [ramp(), ramp()], 0.5)
        assert rms == pytest.approx(np.full(21, 2.0))

    def test_needs_two_runs(self) -> None:
        with pytest.raises(ConfigurationError):
            rms_compare([ramp()], [ramp()], 0.5)

    def test_runs_must_pair_up(self) -> None:
        with pytest.raises(ConfigurationError):
            rms_compare([ramp(), ramp()], [ramp()], 0.5)

    def test_truncates_to_the_earliest_end(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            grid, _ = rms_compare([ramp(), ramp(times=np.linspace(0.0, 6.0, 61))], [ramp(), ramp()], 0.5)
        assert grid[-1] == pytest.approx(6.0)
        assert "comparing up to" in caplog.text


class TestPaths:
    def test_counting_path_on_a_grid(self) -> None:
        path = counts_as_path(CountingPath(np.array([1.0, 2.5]), 5.0), np.arange(6.0))
        assert path.values.tolist() == [0.0, 1.0, 1.0, 2.0, 2.0, 2.0]

    def test_ensemble_mean(self) -> None:
        mean = ensemble_mean([ramp(1.0), ramp(3.0)], np.array([0.0, 5.0]))
        assert mean == pytest.approx([2.0, 7.0])
