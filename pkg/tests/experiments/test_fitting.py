import numpy as np
import pytest

from mcdemod.dcs2.data import sample_times
from mcdemod.dcs2.model import SYNTHETIC_CONSTANTS
from mcdemod.errors import ConfigurationError
from mcdemod.experiments.config import ExperimentConfig, load_config
from mcdemod.experiments.fitting import load_datasets, run_dcs2_experiment
from mcdemod.settings import Settings


def write_measurements(path, columns: int):
    times = sample_times(10)
    table = np.column_stack([times] + [np.linspace(0.0, 100.0 * (j + 1), times.size) for j in range(columns)])
    header = ",".join(["time"] + [f"m{j}" for j in range(columns)])
    np.savetxt(path, table, delimiter=",", header=header, comments="")
    return path


MEASURED_CONSTANTS = {"d3": 0.12, "k4": 8.0, "d4": 0.002, "k5": 0.09}


def dcs2_config(**section) -> ExperimentConfig:
    return ExperimentConfig.model_validate({"name": "dcs2", "scenario": "dcs2", "dcs2": section})


class TestLoadDatasets:
    def test_synthetic_when_no_data_file(self) -> None:
        datasets, synthetic = load_datasets(dcs2_config())
        assert synthetic
        assert len(datasets) == 6
        assert datasets[-1].label.startswith("train")

    def test_measured_columns_pair_with_profiles(self, tmp_path) -> None:
        path = write_measurements(tmp_path / "myfp.csv", 2)
        profiles = [{"amplitude": 744.5, "pulses": [[5, 10]], "label": "a"}, {"amplitude": 1410.1, "pulses": [[5, 20]]}]
        datasets, synthetic = load_datasets(dcs2_config(data=str(path), profiles=profiles, fixed=MEASURED_CONSTANTS))
        assert not synthetic
        assert [d.label for d in datasets] == ["m0", "m1"]
        assert datasets[1].msn2(np.array([10.0]))[0] == 1410.1

    def test_column_count_must_match(self, tmp_path) -> None:
        path = write_measurements(tmp_path / "myfp.csv", 2)
        profiles = [{"amplitude": 744.5, "pulses": [[5, 10]]}]
        config = dcs2_config(data=str(path), profiles=profiles, fixed=MEASURED_CONSTANTS)
        with pytest.raises(ConfigurationError, match="2 profiles"):
            load_datasets(config)


class TestMeasuredDataConstants:
    def test_measured_data_without_constants_is_rejected(self) -> None:
        with pytest.raises(ConfigurationError, match="dcs2.fixed"):
            dcs2_config(data="myfp.csv")

    def test_rejected_when_loaded_from_yaml(self, config_file) -> None:
        path = config_file({"scenario": "dcs2", "dcs2": {"data": "myfp.csv"}}, "measured.yaml")
        with pytest.raises(ConfigurationError, match="dcs2.fixed"):
            load_config(path)

    def test_explicit_constants_are_kept(self) -> None:
        config = dcs2_config(data="myfp.csv", fixed=MEASURED_CONSTANTS)
        assert config.dcs2.fixed.k4 == 8.0
        assert config.dcs2.fixed != SYNTHETIC_CONSTANTS

    def test_synthetic_route_keeps_the_stand_ins(self) -> None:
        assert dcs2_config().dcs2.fixed == SYNTHETIC_CONSTANTS

    def test_snapshot_of_a_measured_config_reloads(self) -> None:
        config = dcs2_config(data="myfp.csv", fixed=MEASURED_CONSTANTS)
        assert ExperimentConfig.model_validate_json(config.snapshot()).snapshot() == config.snapshot()


class TestRunDCS2:
    def test_short_fit_report(self) -> None:
        config = dcs2_config(fit={"max_evaluations": 20, "starts": [[3.19e-4, 0.15, 1400, 0.40, 0.23]]})
        report = run_dcs2_experiment(config, Settings(workers=1))
        assert report.synthetic
        assert report.fitted.shape == (report.times.size, 6)
        summary = report.summary()
        assert set(summary["per_dataset"]) == {d.label for d in report.datasets}
        assert summary["error"] >= 0
