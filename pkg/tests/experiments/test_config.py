import json

import numpy as np
import pytest
from pydantic import ValidationError

from mcdemod.errors import ConfigurationError
from mcdemod.experiments.config import ExperimentConfig, load_config
from tests.conftest import CONFIG_DIR


class TestLoadConfig:
    @pytest.mark.parametrize(
        "name, scenario",
        [
            ("colocated.yaml", "colocated"),
            ("diffusion-40.yaml", "diffusion"),
            ("diffusion-10.yaml", "diffusion"),
            ("dcs2-synthetic.yaml", "dcs2"),
        ],
    )
    def test_shipped_configs(self, name: str, scenario: str) -> None:
        config = load_config(CONFIG_DIR / name)
        assert config.scenario == scenario
        assert config.seed in (20190101, None)

    def test_diffusion_receptors(self) -> None:
        config = load_config(CONFIG_DIR / "diffusion-40.yaml")
        assert config.receptors.M == 40
        assert config.receptors.g_plus == pytest.approx(0.005 / (1 / 3) ** 3)
        assert config.emission.rates == (150.0, 600.0)

    def test_missing_file(self, tmp_path) -> None:
        with pytest.raises(ConfigurationError, match="cannot read"):
            load_config(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path) -> None:
        path = tmp_path / "broken.yaml"
        path.write_text("symbols: [unclosed\n")
        with pytest.raises(ConfigurationError, match="not valid YAML"):
            load_config(path)

    def test_top_level_must_be_a_mapping(self, tmp_path) -> None:
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigurationError):
            load_config(path)

    @pytest.mark.parametrize(
        "content",
        [
            {"scenario": "colocated", "unknown": 1},
            {"scenario": "teleport"},
            {"receptors": {"g_plus": -1.0, "g_minus": 0.5, "M": 100}},
            {"horizon": 10, "decision_times": [5, 20]},
            {"decision_times": [10, 5]},
        ],
    )
    def test_rejected_content(self, config_file, content: dict) -> None:
        with pytest.raises(ConfigurationError):
            load_config(config_file(content, "rejected.yaml"))

    def test_empty_file_is_the_default_experiment(self, tmp_path) -> None:
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_config(path) == ExperimentConfig()


class TestExperimentConfig:
    def test_colocated_defaults(self) -> None:
        config = ExperimentConfig()
        assert config.symbols.amplitudes == (11.0, 58.0)
        assert config.receptors.M == 100
        assert config.runs == 100

    def test_diffusion_amplitudes_stay_unset(self) -> None:
        assert ExperimentConfig(scenario="diffusion").symbols.amplitudes is None

    def test_default_decision_grid(self) -> None:
        grid = ExperimentConfig(horizon=60).decision_grid
        assert grid.size == 81
        assert grid[-1] == 40.0
        assert ExperimentConfig(horizon=10).decision_grid[-1] == 10.0

    def test_explicit_decision_times(self) -> None:
        config = ExperimentConfig(horizon=20, decision_times=(5, 10, 20))
        assert np.array_equal(config.decision_grid, [5.0, 10.0, 20.0])

    def test_decision_times_within_the_horizon(self) -> None:
        with pytest.raises(ValidationError):
            ExperimentConfig(horizon=20, decision_times=(30,))

    def test_snapshot_is_canonical(self, quick_colocated: ExperimentConfig) -> None:
        snapshot = quick_colocated.snapshot()
        assert snapshot == ExperimentConfig.model_validate(json.loads(snapshot)).snapshot()
        assert json.loads(snapshot)["name"] == "quick-colocated"
