from pathlib import Path

import pytest
import typer
import yaml
from typer.testing import CliRunner

from mcdemod.app import app as real_app
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.rdme.grid import ReceptorParams, VoxelGrid
from mcdemod.settings import PROJECT_DIR, Settings

CONFIG_DIR = Path(PROJECT_DIR) / "configs"

QUICK_COLOCATED = {
    "name": "quick-colocated",
    "scenario": "colocated",
    "symbols": {"amplitudes": [11, 58], "duration": 10},
    "runs": 3,
    "horizon": 15,
    "decision_times": [5, 10, 15],
    "hill": {"points": 20, "starts": "single"},
    "seed": 7,
}

# one voxel holding transmitter and receptors; continuous emission 1.2/s gives a mean of 10
QUICK_DIFFUSION = {
    "name": "quick-diffusion",
    "scenario": "diffusion",
    "grid": {
        "size": [1.0, 1.0, 1.0],
        "width": 1.0,
        "diffusion": 1.0,
        "transmitter_at": [0.5, 0.5, 0.5],
        "receiver_at": [0.5, 0.5, 0.5],
    },
    "emission": {"rates": [1.2, 4.8], "duration": 20},
    "receptors": {"g_plus": 0.05, "g_minus": 1.0, "M": 10},
    "runs": 3,
    "horizon": 30,
    "decision_times": [10, 20, 30],
    "hill": {"points": 20, "starts": "single"},
    "seed": 11,
}


@pytest.fixture(scope="class")
def app() -> typer.Typer:
    return real_app


@pytest.fixture(scope="class")
def runner() -> CliRunner:
    yield CliRunner()


@pytest.fixture(scope="class")
def receptors() -> ReceptorParams:
    return ReceptorParams(g_plus=0.02, g_minus=0.5, M=100)


@pytest.fixture(scope="class")
def line_grid() -> VoxelGrid:
    return VoxelGrid(shape=(3, 1, 1), width=1.0, diffusion=1.0, transmitter=(0, 0, 0), receiver=(2, 0, 0))


@pytest.fixture(scope="class")
def single_voxel() -> VoxelGrid:
    return VoxelGrid(shape=(1, 1, 1), width=1.0, diffusion=1.0, transmitter=(0, 0, 0), receiver=(0, 0, 0))


@pytest.fixture
def settings(tmp_path: Path) -> Settings:
    return Settings(output_dir=str(tmp_path / "output"), workers=1, log_level="WARNING")


@pytest.fixture(scope="class")
def quick_colocated() -> ExperimentConfig:
    return ExperimentConfig.model_validate(QUICK_COLOCATED)


@pytest.fixture(scope="class")
def quick_diffusion() -> ExperimentConfig:
    return ExperimentConfig.model_validate(QUICK_DIFFUSION)


@pytest.fixture(scope="class")
def config_file(tmp_path_factory: pytest.TempPathFactory):
    """Writes a mapping to a fresh YAML file and returns its path."""
    directory = tmp_path_factory.mktemp("configs")

    def write(content: dict, name: str = "experiment.yaml") -> Path:
        path = directory / name
        path.write_text(yaml.safe_dump(content))
        return path

    return write
