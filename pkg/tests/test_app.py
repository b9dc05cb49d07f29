import json

import pytest
import typer
from typer.testing import CliRunner

import mcdemod
from tests.conftest import CONFIG_DIR, QUICK_COLOCATED, QUICK_DIFFUSION


class TestCommands:
    def test_version(self, runner: CliRunner, app: typer.Typer) -> None:
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert result.stdout.strip() == mcdemod.__version__

    def test_fit_hill(self, runner: CliRunner, app: typer.Typer) -> None:
        result = runner.invoke(app, ["fit-hill", "11", "58", "--points", "50", "--starts", "single"])
        assert result.exit_code == 0, result.output
        fits = json.loads(result.stdout)
        assert len(fits) == 2
        for fit in fits:
            assert fit["at_amplitude"] == pytest.approx(fit["target"], rel=0.1)

    def test_steady_state(self, runner: CliRunner, app: typer.Typer, config_file) -> None:
        result = runner.invoke(app, ["steady-state", str(config_file(QUICK_DIFFUSION, "diffusion.yaml"))])
        assert result.exit_code == 0, result.output
        means = json.loads(result.stdout)
        assert means == {"1.2": pytest.approx(10.0), "4.8": pytest.approx(40.0)}

    def test_steady_state_with_rates(self, runner: CliRunner, app: typer.Typer, config_file) -> None:
        path = str(config_file(QUICK_DIFFUSION, "diffusion.yaml"))
        result = runner.invoke(app, ["steady-state", path, "--rate", "2.4"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout) == {"2.4": pytest.approx(20.0)}

    def test_three_species_check(self, runner: CliRunner, app: typer.Typer) -> None:
        result = runner.invoke(app, ["check-appendix-c", "--runs", "20", "--seed", "3"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["passed"]
        assert report["late-Y2"]["steady_state"] == [0.0, 0.0, 30.0]


class TestExitCodes:
    def test_invalid_config(self, runner: CliRunner, app: typer.Typer, config_file) -> None:
        result = runner.invoke(app, ["ber", str(config_file({"scenario": "teleport"}, "bad.yaml"))])
        assert result.exit_code == 2

    def test_wrong_scenario(self, runner: CliRunner, app: typer.Typer) -> None:
        result = runner.invoke(app, ["fit-dcs2", str(CONFIG_DIR / "colocated.yaml")])
        assert result.exit_code == 2

    def test_steady_state_needs_a_diffusion_config(self, runner: CliRunner, app: typer.Typer) -> None:
        result = runner.invoke(app, ["steady-state", str(CONFIG_DIR / "colocated.yaml")])
        assert result.exit_code == 2

    def test_overflowing_propensity(self, runner: CliRunner, app: typer.Typer, config_file, tmp_path) -> None:
        content = {**QUICK_COLOCATED, "receptors": {"g_plus": 1.0e308, "g_minus": 0.5, "M": 100}}
        path = str(config_file(content, "overflow.yaml"))
        result = runner.invoke(app, ["simulate", path], env={"MCDEMOD_OUTPUT_DIR": str(tmp_path)})
        assert result.exit_code == 3


class TestOutputs:
    def test_simulate_layout(self, runner: CliRunner, app: typer.Typer, config_file, tmp_path) -> None:
        path = str(config_file(QUICK_COLOCATED, "quick.yaml"))
        result = runner.invoke(app, ["simulate", path], env={"MCDEMOD_OUTPUT_DIR": str(tmp_path)})
        assert result.exit_code == 0, result.output
        directory = tmp_path / "quick-colocated"
        assert (directory / "config.snapshot").is_file()
        assert (directory / "references.csv").is_file()
        assert len(list((directory / "trajectories").glob("*.events"))) == 6
        summary = json.loads((directory / "summary.json").read_text())
        assert summary["runs_per_symbol"] == 3

    def test_ber_is_reproducible(self, runner: CliRunner, app: typer.Typer, config_file, tmp_path) -> None:
        path = str(config_file(QUICK_COLOCATED, "quick.yaml"))
        for name in ("first", "second"):
            result = runner.invoke(app, ["ber", path], env={"MCDEMOD_OUTPUT_DIR": str(tmp_path / name)})
            assert result.exit_code == 0, result.output
        for artifact in ("config.snapshot", "ber.csv", "summary.json"):
            first = (tmp_path / "first" / "quick-colocated" / artifact).read_bytes()
            second = (tmp_path / "second" / "quick-colocated" / artifact).read_bytes()
            assert first == second

    def test_demod_writes_curves(self, runner: CliRunner, app: typer.Typer, config_file, tmp_path) -> None:
        path = str(config_file(QUICK_COLOCATED, "quick.yaml"))
        result = runner.invoke(app, ["demod", path, "--no-paths"], env={"MCDEMOD_OUTPUT_DIR": str(tmp_path)})
        assert result.exit_code == 0, result.output
        directory = tmp_path / "quick-colocated"
        header = (directory / "rms.csv").read_text().splitlines()[0]
        assert header.startswith("time,exact-intermediate/s0/f0")
        assert not (directory / "filters").exists()
