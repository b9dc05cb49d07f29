import json
import os

from mcdemod.experiments.ber import run_ber_experiment
from mcdemod.experiments.config import ExperimentConfig
from mcdemod.experiments.output import experiment_dir, prepare, write_ber, write_summary
from mcdemod.settings import Settings


class TestOutput:
    def test_experiment_dir(self, quick_colocated: ExperimentConfig) -> None:
        assert experiment_dir(quick_colocated, "/tmp/out") == "/tmp/out/quick-colocated"
        custom = quick_colocated.model_copy(update={"output_dir": "/data/run"})
        assert experiment_dir(custom, "/tmp/out") == "/data/run"

    def test_prepare_writes_the_snapshot(self, quick_colocated: ExperimentConfig, tmp_path) -> None:
        directory = prepare(quick_colocated, str(tmp_path))
        with open(os.path.join(directory, "config.snapshot")) as fh:
            assert fh.read() == quick_colocated.snapshot()

    def test_ber_csv(self, quick_colocated: ExperimentConfig, settings: Settings, tmp_path) -> None:
        report = run_ber_experiment(quick_colocated, settings)
        write_ber(str(tmp_path), report.results)
        raw = (tmp_path / "ber.csv").read_bytes()
        lines = raw.split(b"\r\n")
        assert lines[0] == b"method,time,errors0,errors1,runs,ber,threshold"
        assert lines[-1] == b""
        assert len(lines) == 1 + 3 * 3 + 1
        assert lines[1].startswith(b"history-filter,5.0,")
        assert lines[-2].startswith(b"one-sample,15.0,")

    def test_summary_is_sorted(self, tmp_path) -> None:
        write_summary(str(tmp_path), {"b": 1, "a": {"d": 2, "c": 3}})
        text = (tmp_path / "summary.json").read_text()
        assert list(json.loads(text)) == ["a", "b"]
        assert text.index('"c"') < text.index('"d"')
        assert text.endswith("}\n")
