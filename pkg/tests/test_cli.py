"""Command-line interface, exercised through real subprocesses."""

import json
import subprocess
import sys

import pytest

from helpers import synthetic_dataset
from leadopt.data import save_dataset

CONFIG = {
    "initial_shots": 30,
    "max_iterations": 3,
    "batch_size": 20,
    "backend": {"kind": "mock", "seed": 4, "mutation_rate": 0.05},
    "gbt": {"n_trees": 40, "max_depth": 3, "learning_rate": 0.12,
            "min_leaf": 3, "seed": 0},
    "vocab_radius": 1,
    "vocab_dim": 16,
    "vocab_epochs": 1,
    "vocab_augment": 1,
}


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "leadopt.cli", *args],
        capture_output=True, text=True, cwd=cwd, timeout=280,
    )


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    ds = synthetic_dataset(13, 90)
    save_dataset(ds, root / "input.csv")
    (root / "config.json").write_text(json.dumps(CONFIG))
    return root


class TestCliFlow:
    def test_prep(self, workdir):
        result = run_cli([
            "--data-dir", "data", "prep",
            "--input", "input.csv", "--target", "SYNTH",
        ], cwd=workdir)
        assert result.returncode == 0, result.stderr
        assert "best20=20" in result.stdout
        assert "pool50=50" in result.stdout

    def test_train(self, workdir):
        result = run_cli([
            "--data-dir", "data", "--config", "config.json",
            "train", "--dataset", "SYNTH", "--folds", "3",
        ], cwd=workdir)
        assert result.returncode == 0, result.stderr
        for view in ("fingerprint", "descriptor", "embedding"):
            assert view in result.stdout

    def test_campaign_run_and_report(self, workdir):
        result = run_cli([
            "--data-dir", "data", "--config", "config.json",
            "campaign", "run", "--dataset", "SYNTH", "--id", "cli-camp",
        ], cwd=workdir)
        assert result.returncode == 0, result.stderr
        assert "3 iterations" in result.stdout

        report = run_cli([
            "--data-dir", "data", "campaign", "report", "--id", "cli-camp",
        ], cwd=workdir)
        assert report.returncode == 0, report.stderr
        assert "finished" in report.stdout
        lines = [l for l in report.stdout.splitlines() if l.startswith("{")]
        assert len(lines) == 3

        csv_report = run_cli([
            "--data-dir", "data", "campaign", "report", "--id", "cli-camp",
            "--format", "csv",
        ], cwd=workdir)
        assert csv_report.returncode == 0, csv_report.stderr
        rows = [l for l in csv_report.stdout.splitlines() if "," in l]
        assert rows[0].startswith("iteration,cutoff")
        assert len(rows) == 4  # header + 3 iterations

    def test_crash_resume_reproduces_transcript(self, workdir):
        # Full run in one go.
        full = run_cli([
            "--data-dir", "data", "--config", "config.json",
            "campaign", "run", "--dataset", "SYNTH", "--id", "full-run",
        ], cwd=workdir)
        assert full.returncode == 0, full.stderr

        # Interrupted run: 1 iteration, then raise the ceiling and resume.
        part = run_cli([
            "--data-dir", "data", "--config", "config.json",
            "campaign", "run", "--dataset", "SYNTH", "--id", "part-run",
            "--iterations", "1",
        ], cwd=workdir)
        assert part.returncode == 0, part.stderr

        state_path = workdir / "data" / "campaigns" / "part-run" / "state.json"
        state = json.loads(state_path.read_text())
        state["config"]["max_iterations"] = CONFIG["max_iterations"]
        state["status"] = "running"
        state_path.write_text(json.dumps(state))
        handle_path = workdir / "data" / "campaigns" / "part-run" / "handle.json"
        handle = json.loads(handle_path.read_text())
        handle["status"] = "paused"
        handle_path.write_text(json.dumps(handle))

        resumed = run_cli([
            "--data-dir", "data", "campaign", "resume", "--id", "part-run",
        ], cwd=workdir)
        assert resumed.returncode == 0, resumed.stderr

        full_state = json.loads(
            (workdir / "data" / "campaigns" / "full-run" / "state.json").read_text()
        )
        part_state = json.loads(state_path.read_text())
        assert part_state["reports"] == full_state["reports"]
        assert part_state["context"] == full_state["context"]

    def test_eval(self, workdir):
        smiles_file = workdir / "probe.smi"
        smiles_file.write_text("CCO\nCCN\nc1ccccc1\nCCO\nC((\n")
        result = run_cli([
            "--data-dir", "data", "--config", "config.json",
            "eval", "--input", "probe.smi", "--dataset", "SYNTH",
        ], cwd=workdir)
        assert result.returncode == 0, result.stderr
        assert "validity_rate" in result.stdout
        assert "0.8000" in result.stdout  # 4 of 5 parse

    def test_modify_one_shot(self, workdir):
        result = run_cli([
            "--data-dir", "data", "modify",
            "--smiles", "c1ccccc1", "--instruction", "add a polar group",
        ], cwd=workdir)
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["valid"]

    def test_unknown_dataset_error_exit(self, workdir):
        result = run_cli([
            "--data-dir", "data", "train", "--dataset", "missing",
        ], cwd=workdir)
        assert result.returncode == 2
        assert "error" in result.stderr
