"""
Command-line interface tests
"""

import json
import sys

import pandas as pd
import pytest
from click.testing import CliRunner

from app.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def dataset(runner, tmp_path):
    path = tmp_path / "synthetic.txt"
    result = runner.invoke(main, [
        "gen-synthetic", str(path), "--n", "30", "--T", "8", "--hubs", "3",
        "--followers", "6", "--churn", "8", "--seed", "3",
    ])
    assert result.exit_code == 0, result.output
    return path


FAST = ["--mc-runs", "30", "--q", "2", "--seed", "5"]


class TestGenSynthetic:
    """Synthetic dataset generation"""

    def test_writes_snapshot_file(self, dataset):
        header = dataset.read_text(encoding="utf-8").splitlines()[0]
        assert header == "30 8"

    def test_deterministic(self, runner, tmp_path, dataset):
        other = tmp_path / "again.txt"
        runner.invoke(main, ["gen-synthetic", str(other), "--n", "30", "--T", "8", "--hubs", "3",
                             "--followers", "6", "--churn", "8", "--seed", "3"])
        assert other.read_bytes() == dataset.read_bytes()

    def test_invalid_plant(self, runner, tmp_path):
        result = runner.invoke(main, ["gen-synthetic", str(tmp_path / "x.txt"), "--n", "5", "--hubs", "5"])
        assert result.exit_code == 1
        assert "Cannot plant" in result.output


class TestStats:
    """stats command"""

    def test_snapshot_stats(self, runner, dataset):
        result = runner.invoke(main, ["stats", str(dataset), "--format", "snapshots"])
        assert result.exit_code == 0, result.output
        assert "n: 30" in result.output
        assert "T: 8" in result.output

    def test_event_file_needs_bins(self, runner, tmp_path):
        path = tmp_path / "events.txt"
        path.write_text("0 a b\n1 b c\n", encoding="utf-8")
        assert runner.invoke(main, ["stats", str(path)]).exit_code == 1
        result = runner.invoke(main, ["stats", str(path), "--n-bins", "2"])
        assert result.exit_code == 0, result.output
        assert "m: 2" in result.output


class TestRun:
    """run command"""

    def test_run_with_flags(self, runner, dataset, tmp_path):
        out = tmp_path / "record.json"
        result = runner.invoke(main, [
            "run", str(dataset), "--format", "snapshots", "--p", "6", "--lam", "0.2",
            "--k", "2", "--method", "static-last", "--out", str(out), *FAST,
        ])
        assert result.exit_code == 0, result.output
        assert "static-last (greedy) k=2" in result.output
        record = json.loads(out.read_text(encoding="utf-8"))
        assert len(record["seeds"]) == 2

    def test_config_overrides_flags(self, runner, dataset, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"k": 3, "im_algorithm": "dyndeg"}), encoding="utf-8")
        out = tmp_path / "record.json"
        result = runner.invoke(main, [
            "run", str(dataset), "--format", "snapshots", "--p", "6", "--lam", "0.2",
            "--k", "1", "--method", "jc", "--config", str(config), "--out", str(out), *FAST,
        ])
        assert result.exit_code == 0, result.output
        record = json.loads(out.read_text(encoding="utf-8"))
        assert record["k"] == 3
        assert record["selector"] == "dyn-deg-discount"

    @pytest.mark.skipif(sys.version_info < (3, 11), reason="tomllib needs Python 3.11")
    def test_toml_config_supplies_dataset(self, runner, dataset, tmp_path):
        config = tmp_path / "run.toml"
        config.write_text(
            "p = 6\nlam = 0.1\nk = 2\nmethod = \"static-mem\"\nmc_runs = 20\n\n"
            f"[dataset]\npath = \"{dataset.as_posix()}\"\nformat = \"snapshots\"\n",
            encoding="utf-8",
        )
        result = runner.invoke(main, ["run", "--config", str(config)])
        assert result.exit_code == 0, result.output

    def test_toml_config_without_tomllib(self, runner, dataset, tmp_path, monkeypatch):
        monkeypatch.setattr("app.cli.tomllib", None)
        config = tmp_path / "run.toml"
        config.write_text("k = 2\n", encoding="utf-8")
        result = runner.invoke(main, ["run", str(dataset), "--config", str(config)])
        assert result.exit_code == 1
        assert "use a .json config" in result.output

    def test_invalid_spec(self, runner, dataset):
        result = runner.invoke(main, [
            "run", str(dataset), "--format", "snapshots", "--p", "6", "--T", "5",
            "--lam", "0.2", "--k", "2", "--method", "oracle",
        ])
        assert result.exit_code == 1
        assert "Error" in result.output

    def test_incompatible_spec(self, runner, dataset):
        result = runner.invoke(main, [
            "run", str(dataset), "--format", "snapshots", "--p", "6", "--lam", "0.2",
            "--k", "40", "--method", "oracle", *FAST,
        ])
        assert result.exit_code == 1
        assert "k=40" in result.output


class TestSweep:
    """sweep command"""

    def test_sweep_writes_results(self, runner, dataset, tmp_path):
        out = tmp_path / "results"
        result = runner.invoke(main, [
            "--workers", "1", "sweep", str(dataset), "--format", "snapshots", "--p", "6", "--lam", "0.2",
            "--k", "1", "--k", "3", "--method", "oracle", "--method", "static-mem",
            "--out", str(out), *FAST,
        ])
        assert result.exit_code == 0, result.output
        assert "4 of 4 specs succeeded" in result.output
        table = pd.read_csv(out / "results.csv")
        assert len(table) == 4
        assert (out / "results.json").is_file()

    def test_failed_spec_gives_nonzero_exit(self, runner, dataset, tmp_path):
        result = runner.invoke(main, [
            "sweep", str(dataset), "--format", "snapshots", "--p", "6", "--lam", "0.2",
            "--k", "1", "--k", "40", "--method", "static-last", "--out", str(tmp_path), *FAST,
        ])
        assert result.exit_code == 1
        assert "1 of 2 specs succeeded" in result.output
        table = pd.read_csv(tmp_path / "results.csv", keep_default_na=False)
        assert (table["error"] != "").sum() == 1
