import json

import pytest
from click.testing import CliRunner

from spothull.cli import main
from spothull.model import serialize_dataset
from spothull.synthetic import four_blob_dataset


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def csv_file(tmp_path):
    ds, _ = four_blob_dataset(rows=8, cols=8, seed=3)
    p = tmp_path / "data.csv"
    p.write_text(serialize_dataset(ds, "csv"))
    return p


def test_run_writes_artifacts(runner, csv_file, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(
        main, ["run", "--input", str(csv_file), "--k", "3", "--seed", "1", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    assert "wrote 5 artifacts" in result.output
    assert (out / "overlay.svg").is_file()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["k"] == 3 and summary["config"]["seed"] == 1


def test_run_missing_input_fails_cleanly(runner, tmp_path):
    result = runner.invoke(main, ["run", "--input", str(tmp_path / "nope.csv")])
    assert result.exit_code != 0


def test_run_reports_stage_on_failure(runner, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    result = runner.invoke(main, ["run", "--input", str(bad), "--out", str(tmp_path / "o")])
    assert result.exit_code == 1
    assert "parse" in result.output


def test_run_with_config_file_and_override(runner, csv_file, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"schema": "spothull-config/1", "k": 2, "seed": 9}))
    out = tmp_path / "out"
    result = runner.invoke(
        main,
        ["run", "--input", str(csv_file), "--config", str(cfg), "--k", "3", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["k"] == 3  # flag beat the file
    assert summary["config"]["seed"] == 9  # file value survived


def test_run_without_any_input_is_an_error(runner):
    result = runner.invoke(main, ["run"])
    assert result.exit_code == 1
    assert "input" in result.output


def test_validate_accepts_clean_file(runner, csv_file):
    result = runner.invoke(main, ["validate", "--input", str(csv_file)])
    assert result.exit_code == 0
    assert "0 rejected" in result.output


def test_validate_flags_bad_rows(runner, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("spot_id,x,y,A,B\nok,0,0,0.5,0.5\nneg,1,1,-1,2\n")
    result = runner.invoke(main, ["validate", "--input", str(p)])
    assert result.exit_code == 1
    assert "neg" in result.output and "1 rejected" in result.output


def test_serve_rejects_malformed_bind(runner, tmp_path):
    result = runner.invoke(main, ["serve", "--artifacts", str(tmp_path), "--bind", "nonsense"])
    assert result.exit_code == 1
    assert "host:port" in result.output


def test_serve_rejects_empty_artifact_dir(runner, tmp_path):
    result = runner.invoke(
        main, ["serve", "--artifacts", str(tmp_path), "--bind", "127.0.0.1:0"]
    )
    assert result.exit_code == 1
    assert "missing" in result.output


def test_help_lists_subcommands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("run", "serve", "validate"):
        assert cmd in result.output
