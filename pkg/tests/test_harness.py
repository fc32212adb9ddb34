"""Tests for the experiment runner, emission, and CLI."""

import json

import pytest

from vtsearch.cli import main
from vtsearch.harness import ExperimentConfig, ResultSet, emit, run_experiment

SMALL = dict(n_list=(4,), t_list=(2,), z_list=(2,), num_seeds=2)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(kind="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(kind="full-suite", regimes=("x",))
    with pytest.raises(ValueError):
        ExperimentConfig(kind="full-suite", num_seeds=0)


def test_config_digest_ignores_emission_details():
    a = ExperimentConfig(kind="bounds-compare", output_dir="/tmp/a", **SMALL)
    b = ExperimentConfig(kind="bounds-compare", output_dir="/tmp/b",
                         formats=("csv",), **SMALL)
    assert a.digest() == b.digest()
    c = ExperimentConfig(kind="bounds-compare", seed=1, **SMALL)
    assert c.digest() != a.digest()


@pytest.mark.parametrize("kind,expected_records", [
    ("grover-weights", 1),
    ("simple-loop", 2),       # marked and unmarked at N=4
    ("bounds-compare", 2),    # one per seed
])
def test_experiment_kinds_pass(kind, expected_records):
    results = run_experiment(ExperimentConfig(kind=kind, **SMALL))
    assert results.passed
    assert len(results.records) == expected_records


def test_general_loop_records_include_verdicts():
    results = run_experiment(ExperimentConfig(
        kind="general-loop", n_list=(2,), t_list=(2,), z_list=(2,),
        num_seeds=2))
    assert results.passed
    # dim 504 instances admit full decisions
    assert all(r["payload"]["verdicts"] == {"marked": "positive",
                                            "empty": "negative"}
               for r in results.records)
    assert len(results.records) == 2 * 5  # seeds x regimes


def test_full_suite_collects_all_kinds():
    results = run_experiment(ExperimentConfig(kind="full-suite", **SMALL))
    kinds = {r["experiment"] for r in results.records}
    assert kinds == {"grover-weights", "simple-loop", "general-loop",
                     "bounds-compare"}
    assert results.passed


def test_emit_layout_and_round_trip(tmp_path):
    results = run_experiment(ExperimentConfig(kind="bounds-compare", **SMALL))
    emit(results, "json", tmp_path)
    emit(results, "csv", tmp_path)
    assert (tmp_path / "config.echo").exists()
    assert (tmp_path / "summary.json").exists()
    tables = list((tmp_path / "tables").glob("*.csv"))
    assert len(tables) == 1
    lines = (tmp_path / "records.jsonl").read_text().splitlines()
    assert len(lines) == len(results.records)
    for line, record in zip(lines, results.records):
        parsed = json.loads(line)
        assert parsed == json.loads(json.dumps(record))
        assert "wall_time" not in line  # timing lives in summary.json only
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["passed"] and summary["record_count"] == len(lines)
    assert summary["wall_time_s"] >= 0.0


def test_emit_rejects_bad_input(tmp_path):
    empty = ResultSet(config=ExperimentConfig(kind="bounds-compare", **SMALL))
    with pytest.raises(ValueError):
        emit(empty, "json", tmp_path)
    results = run_experiment(ExperimentConfig(kind="bounds-compare", **SMALL))
    with pytest.raises(ValueError):
        emit(results, "xml", tmp_path)


def test_records_byte_identical_across_runs(tmp_path):
    for sub in ("one", "two"):
        cfg = ExperimentConfig(kind="full-suite",
                               output_dir=str(tmp_path / sub), **SMALL)
        run_experiment(cfg)
    a = (tmp_path / "one" / "records.jsonl").read_bytes()
    b = (tmp_path / "two" / "records.jsonl").read_bytes()
    assert a == b and len(a) > 0


def test_float_encoding_round_trips(tmp_path):
    cfg = ExperimentConfig(kind="bounds-compare",
                           output_dir=str(tmp_path), **SMALL)
    results = run_experiment(cfg)
    lines = (tmp_path / "records.jsonl").read_text().splitlines()
    for line, record in zip(lines, results.records):
        parsed = json.loads(line)
        assert parsed["payload"]["l2"] == record["payload"]["l2"]  # exact


def test_cli_exit_codes_and_output(tmp_path, capsys):
    code = main(["bounds", "--n", "4", "--num-seeds", "2",
                 "--out", str(tmp_path), "--format", "json", "csv"])
    assert code == 0
    out = capsys.readouterr().out
    summary = json.loads(out.splitlines()[-1])
    assert summary["passed"] and summary["kind"] == "bounds-compare"
    assert (tmp_path / "records.jsonl").exists()
    assert (tmp_path / "tables" / "bounds-compare.csv").exists()


def test_cli_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["not-a-command"])
