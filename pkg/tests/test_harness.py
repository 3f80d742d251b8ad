import json
from fractions import Fraction

import pytest

from tiler import cli, harness
from tiler.harness import ConfigError, PipelineError, Row


def _yaml(tmp_path, text):
    p = tmp_path / "run.yaml"
    p.write_text(text)
    return p


def test_load_config_with_overrides(tmp_path):
    p = _yaml(tmp_path, "pipeline: multipack\ngraph: {family: cycle, n: 20}\nparams: {n: 2}\nseed: 5\n")
    cfg = harness.load_config(p, seed=9, out="x")
    assert cfg.seed == 9 and cfg.out == "x" and cfg.params == {"n": 2}


@pytest.mark.parametrize(
    "text,overrides,needle",
    [
        ("graph: {family: cycle, n: 5}\n", {"pipeline": "spin"}, "unknown pipeline"),
        ("graph: {family: cycle, n: 5}\n", {"pipeline": "quasitile"}, "epsilon0"),
        ("graph: {family: cycle, n: 5}\nparams: {n: 2}\n", {"pipeline": "multipack"}, "seed"),
        ("pipeline: cfw\ngraph: {family: cycle, n: 5}\n", {"pipeline": "multipack"}, "cfw"),
        ("colour: red\n", {"pipeline": "oracle-suite"}, "unknown config keys"),
        ("params: {r: 1}\n", {"pipeline": "validate-witness"}, "graph spec"),
        ("[1, 2\n", {"pipeline": "oracle-suite"}, "cannot read"),
    ],
)
def test_config_errors(tmp_path, text, overrides, needle):
    with pytest.raises(ConfigError, match=needle):
        harness.load_config(_yaml(tmp_path, text), **overrides)


def test_row_serialization():
    assert Row("a", Fraction(2, 101)).serialize()["exact"] == "2/101"
    assert Row("a", Fraction(2, 101)).serialize()["decimal"] == "0.019801980198"
    assert Row("b", 3).serialize()["exact"] == "3/1"
    assert Row("c", 0.5).serialize()["exact"] == ""
    rep = harness.RunReport({})
    with pytest.raises(ValueError):
        rep.add("unanchored", 1, True)


def test_validate_witness_row():
    rep = harness.run_pipeline({"pipeline": "validate-witness", "graph": {"family": "cycle", "n": 1000}, "params": {"r": 50}})
    row = next(r for r in rep.rows if r.metric == "max_neighbor_l1")
    assert row.value == Fraction(2, 101) and row.passed and rep.passed


def test_trivial_pipelines_pass():
    q = harness.run_pipeline({"pipeline": "quasitile", "graph": {"family": "empty", "n": 0}, "params": {"epsilon0": "1/2"}})
    assert q.passed and q.artifacts["packing.txt"] == "packing k=0\n"
    c = harness.run_pipeline({"pipeline": "cfw", "graph": {"family": "cycle", "n": 10}, "params": {"J_max": 0}, "seed": 1})
    assert c.passed
    o = harness.run_pipeline({"pipeline": "oracle-suite", "params": {"select": []}})
    assert o.passed and all(r.passed is None for r in o.rows)


def test_reports_are_byte_identical(tmp_path):
    cfg = {"pipeline": "multipack", "graph": {"family": "cycle", "n": 30}, "params": {"n": 2, "samples": 300, "epsilon": "9/10"}, "seed": 7}
    a = harness.run(cfg, tmp_path / "a")
    harness.run(cfg, tmp_path / "b")
    for name in ["report.json", "report.csv", *a.artifacts]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert "wall_clock_seconds" in json.loads((tmp_path / "a" / "timing.json").read_text())


def test_randomized_report_carries_trials_and_sigma():
    rep = harness.run_pipeline({"pipeline": "multipack", "graph": {"family": "cycle", "n": 30}, "params": {"n": 2, "samples": 200}, "seed": 1})
    assert next(r.value for r in rep.rows if r.metric == "samples") == 200
    assert rep.artifacts["split.csv"].splitlines()[0] == "x,y,exact,exact_decimal,frequency,sigma,within_3sigma"


def test_rank_partition_and_cfw_rows():
    rp = harness.run_pipeline({"pipeline": "rank-partition", "graph": {"family": "cycle", "n": 40}, "params": {"r": 6, "epsilon": "1/3", "trials": 500}, "seed": 3})
    assert any("chi-square" in r.metric for r in rp.rows)
    c = harness.run_pipeline({"pipeline": "cfw", "graph": {"family": "cycle", "n": 40}, "params": {"J_max": 2, "split_trials": 20}, "seed": 3})
    assert any(r.metric.startswith("max split frequency level") for r in c.rows)
    assert "schedule.csv" in c.artifacts


def test_pipeline_errors_name_module():
    with pytest.raises(PipelineError, match="^witness:"):
        harness.run_pipeline({"pipeline": "validate-witness", "graph": {"family": "cycle", "n": 5}, "params": {"r": 1, "witness_file": "/nonexistent"}})
    with pytest.raises(PipelineError, match="^graph:"):
        harness.run_pipeline({"pipeline": "validate-witness", "graph": {"family": "moebius"}, "params": {"r": 1}})
    with pytest.raises(PipelineError, match="^oracles:"):
        harness.run_pipeline({"pipeline": "oracle-suite", "params": {"select": ["no such oracle"]}})


def test_cli_exit_codes(tmp_path, capsys):
    ok = _yaml(tmp_path, "graph: {family: cycle, n: 1000}\nparams: {r: 50, expect_l1: 2/101}\n")
    assert cli.main(["validate-witness", "--config", str(ok), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "report.json").exists() and (tmp_path / "o" / "witness.txt").exists()
    bad = _yaml(tmp_path, "graph: {family: cycle, n: 20}\nparams: {r: 1, n: 100}\n")
    assert cli.main(["validate-witness", "--config", str(bad), "--out", str(tmp_path / "f")]) == 1
    assert cli.main(["multipack", "--config", str(bad)]) == 2
    missing = _yaml(tmp_path, "graph: {family: cycle, n: 5}\nparams: {r: 1, witness_file: /nonexistent}\n")
    assert cli.main(["validate-witness", "--config", str(missing), "--out", str(tmp_path / "m")]) == 3
    out = capsys.readouterr().out
    assert "PASS  max_neighbor_l1 = 2/101" in out and "FAIL" in out
