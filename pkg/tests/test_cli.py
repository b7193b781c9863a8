"""Command-line layer: exit codes, report determinism, problem ingestion."""

import json
import os

import pytest

from detsing.cli import (EXIT_BUDGET, EXIT_OK, EXIT_PARSE, builtin_problem,
                         load_problem, main, toy_problem)


def run(tmp_path, *argv):
    out = str(tmp_path)
    return main(["--out", out] + list(argv)), out


def test_classify_toy_report(tmp_path):
    code, out = run(tmp_path, "classify", "--builtin", "toy")
    assert code == EXIT_OK
    path = os.path.join(out, "classify.json")
    assert os.path.exists(path)
    assert os.path.exists(path + ".meta.json")
    doc = json.load(open(path))
    assert doc["problem"] == "toy"
    assert doc["squarefree"]
    assert doc["run_config"]["seed"] == 0
    assert "version" in doc["run_config"]
    meta = json.load(open(path + ".meta.json"))
    assert set(meta) == {"report", "started", "finished"}


def test_classify_reports_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert run(a, "classify", "--builtin", "toy")[0] == EXIT_OK
    assert run(b, "classify", "--builtin", "toy")[0] == EXIT_OK
    ra = open(a / "classify.json", "rb").read()
    rb = open(b / "classify.json", "rb").read()
    assert ra == rb
    # the sidecars carry the wall-clock data and may differ
    assert b"started" not in ra


def test_classify_budget_exhausted(tmp_path):
    code, out = run(tmp_path, "--budget-steps", "3", "classify",
                    "--builtin", "water")
    assert code == EXIT_BUDGET
    doc = json.load(open(os.path.join(out, "classify.json")))
    assert doc["status"] == "budget-exhausted"


def test_classify_needs_problem(tmp_path):
    assert run(tmp_path, "classify")[0] == EXIT_PARSE


def test_unknown_builtin(tmp_path):
    assert run(tmp_path, "classify", "--builtin", "nope")[0] == EXIT_PARSE


def test_load_problem_roundtrip(tmp_path):
    doc = {"k": 2, "r0": 1,
           "vars": ["x1", "x2", "x3", "x4"], "params": ["G1"],
           "matrix": [["x1", "x2"], ["x3", "x4 - G1"]],
           "constraints": ["x1^2 + x2^2 + x3^2 + x4^2 - 1"]}
    p = tmp_path / "prob.json"
    p.write_text(json.dumps(doc))
    prob = load_problem(str(p))
    assert prob.k == 2 and prob.r0 == 1
    code, out = run(tmp_path, "classify", "--problem", str(p))
    assert code == EXIT_OK
    rep = json.load(open(os.path.join(out, "classify.json")))
    assert rep["problem"] == "prob.json"


def test_load_problem_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(tmp_path, "classify", "--problem", str(bad))[0] == EXIT_PARSE
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"k": 2, "r0": 1, "vars": [], "params": []}))
    assert run(tmp_path, "classify", "--problem", str(missing))[0] == EXIT_PARSE
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"k": 3, "r0": 1,
                                 "vars": ["x1", "x2", "x3", "x4"],
                                 "params": ["G1"],
                                 "matrix": [["x1", "x2"], ["x3", "x4"]]}))
    assert run(tmp_path, "classify", "--problem", str(wrong))[0] == EXIT_PARSE


def test_count_water_point(tmp_path, capsys):
    code, out = run(tmp_path, "count", "--g2", "1/2", "--G2", "2")
    assert code == EXIT_OK
    line = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert line["count_in_B"] == 1
    assert not line["degenerate"]
    doc = json.load(open(os.path.join(out, "count.json")))
    assert doc["count_in_B"] == 1
    assert doc["point"] == {"g2": "1/2", "G2": "2"}


def test_count_needs_values(tmp_path):
    assert run(tmp_path, "count", "--g2", "1")[0] == EXIT_PARSE
    assert run(tmp_path, "count", "--g2", "x", "--G2", "2")[0] == EXIT_PARSE


def test_samples_needs_classify_report(tmp_path):
    assert run(tmp_path, "samples")[0] == EXIT_PARSE


def test_verify_matrix_and_f_table(tmp_path, capsys):
    code, out = run(tmp_path, "verify", "matrix")
    assert code == EXIT_OK
    doc = json.load(open(os.path.join(out, "verify_matrix.json")))
    assert doc["ok"] and doc["checks"]["matrix_entrywise"] is True
    code, out = run(tmp_path, "verify", "f-table")
    assert code == EXIT_OK
    doc = json.load(open(os.path.join(out, "verify_f_table.json")))
    assert doc["ok"]
    assert all(doc["checks"]["f%d" % i] is True for i in range(1, 10))


def test_verify_products_needs_report(tmp_path):
    assert run(tmp_path, "verify", "products")[0] == EXIT_PARSE


def test_oracle_toy(tmp_path, capsys):
    code, out = run(tmp_path, "oracle")
    assert code == EXIT_OK
    doc = json.load(open(os.path.join(out, "oracle.json")))
    assert doc["agree"] is True
    assert len(doc["grid"]) == 20
    counts = {row["count_in_B"] for row in doc["grid"]}
    assert counts == {0, 1}
