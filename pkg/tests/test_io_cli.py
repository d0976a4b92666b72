import io
import json
import os
import pathlib

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.catalog import KINDS, random_spec, random_weights
from exactbase.cli import run
from exactbase.io import (FormatError, InstanceDocument, ResultDocument, parse_instance, serialize_instance,
                          spec_from_json, spec_to_json)
from exactbase.matroid import Linear, Uniform
from exactbase.reductions import ConstraintSpec

ROOT = pathlib.Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"

MINIMAL = '{"format_version": 1, "matroid": {"kind": "uniform", "n": 2, "rank": 1}, "weights": [[0, 1]], "target": [1]}'


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), err.getvalue()


def test_parse_minimal():
    doc = parse_instance(MINIMAL.encode())
    assert doc.matroid == Uniform(2, 1) and doc.weights == [[0, 1]] and doc.target == [1]


def test_wrong_row_length_names_row():
    text = MINIMAL.replace("[[0, 1]]", "[[0, 1], [1]]").replace("[1]}", "[1, 0]}")
    with pytest.raises(FormatError, match=r"weights\[1\]"):
        parse_instance(text)


def test_unknown_kind():
    with pytest.raises(FormatError, match="unknown matroid kind 'cyclic'"):
        parse_instance(MINIMAL.replace('"uniform"', '"cyclic"'))


def test_syntax_error_reports_line():
    with pytest.raises(FormatError) as info:
        parse_instance('{\n "format_version": 1,\n "matroid": oops\n}')
    assert info.value.line == 3


def test_weight_out_of_range():
    text = MINIMAL.replace('"target"', '"delta": 0, "target"')
    with pytest.raises(FormatError, match="outside"):
        parse_instance(text)


def test_floats_rejected():
    with pytest.raises(FormatError):
        parse_instance(MINIMAL.replace("[[0, 1]]", "[[0, 1.5]]"))


def test_rational_matrix_strings():
    spec = spec_from_json({"kind": "linear", "field": "rational", "matrix": [["1/2", "0"], [0, "-3"]]})
    assert spec_from_json(spec_to_json(spec)) == spec
    assert spec_to_json(spec)["matrix"][0][0] == "1/2"


def test_result_invariant():
    with pytest.raises(Exception):
        ResultDocument("found", None)
    with pytest.raises(Exception):
        ResultDocument("infeasible", [0])


@given(seed=seeds, n=st.integers(0, 10), k=st.integers(0, len(KINDS) - 1), m=st.integers(1, 2))
def test_round_trip(seed, n, k, m):
    rng = rng_for(seed)
    spec = random_spec(rng, n, KINDS[k])
    W = random_weights(rng, m, n, 2)
    cons = None
    if rng.random() < 0.5:
        cons = [ConstraintSpec("less_equal", W.rows[0], rng.randint(-3, 3)),
                ConstraintSpec("congruence", [rng.randrange(3) for _ in range(n)], 1, 3)]
    doc = InstanceDocument(spec, [list(r) for r in W.rows], [rng.randint(-3, 3) for _ in range(m)], cons,
                           {"origin": str(seed)})
    text = serialize_instance(doc)
    back = parse_instance(text.encode())
    assert back == doc
    assert serialize_instance(back) == text


def test_solve_exit_codes_and_brute_force_agreement():
    code, doc, _ = cli("solve", "--instance", str(INSTANCES / "k4_exact.json"), "--seed", "7")
    assert code == 0 and doc["status"] == "found" and doc["solver"] == "fpt" and doc["seed"] == 7
    code2, doc2, _ = cli("solve", "--instance", str(INSTANCES / "k4_exact.json"), "--brute-force")
    assert code2 == 0 and doc2["status"] == doc["status"] and doc2["solver"] == "brute_force"
    code, doc, _ = cli("solve", "--instance", str(INSTANCES / "k4_infeasible.json"))
    assert code == 2 and doc["status"] == "infeasible" and doc["basis"] is None


def test_solve_with_constraints():
    code, doc, _ = cli("solve", "--instance", str(INSTANCES / "budgeted.json"))
    assert code == 0
    w = [3, 1, 2, 0, 1, 2]
    parity = [1, 0, 1, 1, 0, 1]
    B = doc["basis"]
    assert len(B) == 3 and sum(w[e] for e in B) <= 3 and sum(parity[e] for e in B) % 2 == 1


def test_lp_vertex_cli():
    code, doc, _ = cli("lp-vertex", "--instance", str(INSTANCES / "uniform_lp.json"), "--method", "cuts")
    assert code == 0 and doc["status"] == "vertex"
    assert doc["details"]["point"] in (["0", "1", "0"], ["1/2", "0", "1/2"])


def test_intersect_cli():
    code, doc, _ = cli("intersect", "--instance", str(INSTANCES / "intersect_bipartite.json"), "--certify")
    assert code == 0 and doc["details"]["size"] == 3 == doc["details"]["bound"]


def test_algebraic_cli():
    code, doc, _ = cli("algebraic-solve", "--instance", str(INSTANCES / "triangle_linear.json"), "--beta", "2")
    assert code == 0 and doc["basis"] == [1, 2] and doc["solver"] == "linear_algebraic"
    code, doc, _ = cli("algebraic-solve", "--instance", str(INSTANCES / "triangle_linear.json"), "--beta", "0")
    assert code == 2


def test_reduce_cli():
    code, doc, _ = cli("reduce", "--instance", str(INSTANCES / "budgeted.json"))
    assert code == 0 and doc["status"] == "reduced"
    reduced = parse_instance(json.dumps(doc["instance"]))
    assert reduced.n == doc["paddings"][-1]["stop"]


def test_lab_cli():
    code, doc, _ = cli("lab", "lowerbound", "--kind", "proximity", "--n", "8")
    assert code == 0 and doc["bound_reports"][0]["observed"] == "6"
    code, doc, _ = cli("lab", "lowerbound", "--kind", "sensitivity", "--n", "3")
    assert code == 1
    code, doc, _ = cli("lab", "proximity", "--max-n", "6", "--weight-seeds", "1")
    assert code == 0 and doc["status"] == "pass"
    code, doc, _ = cli("lab", "sensitivity", "--max-n", "6")
    assert code == 0 and doc["stats"]["count"] > 0


@pytest.mark.parametrize("app, name", [("feedback-edge-set", "app_feedback.json"),
                                       ("closest-base", "app_closest.json"),
                                       ("fair-matching", "app_fair.json"),
                                       ("group-base", "app_group.json")])
def test_app_cli(app, name):
    code, doc, _ = cli("app", app, "--input", str(INSTANCES / name))
    assert code == 0 and doc["status"] == "found"
    code2, doc2, _ = cli("app", app, "--input", str(INSTANCES / name), "--brute-force")
    assert code2 == 0 and doc2["solver"] == "brute_force"


def test_usage_errors():
    assert cli()[0] == 1
    assert cli("frobnicate")[0] == 1
    assert cli("solve")[0] == 1
    assert cli("solve", "--instance", "/nonexistent.json")[0] == 1
    assert cli("solve", "--instance", str(INSTANCES / "k4_exact.json"), "--jobs", "0")[0] == 1


def test_spec_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(MINIMAL.replace('"uniform"', '"cyclic"'))
    code, doc, err = cli("solve", "--instance", str(bad))
    assert code == 1 and doc["status"] == "error" and "cyclic" in err


def test_alarm_exit_code(monkeypatch, tmp_path):
    import exactbase.cli as cli_mod
    from exactbase.solver import SolveReport

    monkeypatch.setattr(cli_mod, "solve", lambda *a, **k: SolveReport("found", frozenset({0, 1})))
    code, doc, _ = cli("solve", "--instance", str(INSTANCES / "k4_exact.json"))
    assert code == 3 and doc["details"]["error"] == "TheoremAlarm"


def test_byte_identical_across_jobs():
    outs = set()
    for jobs in ("1", "1", "4"):
        buf = io.StringIO()
        run(["solve", "--instance", str(INSTANCES / "budgeted.json"), "--seed", "3", "--jobs", jobs], out=buf)
        outs.add(buf.getvalue())
    assert len(outs) == 1


def test_module_entry_point():
    import subprocess
    import sys
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "exactbase", "lab", "lowerbound", "--kind", "sensitivity",
                           "--n", "4"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "pass"
