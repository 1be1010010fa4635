import csv
import io
import json
from pathlib import Path

import pytest

from ivopt.cli import main
from ivopt.problems import ALL

ROOT = Path(__file__).resolve().parents[1] / "problems"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in ALL.items():
        p = tmp_path / f"{name}.ivp"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_parse_prints_canonical(files):
    code, text = run("parse", files["fj_counterexample"])
    assert code == 0 and text.splitlines()[1] == "min [1,2]*y^2 + [0,2]*y + [2,5]"


def test_eval(files):
    code, text = run("eval", files["fj_counterexample"], "--at", "-1")
    assert code == 0 and text == "T = [1,7]\ng1 = -2\n"
    code, text = run("eval", files["fj_counterexample"], "--at", "-1", "--json")
    assert json.loads(text) == {"objective": [1.0, 7.0], "constraints": [-2.0]}


def test_check_exit_codes(files):
    assert run("check", "fj", files["fj_counterexample"], "--at", "0")[0] == 1
    assert run("check", "fermat", files["fj_counterexample"], "--at", "0")[0] == 1
    assert run("check", "kkt", files["kkt_positive"], "--at", "1")[0] == 0
    assert run("check", "fj", files["kkt_positive"], "--at", "1")[0] == 0
    assert run("check", "kkt", files["slater_fails"], "--at", "0")[0] == 2
    assert run("check", "composite", files["composite_convex"], "--at", "0")[0] == 0
    assert run("check", "composite", files["composite_cubic"], "--at", "0")[0] == 0


def test_check_json(files):
    code, text = run("check", "fj", files["fj_counterexample"], "--at", "0", "--json")
    rep = json.loads(text)
    assert rep["verdict"] == "fails" and rep["residual"] > 0.05
    code, text = run("check", "kkt", files["kkt_positive"], "--at", "1", "--json")
    rep = json.loads(text)
    assert rep["certificate"] == {"delta0": 1.0, "delta": [0.0]}


def test_efficiency(files):
    code, text = run("efficiency", files["fj_counterexample"], "--at", "0", "--grid", "201")
    assert code == 1
    assert "efficient: holds" in text and "weak_efficient: fails" in text
    code, text = run("efficiency", files["kkt_positive"], "--at", "1", "--grid", "401", "--json")
    assert code == 0 and json.loads(text)["weak_efficient"]["verdict"] == "holds"


def test_efficiency_parallel_output_identical(files):
    a = run("efficiency", files["fj_counterexample"], "--at", "-1.5", "--grid", "201")
    b = run("efficiency", files["fj_counterexample"], "--at", "-1.5", "--grid", "201", "--jobs", "2")
    assert a == b


def test_sweep(files, tmp_path):
    out = tmp_path / "t.csv"
    assert run("sweep", files["fj_counterexample"], "--grid", "3", "--out", str(out))[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows == [["y", "t_lower", "t_upper"], ["-2", "2", "13"], ["-1", "1", "7"], ["0", "2", "5"]]
    code, text = run("sweep", files["composite_cubic"], "--grid", "3", "--over=-1,1")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["y", "t_lower", "t_upper", "obj_lower", "obj_upper"]
    assert rows[1] == ["-1", "-3", "-1", "0", "2"]


def test_usage_and_parse_errors(files, tmp_path):
    assert run("bogus")[0] == 64
    assert run("check", "fj", files["fj_counterexample"])[0] == 64
    assert run("eval", files["fj_counterexample"], "--at", "1,2")[0] == 64
    assert run("check", "composite", files["fj_counterexample"], "--at", "0")[0] == 64
    assert run("parse", str(tmp_path / "missing.ivp"))[0] == 64
    bad = tmp_path / "bad.ivp"
    bad.write_text("var y in [2,1]\nmin y\n")
    assert run("parse", str(bad))[0] == 65
    bad.write_text("min y\n")
    assert run("parse", str(bad))[0] == 65


def test_shipped_problem_files_parse():
    for p in ROOT.glob("*.ivp"):
        assert run("parse", str(p))[0] == 0
