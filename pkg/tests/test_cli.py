import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from dbbel.cli import run

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", ["ellsberg", "ellsberg-variant", "levesque", "hierarchy"])
def test_demo_json_matches_golden(name):
    code, out, _ = call("demo", name)
    assert code == 0
    assert out == (GOLDEN / f"demo_{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", ["ellsberg", "ellsberg-variant"])
def test_demo_csv_matches_golden(name):
    code, out, _ = call("demo", name, "--format", "csv")
    assert code == 0
    assert out == (GOLDEN / f"demo_{name}.csv").read_text(encoding="utf-8")


def test_ellsberg_demo_values():
    _, out, _ = call("demo", "ellsberg", "--format", "csv")
    rows = {(r.split(",")[0], r.split(",")[1]): r.split(",")[2] for r in out.splitlines()[1:]}
    assert rows[("0", "Y | G")] == "2/3" and rows[("0", "R")] == "1/3"
    assert rows[("0", "Y")] == rows[("0", "G")] == "0/1"
    assert rows[("1", "Y")] == rows[("1", "G")] == rows[("1", "R")] == "1/3"


def test_prove0():
    code, out, err = call("prove0", "--premises", "p&q", "--goal", "p", "--trace")
    data = json.loads(out)
    assert code == 0 and data["derivable"] is True
    assert [s["rule"] for s in data["trace"]] == ["premise", "∧E1"]
    assert "∧E1" in err
    code, out, _ = call("prove0", "--premises", "*", "--goal", "p | !p")
    assert json.loads(out)["derivable"] is False and json.loads(out)["trace"] is None


def test_provek_and_search():
    code, out, _ = call("provek", "--k", "1", "--premises", "*", "--goal", "p|!p")
    assert code == 0 and json.loads(out)["derivable"] is True
    code, out, _ = call("provek", "--k", "3", "--search", "--premises", "l_ja & l_ag & m_j & !m_g",
                        "--goal", "l_ja & m_j & !m_a | l_ag & m_a & !m_g", "--trace")
    data = json.loads(out)
    assert data["least_k"] == 1 and data["witness"]["nodes"][1]["branch"] == "m_a"


def test_premises_file_and_comma_lists(tmp_path):
    f = tmp_path / "prem.txt"
    f.write_text("# background\n!p\n\np | q  # disjunction\n", encoding="utf-8")
    code, out, _ = call("prove0", "--premises-file", str(f), "--goal", "q")
    assert code == 0 and json.loads(out)["derivable"] is True
    code, out, _ = call("prove0", "--premises", "!p, p | q", "--goal", "q")
    assert json.loads(out)["derivable"] is True


def test_implication_desugaring_switch():
    code, _, err = call("prove0", "--premises", "p, p -> q", "--goal", "q")
    assert code == 1 and "offset" in err
    code, out, _ = call("--desugar-implication", "prove0", "--premises", "p, p -> q", "--goal", "q")
    assert code == 0 and json.loads(out)["derivable"] is True


def test_belief_command_roundtrip(tmp_path):
    _, out, _ = call("demo", "ellsberg")
    stage = json.loads(out)["stages"][1]
    (tmp_path / "f.json").write_text(json.dumps(stage["forest"]), encoding="utf-8")
    (tmp_path / "m.json").write_text(json.dumps({"mass": stage["mass"]}), encoding="utf-8")
    code, out, _ = call("belief", "--forest", str(tmp_path / "f.json"), "--mass", str(tmp_path / "m.json"),
                        "--query", "Y", "--query", "!Y")
    data = json.loads(out)
    assert code == 0 and data["results"][0]["belief"] == "1/3" and data["results"][1]["belief"] == "2/3"
    code, out, _ = call("belief", "--forest", str(tmp_path / "f.json"), "--mass", str(tmp_path / "m.json"),
                        "--query", "Y", "--format", "csv")
    assert out == "k,query,belief,plausibility\n1,Y,1/3,1/3\n"


def test_gensat_and_binf(tmp_path):
    prob = {"depth": 1, "raw_constraints": [
        {"terms": [["1", "p"]], "rel": ">=", "bound": "1/2"},
        {"terms": [["1", "q"]], "rel": ">=", "bound": "2/3"}]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(prob), encoding="utf-8")
    code, out, err = call("gensat", "--problem", str(path))
    assert code == 0 and json.loads(out)["status"] == "SAT" and err == ""
    code, out2, _ = call("--jobs", "2", "gensat", "--problem", str(path))
    assert out2 == out
    path.write_text(json.dumps({**prob, "depth": 0}), encoding="utf-8")
    code, out, _ = call("gensat", "--problem", str(path))
    assert code == 0 and json.loads(out)["status"] == "UNSAT"
    path.write_text(json.dumps({**prob, "depth": 0, "pl_rewrite": True}), encoding="utf-8")
    code, out, err = call("gensat", "--problem", str(path))
    assert json.loads(out)["status"] == "SAT" and "notice" in err
    path.write_text(json.dumps({"mode": "binf", "query": "p", "supp": ["p | q"], "constraints": []}),
                    encoding="utf-8")
    code, out, _ = call("binf", "--problem", str(path))
    data = json.loads(out)
    assert code == 0 and (data["lower"], data["upper"]) == ("0/1", "1/1")
    code, _, err = call("gensat", "--problem", str(path))
    assert code == 1


def test_exit_codes(tmp_path, monkeypatch):
    assert call()[0] == 1
    assert call("nonsense")[0] == 1
    assert call("prove0", "--goal")[0] == 1
    assert call("provek", "--k", "-1", "--goal", "p")[0] == 1
    assert call("prove0", "--premises", "p &", "--goal", "p")[0] == 1
    assert call("belief", "--forest", str(tmp_path / "missing.json"), "--mass", "x", "--query", "p")[0] == 1
    (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
    code, _, err = call("gensat", "--problem", str(tmp_path / "bad.json"))
    assert code == 1 and "line 1" in err
    (tmp_path / "big.json").write_text(json.dumps(
        {"depth": 2, "supp": ["p | q", "r | s"], "constraints": []}), encoding="utf-8")
    code, _, err = call("gensat", "--problem", str(tmp_path / "big.json"), "--max-forests", "10")
    assert code == 2 and "216" in err
    monkeypatch.setenv("DBBEL_BRUTE_FORCE_VARS", "1")
    code, _, err = call("gensat", "--problem", str(tmp_path / "big.json"))
    assert code == 2 and "oracle" in err
    assert call("demo", "levesque", "--format", "csv")[0] == 1


def test_rationals_are_never_floats():
    _, out, _ = call("demo", "hierarchy")

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dbbel", "demo", "levesque"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "demo_levesque.json").read_text(encoding="utf-8")
