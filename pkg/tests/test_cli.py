import json
import subprocess
import sys

import pytest

from ybmaps.catalog import Registry
from ybmaps.cli import main


def run(argv, capsys, registry=None):
    code = main(argv, registry)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    assert "adler-yamilov dim=4 params=2 lax=yes poisson=yes" in out
    assert len(out.splitlines()) == 10


def test_list_json(capsys):
    code, out, _ = run(["list", "--format", "json"], capsys)
    rows = json.loads(out)
    assert code == 0 and [r["name"] for r in rows][:2] == ["adler", "nls6"]
    assert rows[2]["dim"] == 4 and rows[2]["poisson"] is True


def test_list_empty_registry(capsys):
    code, out, _ = run(["list"], capsys, Registry())
    assert code == 0 and out == ""


def test_eval_examples(capsys):
    code, out, _ = run(["eval", "adler-yamilov", "--x", "1,0", "--y", "0,0", "--a", "2", "--b", "1"], capsys)
    assert (code, out) == (0, "u = (-1, 0); v = (1, 0)\n")
    code, out, _ = run(["eval", "--map", "dnls4", "--x", "1,1", "--y", "1,1", "--a", "2", "--b", "3"], capsys)
    assert (code, out) == (0, "u = (0, 1/2); v = (2, 3/2)\n")


def test_eval_six_dimensional(capsys):
    code, out, _ = run(["eval", "dnls6-reparam", "--x", "1,1", "--y", "1,1", "--X", "3", "--Y", "4"], capsys)
    assert out == "u = (0, 1/2); v = (2, 3/2); U = 2; V = 6\n"


def test_eval_json(capsys):
    code, out, _ = run(["eval", "dnls4", "--x", "1,1", "--y", "1,1", "--a", "2", "--b", "3",
                        "--format", "json"], capsys)
    assert json.loads(out) == {"u": ["0", "1/2"], "v": ["2", "3/2"]}


def test_eval_singular(capsys):
    code, _, err = run(["eval", "adler-yamilov", "--x", "1,0", "--y", "0,-1", "--a", "2", "--b", "1"], capsys)
    assert code == 1 and "singular locus: 1+x1*y2 = 0" in err


@pytest.mark.parametrize("argv", [
    ["eval", "adler-yamilov", "--x", "1,zero", "--y", "0,0", "--a", "2", "--b", "1"],
    ["eval", "adler-yamilov", "--x", "1/0,0", "--y", "0,0", "--a", "2", "--b", "1"],
    ["eval", "adler-yamilov", "--x", "1,0,3", "--y", "0,0", "--a", "2", "--b", "1"],
    ["eval", "adler-yamilov", "--x", "1,0", "--y", "0,0"],
    ["eval", "nls6", "--x", "1,0", "--y", "0,0"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_decimal_literals_are_exact(capsys):
    code, out, _ = run(["eval", "dnls4", "--x", "0.1,0", "--y", "0,0", "--a", "2", "--b", "1"], capsys)
    assert out == "u = (1/20, 0); v = (1/20, 0)\n"


def test_eval_float_mode(capsys):
    code, out, _ = run(["eval", "adler-yamilov", "--float", "--x", "0.5,0", "--y", "0,0", "--a", "2", "--b", "1"], capsys)
    assert code == 0 and out == "u = (-0.5, 0.0); v = (0.5, 0.0)\n"


def test_eval_implicit(capsys):
    code, out, _ = run(["eval", "dihedral4-implicit", "--x", "0,0", "--y", "0,0", "--a", "2.5",
                        "--b", "3", "--branch", "minus"], capsys)
    assert code == 0 and out == "u = (0.0, 0.0); v = (0.0, 0.0)\n"


def test_verify_examples(capsys):
    code, out, _ = run(["verify", "adler-yamilov", "--trials", "100", "--seed", "7"], capsys)
    assert code == 0 and ": fail" not in out
    code, _, _ = run(["verify", "dihedral6", "--checks", "yb,invariants", "--trials", "50"], capsys)
    assert code == 0
    code, _, err = run(["verify", "unknown-map"], capsys)
    assert code == 2
    assert run(["verify", "adler", "--checks", "yb,nope"], capsys)[0] == 2
    assert run(["verify", "adler", "--trials", "0"], capsys)[0] == 2


def test_verify_json_has_context(capsys):
    code, out, _ = run(["verify", "dnls4", "--checks", "yb,casimir", "--trials", "20",
                        "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["vector_nls_sign"]["resolved"] == "adler-yamilov"
    assert [p["pairing"] for p in doc["leaf_pairings"]] == ["ab", "ab"]
    assert [c["name"] for c in doc["maps"][0]["checks"]] == ["yb", "casimir"]


def test_verify_implicit(capsys):
    code, out, _ = run(["verify", "dnls4-implicit", "--trials", "50"], capsys)
    assert code == 0 and "pass" in out


def test_orbit_csv(capsys, tmp_path):
    path = tmp_path / "orbit.csv"
    code, _, _ = run(["orbit", "dnls4", "--x", "1/3,1/5", "--y", "1/7,1/2", "--a", "2", "--b", "1",
                      "--float", "--steps", "50", "--out", str(path)], capsys)
    lines = path.read_text().splitlines()
    assert code == 0 and len(lines) == 52
    assert lines[0] == "step,x1,x2,y1,y2,I1,I2,C1,C2,drift_I1,drift_I2,drift_C1,drift_C2"


def test_orbit_exact_and_precision(capsys):
    code, out, _ = run(["orbit", "adler-yamilov", "--x", "1/3,1/5", "--y", "1/7,1/2", "--a", "2",
                        "--b", "1", "--steps", "20", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["arithmetic"] == "exact" and set(doc["max_drift"].values()) == {"0"}
    code, out, _ = run(["orbit", "adler-yamilov", "--x", "1/3,1/5", "--y", "1/7,1/2", "--a", "2",
                        "--b", "1", "--steps", "200", "--precision", "30", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["arithmetic"] == "mp"


def test_orbit_singular_start(capsys):
    code, _, err = run(["orbit", "adler-yamilov", "--x", "1,0", "--y", "0,-1", "--a", "2", "--b", "1",
                        "--float", "--steps", "3"], capsys)
    assert code == 1 and "aborted" in err


def test_report_deterministic(capsys, tmp_path):
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run(["report", "--all", "--trials", "10", "--seed", "7", "--out", str(p1)], capsys)[0] == 0
    assert run(["report", "--all", "--trials", "10", "--seed", "7", "--out", str(p2)], capsys)[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    doc = json.loads(p1.read_text())
    assert {"version", "seed", "trials", "maps"} <= set(doc)
    assert len(doc["maps"]) == 10
    for m in doc["maps"]:
        for c in m["checks"]:
            assert {"name", "trials", "failures", "status"} <= set(c)
            if c["status"] == "skipped":
                assert c["reason"]


def test_report_unwritable(capsys, tmp_path):
    code, _, err = run(["report", "--trials", "2", "--out", str(tmp_path / "missing" / "r.json")], capsys)
    assert code == 1 and "error" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ybmaps", "eval", "adler-yamilov", "--x", "1,0",
                           "--y", "0,0", "--a", "2", "--b", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "u = (-1, 0); v = (1, 0)\n"
