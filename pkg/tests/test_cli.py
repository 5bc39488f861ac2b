import json
import subprocess
import sys

import numpy as np
import pytest

from gauss_embed.cli import main
from gauss_embed.lie_algebra import CanonicalFrame, structure_tensor_of


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, code", [
    (["classify", "--family", "h3"], 10),
    (["classify", "--family", "r3-prime-alpha", "--alpha", "0", "--lambda", "1"], 0),
    (["classify", "--family", "simple", "--u", "0", "--v", "2"], 0),
    (["classify", "--family", "abelian"], 0),
    (["classify", "--family", "r3", "--lambda", "0.8"], 11),
    (["classify", "--family", "r3-alpha", "--alpha", "-0.5", "--lambda", "0.1"], 11),
    (["classify", "--family", "r3"], 2),
    (["classify", "--family", "nope"], 2),
    (["classify"], 2),
    (["classify", "--family", "simple", "--u", "1", "--v", "-1"], 2),
    (["bogus"], 2),
])
def test_classify_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_classify_h3_json(capsys):
    code, out, _ = run(capsys, "classify", "--family", "h3")
    assert '"S": -0.75' in out
    data = json.loads(out)
    assert data["verdict"]["status"] == "GAUSS_OBSTRUCTED"
    assert data["verdict"]["pipeline_agrees"] is True


def test_text_format(capsys):
    code, out, _ = run(capsys, "classify", "--family", "h3", "--format", "text")
    assert "verdict.status: GAUSS_OBSTRUCTED" in out.splitlines()


def test_curvature_canonical(capsys):
    code, out, _ = run(capsys, "curvature", "--canonical", "0,0.5,0,0,0")
    assert code == 0
    data = json.loads(out)
    assert data["R"]["1212"] == -0.75
    assert data["R"]["1313"] == 0.25
    assert data["dR"]["2"]["1223"] == -0.5


def test_curvature_negative_canonical_values(capsys):
    code, out, _ = run(capsys, "curvature", "--canonical", "-1,0.2,0,1,0")
    assert code == 0


def test_gauss_r3_lambda_one(capsys):
    code, out, _ = run(capsys, "gauss", "--family", "r3", "--lambda", "1")
    data = json.loads(out)
    assert code == 0
    assert data["status"] == "NO_SOLUTION"
    assert data["reason"] == "DEGENERATE_INCONSISTENT"


def test_gauss_direct_curvature(capsys):
    code, out, _ = run(capsys, "gauss", "--curvature", "0.25", "0.25", "0.25", "0", "0", "0")
    assert json.loads(out)["status"] == "UNIQUE_PAIR"
    assert run(capsys, "gauss", "--curvature", "1", "2")[0] == 2


def test_derived_r3(capsys):
    code, out, _ = run(capsys, "derived", "--family", "r3", "--lambda", "0.8")
    data = json.loads(out)
    assert code == 0
    assert data["solvable"] is False
    assert abs(data["closed_form"]["solvable_obstruction"] - 2.048) < 1e-12


def test_derived_when_gauss_fails(capsys):
    code, out, _ = run(capsys, "derived", "--family", "h3")
    data = json.loads(out)
    assert data["solvable"] is None and data["flags"] == ["GAUSS_UNSOLVABLE"]


def test_jacobi_violations_exit_4(capsys, tmp_path):
    assert run(capsys, "curvature", "--canonical", "1,0,0,0,1")[0] == 4
    c = np.zeros((3, 3, 3))
    c[1, 0, 1], c[1, 1, 0] = 1.0, -1.0
    c[0, 1, 2], c[0, 2, 1] = 1.0, -1.0
    path = tmp_path / "c.txt"
    path.write_text(" ".join(str(x) for x in c.ravel()))
    code, _, err = run(capsys, "curvature", "--structure", str(path))
    assert code == 4
    assert "Jacobi" in err


def test_structure_with_gram(capsys, tmp_path):
    c = structure_tensor_of(CanonicalFrame(0, 0.5, 0, 0, 0))
    # same algebra in the basis 2 e_1, e_2, e_3: brackets and Gram both change
    P = np.diag([2.0, 1.0, 1.0])
    c_old = np.einsum("mk,kab,ai,bj->mij", np.linalg.inv(P), c, P, P)
    cpath, gpath = tmp_path / "c.txt", tmp_path / "g.txt"
    cpath.write_text(" ".join(repr(float(x)) for x in c_old.ravel()))
    gpath.write_text(" ".join(repr(float(x)) for x in (P.T @ P).ravel()))
    code, out, _ = run(capsys, "curvature", "--structure", str(cpath), "--gram", str(gpath))
    assert code == 0
    R = json.loads(out)["R"]
    assert sorted([R["1212"], R["1313"], R["2323"]]) == [-0.75, 0.25, 0.25]
    gpath.write_text("1 0 0 0 -1 0 0 0 1")
    assert run(capsys, "curvature", "--structure", str(cpath), "--gram", str(gpath))[0] == 2


def test_source_must_be_unique(capsys):
    assert run(capsys, "curvature", "--family", "h3", "--canonical", "0,0.5,0,0,0")[0] == 2
    assert run(capsys, "curvature")[0] == 2


def test_epsilon_validation(capsys, monkeypatch):
    assert run(capsys, "classify", "--family", "h3", "--epsilon", "0")[0] == 2
    monkeypatch.setenv("GAUSS_EMBED_EPS", "abc")
    assert run(capsys, "classify", "--family", "h3")[0] == 2
    monkeypatch.setenv("GAUSS_EMBED_EPS", "1e-10")
    assert run(capsys, "classify", "--family", "h3")[0] == 10


def test_scan_writes_csv(capsys, tmp_path):
    out = tmp_path / "r3.csv"
    code = run(capsys, "scan", "--family", "r3", "--lambda-range", "0.1:1.2:0.1",
               "--out", str(out))[0]
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,alpha,lambda,u,v,w,T,S,gauss_status,derived_status,verdict,flag"
    assert len(lines) == 13


def test_scan_negative_ranges_and_json(capsys, tmp_path):
    out = tmp_path / "plane.json"
    code = run(capsys, "scan", "--family", "simple", "--u-range", "-1:1:0.5",
               "--w-range", "-2:2:1", "--out", str(out), "--format", "json")[0]
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["rows"]) == 25
    assert data["columns"][0] == "family"


@pytest.mark.parametrize("argv, code", [
    (["--lambda-range", "1:0:0.1"], 2),
    (["--lambda-range", "0:1:0"], 2),
    (["--lambda-range", "0:1"], 2),
    (["--lambda-range", "a:b:c"], 2),
    ([], 2),
])
def test_scan_usage_errors(capsys, tmp_path, argv, code):
    assert run(capsys, "scan", "--family", "r3", "--out", str(tmp_path / "x.csv"), *argv)[0] == code


def test_scan_unwritable_path(capsys, tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    assert run(capsys, "scan", "--family", "r3", "--lambda-range", "0.1:0.2:0.1",
               "--out", str(bad))[0] == 3


def test_scan_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run(capsys, "scan", "--family", "r3-alpha", "--alpha-range", "-1:1:0.1",
            "--lambda-range", "-1:1:0.1", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") >= 9


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gauss_embed", "classify", "--family", "h3"],
                         capture_output=True, text=True)
    assert res.returncode == 10
    assert '"S": -0.75' in res.stdout
