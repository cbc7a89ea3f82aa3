import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import EXAMPLES
from fixfig.cli import run_command

GOLDEN = Path(__file__).resolve().parent / "golden"
EXM21 = str(EXAMPLES / "exm21.ffl")
EXM22 = str(EXAMPLES / "exm22.ffl")
EXM23 = str(EXAMPLES / "exm23.ffl")

GOLDEN_CASES = {
    "exm21_verify_ellipse.json": ["verify", EXM21, "--theorem", "ellipse", "--foci", "-1,1",
                                  "--zeta", "linear:1/2", "--a", "0", "--format", "json"],
    "exm21_analyze.txt": ["analyze", EXM21],
    "exm21_verify.txt": ["verify", EXM21],
    "exm22_verify.txt": ["verify", EXM22],
    "exm23_verify.txt": ["verify", EXM23],
    "exm23_bmetric_verify.txt": ["verify", str(EXAMPLES / "exm23_bmetric.ffl")],
}


def write_doc(tmp_path, text, name="doc.ffl"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_outputs(name):
    res = run_command(GOLDEN_CASES[name])
    assert res.code == 0, res.err
    assert res.out == (GOLDEN / name).read_text()


def test_analyze_line_metric():
    res = run_command(["analyze", EXM21])
    assert res.code == 0
    assert "Fix(f) = {-3, -1, 1, 3, 18}" in res.out
    assert "rho = 6" in res.out
    data = json.loads(run_command(["analyze", EXM21, "--format", "json"]).out)
    assert data["rho"] == "6"
    assert ["-3", "3"] in [e["members"] for e in data["catalog"]["ellipse"]]
    by_members = {tuple(e["members"]): e for e in data["catalog"]["ellipse"]}
    for fixed_but_uncertified in (("-3", "-1", "1"), ("-1", "1", "3")):
        entry = by_members[fixed_but_uncertified]
        assert entry["certified_by"] == []
        assert entry["figure"] in data["gap"]["ellipse"]


def test_verify_ellipse_json():
    res = run_command(["verify", EXM21, "--theorem", "ellipse", "--foci", "-1,1", "--zeta", "linear:1/2"])
    assert res.code == 0
    assert res.out.count(": PASS") == 4
    data = json.loads((GOLDEN / "exm21_verify_ellipse.json").read_text())
    assert {c["id"]: c["status"] for c in data["conditions"]} == {"a": "pass", "b": "pass", "c": "pass"}
    assert data["conclusion"]["oracle_confirmed"] is True
    for key in ("theorem", "kind", "params", "conditions", "conclusion", "notes"):
        assert key in data


def test_json_is_deterministic():
    argv = ["analyze", EXM23, "--format", "json"]
    assert run_command(argv).out == run_command(argv).out


def test_condition_failure_exits_one():
    res = run_command(["verify", EXM23, "--theorem", "circle", "--center", "3"])
    assert res.code == 1
    assert "(ii) fail at 12" in res.out


def test_vacuous_status(tmp_path):
    res = run_command(["verify", EXM21, "--theorem", "phi-circle", "--center", "-3", "--radius", "5",
                       "--format", "json"])
    assert res.code == 0
    assert json.loads(res.out)["status"] == "vacuous"


def test_validate():
    assert run_command(["validate", EXM23]).code == 0
    res = run_command(["validate", EXM21, "--zeta", "expr:s - t"])
    assert res.code == 1 and "z2 fail" in res.out


def test_invalid_space_exits_one(tmp_path):
    path = write_doc(tmp_path, "[space]\nkind = metric\npoints = a, b, c\nrow a = 0, 1, 3\nrow b = 1, 0, 1\nrow c = 3, 1, 0\n")
    res = run_command(["validate", path])
    assert res.code == 1
    assert "triangle inequality" in res.out


def test_parse_error_exits_two(tmp_path):
    path = write_doc(tmp_path, "[space]\nkind = metric\npoints = 0, 1\nbuiltin = abs-metric\n\n[map]\n1 = 7\n")
    res = run_command(["analyze", path])
    assert res.code == 2
    assert "line 7" in res.err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["verify", EXM21, "--theorem", "ellipse"],
    ["verify", EXM21, "--theorem", "ellipse", "--foci", "-1,99"],
    ["verify", EXM21, "--a", "1/0"],
    ["verify", EXM21, "--a", "1"],
    ["verify", EXM21, "--zeta", "bogus:1"],
    ["verify", "/nonexistent.ffl"],
    ["scan", "--instances", "0"],
    ["demo-ellipse", "--samples", "0"],
])
def test_usage_errors_exit_two(argv):
    res = run_command(argv)
    assert res.code == 2
    assert res.err.startswith("fixfig")


def test_small_scan_command():
    res = run_command(["scan", "--seed", "5", "--instances", "3", "--max-n", "4", "--format", "json"])
    data = json.loads(res.out)
    assert data["config"]["seed"] == 5
    assert res.code == (0 if data["soundness_violations"] == 0 else 1)


def test_demo_command():
    res = run_command(["demo-ellipse", "--samples", "100"])
    assert res.code == 0 and "PASS" in res.out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fixfig", "validate", EXM21], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("valid")
