import json
import os
import subprocess
import sys

import pytest

from gabor_janssen.ambiguity import JanssenReport
from gabor_janssen.certify import PropositionReport
from gabor_janssen.cli import CSV_HEADER, main


def run(*args, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "gabor_janssen", *args],
                          capture_output=True, text=True, env=full_env, timeout=600)


def test_eval_certified_frame():
    res = run("eval", "--order", "4", "--density", "5", "--mode", "certified")
    assert res.returncode == 0, res.stderr
    out = json.loads(res.stdout)
    assert out["verdict"] == "frame-certified"
    assert abs(out["value"] - 1.99390) < 1e-5
    report = JanssenReport.from_dict(out)
    assert report.finite_part.hi < 2


def test_eval_inconclusive_exit_code():
    res = run("eval", "--order", "0", "--density", "1")
    assert res.returncode == 10
    assert json.loads(res.stdout)["verdict"] == "inconclusive"


def test_eval_exact_two_is_inconclusive():
    res = run("eval", "--order", "1", "--density", "2")
    assert res.returncode == 10
    out = json.loads(res.stdout)
    lo = out["finite_part"]["lo"]
    assert lo <= 2 <= out["value"]


def test_eval_rectangular_and_out_file(tmp_path):
    path = tmp_path / "r.json"
    assert main(["eval", "--order", "0", "--a", "1/2", "--b", "1", "--out", str(path)]) == 0
    out = json.loads(path.read_text())
    assert out["density"] == 2.0


@pytest.mark.parametrize("args", [
    ("eval", "--order", "x", "--density", "5"),
    ("eval", "--order", "4"),
    ("eval", "--order", "4", "--density", "5", "--a", "1"),
    ("eval", "--order", "4", "--density", "-5"),
    ("eval", "--order", "4", "--density", "5", "--cutoff", "box:3"),
    ("eval", "--order", "4", "--density", "5", "--precision-bits", "8"),
    ("scan",),
    ("certify", "--props", "P4_36,Bogus"),
    ("frobnicate",),
])
def test_usage_errors_exit_2(args):
    assert run(*args).returncode == 2


def test_hypothesis_violation_exit_3():
    res = run("eval", "--order", "15", "--density", "1/10")
    assert res.returncode == 3
    assert "hypothesis" in res.stderr


def test_fast_eval():
    res = run("eval", "--order", "4", "--density", "5", "--mode", "fast")
    out = json.loads(res.stdout)
    assert out["verdict"] == "fast-estimate" and out["mode"] == "fast"
    assert res.returncode == 10


def test_table_fast_reports_summary():
    res = run("table", "--mode", "fast")
    lines = res.stdout.splitlines()
    assert lines[0] == "n,value,published,match"
    assert len(lines) == 38
    assert "10,1.75515,1.75515,true" in lines
    assert "23,1.27788,1.27788,true" in lines
    assert "3,2,2,true" in lines
    assert "rows match" in res.stderr


def test_scan_csv_shape():
    res = run("scan", "--n", "0-1", "--a-range", "0.5:0.6", "--step", "0.05")
    assert res.returncode == 0, res.stderr
    lines = res.stdout.splitlines()
    assert lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 2 * 3 * 3
    keys = [(int(r[0]), float(r[1]), float(r[2])) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert abs(float(r[3]) - 1 / (float(r[1]) * float(r[2]))) < 1e-9
        assert r[5] == "fast-estimate" and r[6] == "fast" and r[7] == "maxnorm:5"


def test_scan_byte_identical_across_jobs():
    args = ("scan", "--n", "3-6", "--a-range", "0.4:0.9", "--step", "0.05")
    one = run(*args, env={"JANSSEN_JOBS": "1"})
    many = run(*args, env={"JANSSEN_JOBS": "3"})
    assert one.returncode == many.returncode == 0
    assert one.stdout == many.stdout
    assert run(*args, "--jobs", "4").stdout == one.stdout


def test_scan_density3_preset():
    res = run("scan", "--preset", "density3")
    rows = [line.split(",") for line in res.stdout.splitlines()[1:]]
    assert len(rows) == 41
    assert all(r[6] == "certified" and r[3] == "3" for r in rows)
    assert [int(r[0]) for r in rows if r[5] == "frame-certified"] == [0, 1, 4, 9]


def test_certify_round_trip(tmp_path):
    path = tmp_path / "c.json"
    res = run("certify", "--props", "PH9,NegativeCases", "--out", str(path))
    assert res.returncode == 0, res.stderr
    data = json.loads(path.read_text())
    reports = [PropositionReport.from_dict(d) for d in data]
    assert [r.id for r in reports] == ["PH9", "NegativeCases"]
    assert [r.to_dict() for r in reports] == data
