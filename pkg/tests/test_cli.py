import json
import math
import subprocess
import sys

import pytest

from qde import QMat, Quat, exp_quat
from qde.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exp_example2(capsys):
    code, out, _ = run(capsys, "exp", "--matrix", "k,1;0,k", "--t", "1")
    assert code == 0
    ek = exp_quat(Quat(0, 0, 0, 1))
    assert QMat.parse(out).max_abs_diff(QMat([[ek, ek], [0, ek]])) <= 1e-15
    code, out2, _ = run(capsys, "exp", "--matrix", "k,1;0,k", "--t", "1", "--method", "series")
    assert QMat.parse(out2).max_abs_diff(QMat.parse(out)) <= 1e-14


def test_exp_json_and_matrix_file(capsys, tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("i, 0\n0, j\n")
    code, out, _ = run(capsys, "exp", "--matrix", str(p), "--t", "0.5", "--format", "json")
    assert code == 0
    m = QMat.from_json(out)
    assert m.allclose(QMat.diag([exp_quat(Quat(0, 0.5)), exp_quat(Quat(0, 0, 0.5))]), 1e-15)
    pj = tmp_path / "a.json"
    pj.write_text(json.dumps(QMat.parse("i,0;0,j").to_json()))
    code, out2, _ = run(capsys, "exp", "--matrix", str(pj), "--t", "0.5", "--format", "json")
    assert out2 == out


def test_solve_zero_system(capsys):
    code, out, _ = run(capsys, "solve", "--matrix", "0,0;0,0", "--x0", "1,i", "--t0", "0",
                       "--t1", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,x1_w,x1_x,x1_y,x1_z,x2_w,x2_x,x2_y,x2_z"
    assert len(lines) == 12
    assert all(line.split(",")[1:] == ["1", "0", "0", "0", "0", "1", "0", "0"]
               for line in lines[1:])
    assert "\r" not in out


def test_fund_auto_method_order(capsys):
    _, out, _ = run(capsys, "fund", "--matrix", "k,1;0,k", "--t", "1")
    assert out.startswith("# method=split")
    _, out, _ = run(capsys, "fund", "--matrix", "i,j;0,i+j", "--t", "1")
    assert out.startswith("# method=eigen")
    _, out, _ = run(capsys, "fund", "--matrix", "i,k;k,j", "--t", "1")
    assert out.startswith("# method=")


def test_fund_verify(capsys):
    code, out, _ = run(capsys, "fund", "--matrix", "i,1;0,j", "--method", "numeric",
                       "--steps", "2000", "--verify")
    assert code == 0 and "PASS residual" in out


def test_eig(capsys):
    code, out, _ = run(capsys, "eig", "--matrix", "2,0;0,3")
    assert code == 0
    assert out.splitlines()[1:] == ["2,1 0,0", "3,0 1,0"]
    code, out, _ = run(capsys, "eig", "--matrix", "i,j;0,i+j", "--format", "json")
    pairs = json.loads(out)
    assert pairs[1]["lambda"][1] == pytest.approx(math.sqrt(2))


def test_wronskian(capsys):
    code, out, _ = run(capsys, "wronskian", "--matrix", "1,i;j,-k")
    assert code == 0 and float(out) == 0.0
    _, out, _ = run(capsys, "wronskian", "--matrix", "1,1;0,1")
    assert float(out) == 1.0


def test_liouville_and_verify_breach(capsys):
    code, out, _ = run(capsys, "liouville", "--matrix", "i,1;0,j", "--steps", "1000",
                       "--verify")
    assert code == 0 and out.startswith("t,w_direct,w_formula,rel_err")
    code, out, _ = run(capsys, "liouville", "--matrix", "3,5;-7,2+9i", "--steps", "4",
                       "--verify")
    assert code == 1 and "FAIL" in out


def test_scenario(capsys, tmp_path):
    sc = tmp_path / "s.json"
    sc.write_text(json.dumps({"dim": 2, "A": "i,1;0,j", "t0": 0, "x0": ["1", "0"],
                              "t_end": 0.5, "steps": 500, "method": "numeric"}))
    code, out, _ = run(capsys, "solve", "--scenario", str(sc))
    assert code == 0
    last = out.splitlines()[-1].split(",")
    assert float(last[0]) == 0.5 and float(last[1]) == pytest.approx(math.cos(0.5))
    sc.write_text(json.dumps({"A_t": "oscillator", "x0": [1, 0], "t_end": 1.0}))
    code, out, _ = run(capsys, "solve", "--scenario", str(sc), "--samples", "2")
    assert float(out.splitlines()[-1].split(",")[1]) == pytest.approx(math.cos(1.0), abs=1e-8)
    code, out, _ = run(capsys, "fund", "--scenario", str(sc), "--verify")
    assert code == 0 and "method=numeric" in out


def test_out_file(capsys, tmp_path):
    target = tmp_path / "m.csv"
    code, out, _ = run(capsys, "exp", "--matrix", "i", "--t", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes().endswith(b"\n")


@pytest.mark.parametrize("argv", [
    ["exp", "--matrix", "k,1;0"],
    ["exp", "--matrix", "1+2i+3i"],
    ["solve", "--matrix", "i,0;0,i", "--x0", "1"],
    ["solve", "--matrix", "i"],
    ["fund", "--matrix", "1,2,3"],
    ["preset", "nope"],
    ["fund"],
    ["solve", "--scenario", "/nonexistent.json", "--x0", "1"],
    ["frobnicate"],
])
def test_input_errors_exit_2(capsys, tmp_path, argv):
    target = tmp_path / "out.csv"
    code, out, err = run(capsys, *argv, "--out", str(target)) if argv[0] != "frobnicate" \
        else run(capsys, *argv)
    assert code == 2
    assert err
    assert not target.exists()


@pytest.mark.parametrize("argv, name", [
    (["fund", "--matrix", "k,1;0,k", "--method", "eigen"], "DefectiveMatrix"),
    (["fund", "--matrix", "i,k;0,j", "--method", "split"], "SplitRejected"),
])
def test_numeric_errors_exit_3(capsys, tmp_path, argv, name):
    target = tmp_path / "out.csv"
    code, _, err = run(capsys, *argv, "--out", str(target))
    assert code == 3 and name in err and not target.exists()


def test_preset_jobs_same_output(capsys):
    code1, serial, _ = run(capsys, "preset", "all", "--verify")
    code2, parallel, _ = run(capsys, "preset", "all", "--verify", "--jobs", "3")
    assert code1 == code2 == 0 and serial == parallel
    assert "FAIL" not in serial and serial.count("PASS") >= 12


def test_console_script_subprocess(tmp_path):
    env_cmd = [sys.executable, "-m", "qde", "preset", "example3", "--t", "0.5", "--verify"]
    res = subprocess.run(env_cmd, capture_output=True, check=False)
    assert res.returncode == 0
    assert b"PASS example3.ode_residual" in res.stdout
    res = subprocess.run(env_cmd[:3] + ["exp", "--matrix", "x"], capture_output=True)
    assert res.returncode == 2


def test_log_level_env(tmp_path):
    import os
    env = dict(os.environ, QDE_LOG="info")
    res = subprocess.run([sys.executable, "-m", "qde", "fund", "--matrix", "k,1;0,k;",
                          "--matrix", "i,k;k,j", "--t", "0.2"], capture_output=True, env=env)
    assert res.returncode == 0
    assert b"falling back" in res.stderr
