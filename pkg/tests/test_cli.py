import io
import json
import subprocess
import sys

import pytest

from iterfe.cli import main, run_batch, run_command, selftest


def run(*argv):
    return run_command(list(argv))


def test_trees_plain():
    code, out, _ = run("trees", "--set", "2,3", "--order", "6", "--format", "plain")
    assert code == 0 and out == "1, 1, 1, 1, 2, 2"


def test_sierpinski_json():
    code, out, _ = run("sierpinski", "--order", "7")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["coeffs_G4"] == [1, 0, 4, 4, 32, 76, 348, 1112]


def test_classify_trees():
    code, out, _ = run("classify", "--R", "t^2+t^3", "--a", "1", "--b", "-t")
    data = json.loads(out)
    assert code == 0 and data["outcome"] == "DiffTranscendental"
    assert any(c["hypothesis"] == "degree criterion hypotheses" for c in data["certificate"])


def test_unknown_exit_code():
    code, out, _ = run("classify", "--R", "-t", "--a", "1", "--b", "-t")
    assert code == 2 and json.loads(out)["outcome"] == "Unknown"


def test_obstruction_exit_code():
    code, out, _ = run("solve", "--R", "2t", "--a", "2", "--b", "t", "--order", "4")
    assert code == 2 and json.loads(out)["obstructions"] == [1]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["solve", "--R", "t^2+", "--a", "1"],
        ["trees", "--set", "a,b"],
        ["solve", "--R", "t^2", "--a", "1", "--normalize", "0"],
        ["trees", "--order", "x"],
    ],
)
def test_usage_errors(argv):
    code, out, err = run_command(argv)
    assert code == 1 and out == ""
    assert "expr" in err  # grammar reference is printed


def test_solve_with_normalization():
    code, out, _ = run("solve", "--R", "t^2", "--a", "1", "--b", "0", "--normalize", "0=3", "--format", "plain")
    assert code == 0 and out.startswith("3, 0, 0")


def test_dynamics_commands():
    code, out, _ = run("pcf", "--R", "2t^2-1", "--format", "plain")
    assert code == 0 and out == "FiniteP {-1, 1, inf}"
    code, out, _ = run("conjugacy", "--R", "t^2/(1-2t+2t^2)")
    assert json.loads(out)["m"] == "(t)/(t+1)"
    code, out, _ = run("julia", "--R", "t/(1+t)", "--order", "4", "--format", "plain")
    assert out == "0, 0, 1, 0, 0"
    code, out, _ = run("boettcher", "--R", "t^2+t^3", "--order", "3", "--format", "plain")
    assert out == "0, 1, 1/2, 1/8"


def test_oracle_subcases():
    assert run("oracle", "trees", "--n", "6", "--format", "plain")[1] == "1, 1, 1, 1, 2, 2"
    assert run("oracle", "walks", "--n", "4", "--format", "plain")[1] == "1, 0, 4, 4, 32"
    assert run("oracle", "perms", "--n", "5", "--format", "plain")[1] == "1, 1, 2, 6, 23, 110"


def test_seed_selftest():
    code, out, _ = run("trees", "--order", "4", "--seed", "7")
    data = json.loads(out)
    assert data["selftest"]["passed"] and data["selftest"]["seed"] == 7
    assert selftest(7) == selftest(7)


def test_batch_mode(monkeypatch, capsys):
    lines = ["trees --order 3", "", "# comment", "bogus", 'classify --R "-t" --a 1 --b 0']
    code, outs = run_batch(lines)
    assert code == 2 and len(outs) == 3
    assert json.loads(outs[1])["error"] == "usage"
    monkeypatch.setattr(sys, "stdin", io.StringIO("trees --order 2\n"))
    assert main(["-"]) == 0
    assert json.loads(capsys.readouterr().out)["coefficients"] == [1, 1]


def test_json_byte_identical_across_processes():
    argv = [sys.executable, "-m", "iterfe", "patterns", "--order", "8", "--verify-bruteforce", "7"]
    a = subprocess.run(argv, capture_output=True).stdout
    b = subprocess.run(argv + ["--workers", "2"], capture_output=True).stdout
    assert a and a == b
