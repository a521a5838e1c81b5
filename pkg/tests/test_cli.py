import io
import json
import subprocess
import sys

import pytest

from cremona.cli import run

SIGMA2 = "[z1*z2; z0*z2; z0*z1]"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, [json.loads(line) for line in out.getvalue().splitlines()], err.getvalue()


def test_exit_code_triplet():
    code, recs, _ = call("compose", "--map", SIGMA2, "--map", SIGMA2, "--expect", "id")
    assert code == 0 and recs[0]["degree"] == 1 and recs[0]["raw_degree"] == 4
    # wrong identity on purpose
    code, recs, _ = call("compose", "--map", SIGMA2, "--map", SIGMA2, "--expect", SIGMA2)
    assert code == 1 and recs[0]["pass"] is False
    code, recs, err = call("compose", "--mapx", SIGMA2)
    assert code == 2 and not recs and err.count("\n") == 1


def test_usage_errors():
    assert call()[0] == 2
    assert call("verify", "--n", "2")[0] == 2
    assert call("degree", "--map", "[z0; z1^2]")[0] == 2
    assert call("degree", "--map", "[z0; z1", "--field", "GF(7)")[0] == 2
    assert call("degree", "--field", "GF(8)", "--map", "[z0; z1]")[0] == 2
    assert call("word", "--word", "q", "--n", "2")[0] == 2
    # no abbreviated flags
    assert call("degree", "--ma", "[z0; z1]")[0] == 2


def test_verify_lines():
    code, recs, _ = call("verify", "--n", "2,3", "--all")
    assert code == 0 and all(r["pass"] for r in recs)
    assert all("millis" not in r for r in recs)
    names = {r["check"] for r in recs}
    assert "tame_decomposition" in names
    code, recs, _ = call("verify", "--n", "2", "--check", "sigma_involution", "--timing")
    assert code == 0 and len(recs) == 1 and "millis" in recs[0]


def test_degree_and_chart():
    code, recs, _ = call("degree", "--chart", "--map", "[1/z0; 1/z1]", "--expect", "2")
    assert code == 0 and recs[0]["map"] == SIGMA2


def test_word_command(tmp_path):
    f = tmp_path / "alph.txt"
    f.write_text("a = [2*z0; z1; z2]\nb = [z1; z0; z2]\n")
    code, recs, _ = call("word", "--word", "a b a^-1 s s", "--alphabet", str(f),
                         "--expect", "[4*z1; z0; 2*z2]")
    assert code == 0 and recs[0]["reduced"] == "a b a^-1"
    code, recs, _ = call("word", "--word", "s s", "--n", "3", "--expect", "id")
    assert code == 0
    assert call("word", "--word", "a", "--alphabet", str(tmp_path / "missing"))[0] == 2


def test_fiber_command():
    code, recs, _ = call("fiber", "--map", "[z0^2; z1^2; z2^2]", "--expect", "4")
    assert code == 0 and recs[0]["size"] == 4
    assert call("fiber", "--map", SIGMA2, "--prime", "11", "--expect", "1")[0] == 0


def test_pan_commands():
    base = ["--P", "z2*z0 + z1^2", "--Q", "z0", "--R", "z0; z1"]
    code, recs, _ = call("pan", "build", *base)
    assert code == 0 and recs[0]["psi"] == "[z0^2; z0*z1; z0*z2 + z1^2]"
    code, recs, _ = call("pan", "check", *base, "--expect", "birational")
    assert code == 0
    code, recs, _ = call("pan", "check", "--P", "z2*z0^2 + z1^3", "--Q", "z0",
                         "--R", "z0^2; z1^2", "--expect", "birational")
    assert code == 1 and recs[0]["verdict"] == "not_birational"
    assert call("pan", "check", "--P", "z0*z2 + z0^2", "--Q", "z0", "--R", "z0; z1")[0] == 2
    code, recs, _ = call("pan", "fiber", *base)
    assert code == 0 and recs[0]["size"] == 1


def test_pan_blowdown_example():
    code, recs, _ = call("pan", "blowdown", "--q", "z0*z3-z1*z2", "--d", "3", "--seed", "1",
                         "--check-prime", "7")
    assert code == 0
    rec = recs[0]
    assert rec["degree"] == 3 and rec["checks"][0]["image"] == [0, 0, 0, 1]
    assert call("pan", "blowdown", "--q", "z3^2 + z0^2")[0] == 2


def test_freeness_command():
    code, recs, _ = call("freeness", "--max-len", "3", "--gens", "0")
    assert code == 0
    summary = recs[-1]
    assert summary["pass"] and summary["words"] == len(recs) - 1
    assert {"word", "entry_degrees", "status", "rm_generators"} <= set(recs[0])
    code, recs, _ = call("freeness", "--max-len", "2", "--gens", "1", "--subgroup", "--quiet")
    assert code == 0 and recs == []
    assert call("freeness", "--max-len", "5", "--max-words", "3")[0] == 1


def test_golden_reports_identical_across_processes():
    argv = [sys.executable, "-m", "cremona", "fiber", "--map", "[z0^2; z1^2; z2*z0]",
            "--seed", "9", "--prime", "7,11"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == b.returncode and a.stdout == b.stdout and a.stdout
