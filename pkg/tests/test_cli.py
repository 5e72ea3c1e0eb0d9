import json
import subprocess
import sys

import pytest

from quartic_sieve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_symbol(capsys):
    code, out, _ = run(capsys, "symbol", "--num", "2", "--den", "-1+2i")
    assert code == 0 and out.split()[0] == "-i" and "k=3" in out


def test_symbol_even_modulus(capsys):
    code, _, err = run(capsys, "symbol", "--num", "2", "--den", "1+i")
    assert code == 2 and "modulus must be odd primary" in err


def test_malformed_literal_names_token(capsys):
    code, _, err = run(capsys, "symbol", "--num", "2+3k", "--den", "-1+2i")
    assert code == 2 and "2+3k" in err


def test_unknown_flag(capsys):
    code, _, _ = run(capsys, "symbol", "--num", "2", "--den", "-1+2i", "--bogus")
    assert code == 2


def test_iterate_xi(capsys):
    code, out, _ = run(capsys, "iterate-xi", "--xi0", "2", "--steps", "1")
    assert code == 0 and out.splitlines()[0] == "12/7"
    code, out, _ = run(capsys, "iterate-xi", "--xi0", "2", "--steps", "100", "--format", "json")
    assert code == 0 and abs(json.loads(out)["final_float"] - 1.5) < 1e-6
    code, _, _ = run(capsys, "iterate-xi", "--xi0", "3", "--steps", "1")
    assert code == 2


def test_gauss_sum_and_tau(capsys):
    code, out, _ = run(capsys, "gauss-sum", "--r", "1", "--n", "-1+2i")
    assert code == 0 and abs(json.loads(out)["abs2"] - 5) < 1e-9
    code, out, _ = run(capsys, "tau", "--n", "3+2i", "--power", "2")
    assert code == 0 and abs(json.loads(out)["abs2"] - 13) < 1e-9
    code, _, _ = run(capsys, "tau", "--n", "-3")
    assert code == 2


def test_chars(capsys):
    code, out, _ = run(capsys, "chars", "--q", "13")
    data = json.loads(out)
    assert code == 0 and len(data["characters"]) == 2 and len(data["characters"][0]["values"]) == 13
    code, out, _ = run(capsys, "chars", "--q", "13", "--oracle")
    assert code == 0 and json.loads(out)["source"] == "oracle"
    code, out, _ = run(capsys, "chars", "--q", "17", "--check")
    assert code == 0 and json.loads(out)["ok"] is True
    code, _, _ = run(capsys, "chars", "--q", "10")
    assert code == 2


def test_theta(capsys):
    code, out, _ = run(capsys, "theta", "--w", "1", "--f", "-1+2i", "--chi", "principal")
    assert code == 0 and abs(json.loads(out)["value"]["re"] - 0.001867) < 1e-5
    code, _, _ = run(capsys, "theta", "--w", "1", "--f", "-i")
    assert code == 2


def test_poisson_check(capsys):
    code, out, _ = run(capsys, "poisson-check", "--n1", "-1+2i", "--n2", "1", "--M", "4")
    assert code == 0 and json.loads(out)["rel_err"] < 1e-4


def test_sieve_norm(capsys, tmp_path):
    code, out, _ = run(capsys, "sieve-norm", "--kind", "t1", "--M", "4", "--N", "4")
    assert code == 0 and abs(json.loads(out)["empirical_norm"] - 1) < 1e-12
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "sieve-norm", "--kind", "t2", "--Q", "4", "--M", "4", "--format", "csv",
                       "--out", str(target))
    assert code == 0 and target.read_text() == out
    assert out.splitlines()[0].startswith("kind,Q,M,rows,cols,empirical_norm,")
    code, _, _ = run(capsys, "sieve-norm", "--kind", "t1", "--M", "4")
    assert code == 2


def test_sieve_norm_coefficients(capsys, tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("index,re,im\n-1+2i,1,0\n-1-2i,0,1\n")
    code, out, _ = run(capsys, "sieve-norm", "--kind", "t1", "--M", "4", "--N", "4", "--coeffs", str(p))
    extra = json.loads(out)["extra"]
    assert code == 0 and abs(extra["quadratic_form"] - extra["quadratic_form_matrix"]) < 1e-12
    assert extra["quadratic_form"] <= extra["quadratic_form_bound"] * (1 + 1e-7)
    p.write_text("7+2i,1,0\n")
    code, _, err = run(capsys, "sieve-norm", "--kind", "t1", "--M", "4", "--N", "4", "--coeffs", str(p))
    assert code == 2 and "7+2i" in err


def test_regime(capsys):
    code, out, _ = run(capsys, "regime", "--Q", "1024", "--M", "1048576")
    assert code == 0 and json.loads(out)["label"] == "M"


def test_sweep_and_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QUARTIC_SIEVE_OUT", str(tmp_path))
    code, out, _ = run(capsys, "sweep", "--kind", "t2", "--grid", "4,8", "--jobs", "2")
    assert code == 0 and len(out.splitlines()) == 5
    assert (tmp_path / "sweep_t2.csv").read_text() == out


def test_write_failure_exit_1(capsys, tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    code, _, err = run(capsys, "regime", "--Q", "4", "--M", "4", "--out", str(blocker / "x.json"))
    assert code == 1 and "cannot write" in err


def test_help_lists_subcommands(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for name in ("symbol", "gauss-sum", "tau", "chars", "theta", "poisson-check", "sieve-norm",
                 "regime", "iterate-xi", "sweep", "verify"):
        assert name in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quartic_sieve", "symbol", "--num", "2", "--den", "-1+2i"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("-i")
