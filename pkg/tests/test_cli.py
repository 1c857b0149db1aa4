import csv
import json
import subprocess
import sys

import pytest

from supersle.cli import main, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out.strip() else None, out.err


def test_default_suite_passes(capsys):
    code, reports, err = run(capsys, "suite")
    assert code == 0
    assert all(r["status"] == "pass" for r in reports)
    assert err.count("PASS") == len(reports) and "FAIL" not in err


def test_singular_on_locus(capsys):
    code, reports, _ = run(capsys, "singular", "ns32", "--c", "7/5", "--delta", "1/3")
    assert code == 0
    assert reports[0]["status"] == "pass"


def test_singular_off_locus_fails(capsys):
    code, reports, _ = run(capsys, "singular", "r1", "--c", "3/2", "--delta", "3/32")
    assert code == 1
    assert reports[0]["status"] == "fail"


def test_unknown_suite_entry():
    with pytest.raises(ValueError):
        run_suite(["no-such-check"])
    with pytest.raises(ValueError):
        run_suite(["suite"])


def test_link_and_solution_commands(capsys):
    for cmd in ("link", "verify-solution"):
        code, reports, _ = run(capsys, cmd, "r-alt", "--kappa", "4")
        assert code == 0, reports


def test_irrational_k_rejected_for_exact_checks(capsys):
    with pytest.raises((SystemExit, ValueError)):
        main(["link", "ns-conv", "--kappa", "2"])


def test_martingale_off_locus(capsys):
    code, reports, _ = run(capsys, "martingale", "classical", "--kappa", "8/3", "--c", "1/2", "--delta", "1/3")
    assert code == 1
    assert reports[0]["status"] == "fail"


def test_simulate_csv(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    argv = ["simulate", "--paths", "20", "--steps", "50", "--checkpoints", "2", "--format", "csv",
            "--out", str(out), "--seed", "5"]
    code, reports, _ = run(capsys, *argv)
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "observable", "mean", "stderr", "n_paths"]
    assert len(rows) == 1 + 3 * 4 * 4
    first = out.read_text()
    run(capsys, *argv)
    assert out.read_text() == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supersle", "singular", "vir2", "--c", "1", "--delta", "1/4"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert "PASS" in proc.stderr


def test_numeric_martingale_only_for_scalar_walks(capsys):
    with pytest.raises(SystemExit):
        main(["martingale", "ns", "--numeric", "--paths", "10", "--steps", "10"])
    code, reports, _ = run(capsys, "martingale", "classical", "--numeric", "--paths", "200", "--steps", "100")
    assert code == 0 and [r["check"] for r in reports] == ["martingale classical", "martingale-numeric"]
