import json
import subprocess
import sys

import pytest

from nipstab.cli import main


def test_bounds_table(capsys):
    assert main(["bounds", "--theta", "1", "--p", "0.5", "--scheme", "doubling"]) == 0
    out = capsys.readouterr().out
    assert "3.4142135623731" in out


def test_bounds_reports_divergence(capsys):
    assert main(["bounds", "--p", "1.5", "--scheme", "doubling"]) == 1
    assert "[0,1)" in capsys.readouterr().out


def test_axioms(capsys):
    assert main(["axioms", "--n", "3", "--dim", "4", "--samples", "20", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "nI7" in out and "overall: pass" in out


def test_axioms_dim_below_n(capsys):
    assert main(["axioms", "--n", "3", "--dim", "2"]) == 2
    assert "dim" in capsys.readouterr().err


def test_induce_json(capsys):
    assert main(["induce", "--n", "2", "--dim", "2", "--anchors", "orthonormal",
                 "--samples", "20", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["checks"]["recovery"]["verdict"] == "pass"


def test_stability_rejects_p(capsys):
    assert main(["stability", "--scheme", "doubling", "--p", "1.5"]) == 2
    assert "[0,1)" in capsys.readouterr().err


def test_stability_nary(capsys):
    assert main(["stability", "--scheme", "jensen_shrinking", "--p", "5", "--n", "2",
                 "--samples", "20"]) == 0


def test_generate(capsys):
    assert main(["generate", "--kind", "induce", "--seed", "3", "--param", "n=2"]) == 0
    assert "anchors" in json.loads(capsys.readouterr().out)
    assert main(["generate", "--kind", "axioms", "--param", "n=3", "--param", "dim=2"]) == 2


def test_suite_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"experiments": [
        {"experiment_id": "x", "kind": "stability_hilbert", "scheme": "doubling", "p": 1.5}]},
        indent=2))
    assert main(["suite", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 2
    err = capsys.readouterr().err
    assert "line 7:" in err and "[0,1)" in err


def test_suite_runs(tmp_path, capsys):
    cfg = tmp_path / "ok.json"
    cfg.write_text(json.dumps({"experiments": [
        {"experiment_id": "ax", "kind": "axioms", "samples": 10}]}))
    assert main(["suite", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "ax.csv").exists()


def test_unknown_scheme(capsys):
    assert main(["bounds", "--scheme", "halving"]) == 2


@pytest.mark.parametrize("args", [["--version"], ["bounds", "--help"]])
def test_module_entry_point(args):
    proc = subprocess.run([sys.executable, "-m", "nipstab.cli", *args], capture_output=True,
                          text=True)
    assert proc.returncode == 0
