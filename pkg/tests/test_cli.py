import json

import pytest

from cmfg.cli import main
from cmfg.toyexample import ToyParams, toy_document


def test_verify_toy_passes(capsys):
    assert main(["verify", "toy"]) == 0
    assert "verdict: PASS" in capsys.readouterr().out


def test_verify_negative_controls(capsys):
    assert main(["verify", "toy", "--c1", "0"]) == 1
    out = capsys.readouterr().out
    assert "better_action" in out
    assert main(["verify", "toy", "--perturb", "1/100"]) == 1
    assert "conditional_law" in capsys.readouterr().out


def test_input_errors_exit_two(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert main(["verify", "toy", "--beta", "1/2"]) == 2
    assert main(["simulate", "toy", "--N", "1", "--reps", "10", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "toy", "--N", "x"]) == 2
    assert main(["nonsense"]) == 2


def test_config_error_carries_location(tmp_path, capsys):
    doc = toy_document(ToyParams())
    doc["game"]["kernel"]["table"][0][1][0] = ["1/2", "1/3"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["verify", str(path)]) == 2
    assert "$.game.kernel.table[0][1][0]" in capsys.readouterr().err


def test_exported_config_verifies(tmp_path):
    out = tmp_path / "export"
    assert main(["export-toy", "--out", str(out)]) == 0
    assert main(["verify", str(out / "toy.json")]) == 0
    assert main(["verify", str(out / "toy.json"), "--mode", "float"]) == 0


def test_env_var_sets_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CMFG_OUT_DIR", str(tmp_path / "envout"))
    assert main(["simulate", "toy", "--N", "3", "--reps", "200"]) == 0
    assert (tmp_path / "envout" / "simulate.csv").exists()
    manifest = json.loads((tmp_path / "envout" / "manifest.json").read_text())
    assert manifest["command"] == "simulate" and manifest["seed"] == 0
    assert manifest["outputs"] == ["simulate.csv"]


@pytest.mark.parametrize("argv,files", [
    (["simulate", "toy", "--N", "2,5", "--reps", "500", "--seed", "7", "--deviation", "flip"], ["simulate.csv"]),
    (["dpp", "toy", "--phi", "phi+"], ["dpp.csv"]),
    (["chaos-scan", "toy", "--N", "5,10,20", "--reps", "300", "--flow", "m-"], ["chaos.csv"]),
    (["epsilon-scan", "toy", "--N", "3", "--reps", "300"], ["epsilon.csv"]),
])
def test_rerun_is_byte_identical(tmp_path, argv, files):
    first = tmp_path / "run"
    assert main(argv + ["--out", str(first)]) == 0
    assert main(["rerun", str(first / "manifest.json")]) == 0
    again = tmp_path / "run-rerun"
    for f in files:
        assert (first / f).read_bytes() == (again / f).read_bytes()


def test_rerun_rejects_bad_manifest(tmp_path):
    p = tmp_path / "manifest.json"
    p.write_text("{}")
    assert main(["rerun", str(p)]) == 2


def test_dpp_prints_branch_value(capsys):
    assert main(["dpp", "toy", "--phi", "phi0"]) == 0
    assert "branch phi0: E[V(0, X0)] = 0" in capsys.readouterr().out
