import json
import subprocess
import sys

import pytest

from coordlat.cli import main


def run(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_schema_and_success(capsys):
    code, rep = run(capsys, "coord", "mn", "--n", "5")
    assert code == 0
    assert rep["schema"] == "coordlat/1" and rep["command"] == "coord mn"
    assert rep["status"] == rep["result"]["status"] == "coordinatizable"
    assert set(rep["budgets"]) == {"carrier", "rank", "levels"}


def test_negative_verdict_still_exits_zero(capsys):
    code, rep = run(capsys, "coord", "mn", "--n", "7")
    assert code == 0 and rep["result"]["status"] == "not_coordinatizable"


@pytest.mark.parametrize("argv", [
    ["logic", "eval", "--formula", "a = "],
    ["logic", "eval", "--formula", "a = b", "--env", "a=a0"],
    ["lattice", "check", "--builtin", "nonsense"],
    ["coord", "mn", "--n", "2"],
    ["lattice", "frobnicate"],
])
def test_input_errors_exit_one(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 1
    assert rep["status"] == "error" and rep["error"]["code"] == "input_error"


def test_budget_exhaustion_exits_two(capsys):
    code, rep = run(capsys, "coord", "mn", "--n", "7", "--budget-carrier", "3")
    assert code == 2 and rep["error"]["code"] == "budget_exhausted"


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("COORDLAT_BUDGET_OVERRIDE", json.dumps({"carrier": 3}))
    code, rep = run(capsys, "coord", "mn", "--n", "5")
    assert code == 2 and rep["budgets"]["carrier"] == 3
    monkeypatch.setenv("COORDLAT_BUDGET_OVERRIDE", json.dumps({"bogus": 1}))
    assert run(capsys, "coord", "mn", "--n", "5")[0] == 1


def test_logic_eval(capsys):
    code, rep = run(capsys, "logic", "eval", "--formula", "a /\\ b = 0", "--env", "a=a0,b=a1")
    assert code == 0
    assert json.dumps(rep["result"]).count("true") >= 1


def test_suite_is_deterministic(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code = main(["suite", "smoke", "--no-timings", "--format", "json"])
        outs.append(capsys.readouterr().out)
        assert code == 0
    assert outs[0] == outs[1]
    assert "seconds" not in outs[0]


def test_replay(capsys, tmp_path):
    out = tmp_path / "mn.json"
    assert main(["coord", "mn", "--n", "4", "--format", "json", "--out", str(out)]) == 0
    capsys.readouterr()
    code, rep = run(capsys, "replay", "--input", str(out))
    assert code == 0, rep
    assert "fail" not in json.dumps(rep["result"]).lower()


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "coordlat", "coord", "mn", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "coordinatizable" in proc.stdout


def test_fv_validation_on_product_file(capsys, tmp_path):
    prod = tmp_path / "prod.json"
    prod.write_text(json.dumps({"stalks": [{"kind": "m", "n": 2}, {"builtin": "N5"}]}))
    code, rep = run(capsys, "logic", "fv", "--formula", "E x. x /\\ a = 0 && x \\/ a = 1",
                    "--validate-on", str(prod))
    assert code == 0
    assert rep["result"]["rows"][0]["failures"] == []
