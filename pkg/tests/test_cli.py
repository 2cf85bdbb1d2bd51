import json

import pytest

from fictplay.cli import main


def test_bound_prints_lb(capsys):
    assert main(["bound", "--n", "6"]) == 0
    assert capsys.readouterr().out == "1024\n"


def test_bound_with_eps(capsys):
    assert main(["bound", "--n", "4", "--eps", "1/10000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"n": 4, "lb_first_hit": "64", "main_bound": "281"}


def test_construct_k2(capsys):
    assert main(["construct", "--n", "2", "--z", "0"]) == 0
    js = json.loads(capsys.readouterr().out)
    assert js["entries"] == [2, 3, 1, 0] and js["n_rows"] == 2


def test_zero_based_init_is_a_usage_error(tmp_path, capsys):
    m = tmp_path / "k.json"
    main(["construct", "--n", "4", "--out", str(m)])
    assert main(["simulate", "--matrix", str(m), "--init", "0,1", "--stop", "rounds:10"]) == 2
    assert "1-based" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["bound", "--n", "5"],
    ["bound", "--n", "6", "--bogus"],
    ["frobnicate"],
    ["bound", "--n", "6", "--eps", "0.1"],
    ["audit", "concentration", "--n", "4", "--eps", "1/100", "--samples", "10"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_missing_file_is_io_error(tmp_path, capsys):
    assert main(["validate", "--matrix", str(tmp_path / "none.json")]) == 3


def test_validate_exit_codes(tmp_path, capsys):
    good, bad = tmp_path / "g.json", tmp_path / "b.json"
    main(["construct", "--n", "4", "--out", str(good)])
    assert main(["validate", "--matrix", str(good)]) == 0
    js = json.loads(good.read_text())
    js["entries"][0] = 99
    bad.write_text(json.dumps(js))
    assert main(["validate", "--matrix", str(bad)]) == 1


def test_simulate_audit_pipeline(tmp_path, capsys):
    m = tmp_path / "k.json"
    main(["construct", "--n", "6", "--out", str(m)])
    out = tmp_path / "run"
    assert main(["simulate", "--matrix", str(m), "--init", "6,1", "--rule", "stay",
                 "--stop", "first-hit:3,4", "--out", str(out)]) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == "round,row_action,col_action" and len(lines) == 12
    state = json.loads((out / "state.json").read_text())
    assert int(state["t"]) >= 1024 and all(isinstance(v, str) for v in state["R"])
    capsys.readouterr()
    assert main(["audit", "run", "--matrix", str(m), "--trace", str(out / "trace.csv"),
                 "--state", str(out / "state.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] and report["failed"] == []


def test_snapshot_and_resume(tmp_path, capsys):
    m = tmp_path / "k.json"
    main(["construct", "--n", "4", "--out", str(m)])
    a, b = tmp_path / "a", tmp_path / "b"
    base = ["simulate", "--matrix", str(m), "--stop", "rounds:4000"]
    assert main(base + ["--init", "4,1", "--rule", "random", "--seed", "7", "--engine", "naive",
                        "--snapshot-every", "700", "--out", str(a)]) == 0
    ckpt = a / "checkpoints" / "state_2100.json"
    assert main(base + ["--resume", str(ckpt), "--out", str(b)]) == 0
    assert (a / "state.json").read_bytes() == (b / "state.json").read_bytes()
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()


def test_equivalence_check_flag(tmp_path, capsys):
    m = tmp_path / "k.json"
    main(["construct", "--n", "4", "--out", str(m)])
    assert main(["simulate", "--matrix", str(m), "--init", "4,1", "--stop", "gap:1/64",
                 "--equivalence-check", "--out", str(tmp_path / "e")]) == 0
    assert json.loads(capsys.readouterr().out)["identical"] is True


def test_gap_and_purene(tmp_path, capsys):
    m = tmp_path / "k.json"
    main(["construct", "--n", "2", "--out", str(m)])
    assert main(["gap", "--matrix", str(m), "--x", "1/2,1/2", "--y", "1/2,1/2"]) == 0
    assert json.loads(capsys.readouterr().out)["gap"] == "1"
    assert main(["purene", "--matrix", str(m)]) == 0
    assert json.loads(capsys.readouterr().out) == {"pure_ne": [[1, 2]]}


def test_audit_concentration_cli(capsys):
    assert main(["audit", "concentration", "--n", "4", "--eps", "1/3584",
                 "--samples", "100", "--seed", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_sweep_init_cli(tmp_path, capsys):
    assert main(["sweep-init", "--n", "4", "--out", str(tmp_path / "s.csv")]) == 0
    assert json.loads(capsys.readouterr().out)["mean_first_hit"] == "435/4"
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "row,col,first_hit,switches"
