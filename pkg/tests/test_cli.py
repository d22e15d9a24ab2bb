import csv
import io
import json

import pytest

from nlsl2 import cli


def call(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_cut_linear_r2():
    code, out, _ = call(["cut", "--linear", "r=2", "s=1", "--d", "4"])
    assert code == 0
    data = json.loads(out)
    assert data["closed_form"] == pytest.approx(14 / 17, abs=1e-15)
    (sol,) = data["solutions"]
    assert sol["alpha_j"] == pytest.approx(0.823529, abs=1e-6)


def test_analyze_two_cycle_regime():
    code, out, _ = call(["analyze", "--quadratic", "t=1", "r=1", "s=1.1"])
    assert code == 0
    data = json.loads(out)
    cls = data["classification"]
    assert cls["delta"] == pytest.approx(4.4, abs=1e-12)
    assert cls["regime"] == "StableTwoCycle"
    region = data["allowed_region"]
    assert (region["low"], region["high"]) == pytest.approx((-0.683772, 1.04881), abs=1e-5)


def test_cycles():
    code, out, _ = call(["cycles", "--quadratic", "t=1", "r=1", "s=1.1", "--d", "2"])
    assert code == 0
    (cyc,) = json.loads(out)
    assert cyc["stability"] == "stable" and cyc["period"] == 2


@pytest.mark.parametrize("argv", [
    ["build", "--linear", "r=1", "s=1", "--d", "5"],
    ["build", "--linear", "r=0.7", "s=1", "--d", "4"],
    ["build", "--quadratic", "t=0.1", "r=1", "s=1", "--d", "2"],
    ["build", "--quadratic", "t=1", "r=1", "s=1.1", "--d", "2", "--cycle-index", "0",
     "--mode", "algebraic"],
    ["build", "--poly", "-1", "0.9", "0.05", "0.02", "--d", "3", "--mode", "algebraic"],
])
def test_build_then_verify(argv, monkeypatch):
    code, built, _ = call(argv)
    assert code == 0
    code, out, _ = call(["verify"], stdin=built, monkeypatch=monkeypatch)
    assert code == 0
    report = json.loads(out)
    assert report["ok"]
    assert all(v["residual"] < 1e-8 for v in report["relations"].values() if v["required"])


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    _, built, _ = call(["build", "--linear", "r=1", "s=1", "--d", "5"])
    data = json.loads(built)
    data["jminus"][2][1] *= 1.1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, err = call(["verify", "--input", str(path)])
    assert code == cli.EXIT_VERIFY
    assert not json.loads(out)["ok"]
    assert "verification failed" in err


def test_tolerance_environment(monkeypatch):
    _, built, _ = call(["build", "--linear", "r=1", "s=1", "--d", "5"])
    monkeypatch.setenv("NLSL2_TOL", "1e-30")
    code, out, _ = call(["verify"], stdin=built, monkeypatch=monkeypatch)
    assert json.loads(out)["tol"] == 1e-30
    assert code == cli.EXIT_VERIFY


def test_build_pretty():
    code, out, _ = call(["build", "--linear", "r=1", "s=1", "--d", "3", "--pretty"])
    assert code == 0 and out.startswith("j0 =")


def test_qmap_residuals():
    code, out, _ = call(["qmap", "--q", "1.4142135623730951", "--j", "1.5", "--s", "1"])
    assert code == 0
    data = json.loads(out)
    assert data["residual_j0"] < 1e-8 and data["residual_jplus"] < 1e-8
    code, out, _ = call(["qmap", "--linear", "r=0.7", "s=1", "--d", "4"])
    assert code == 0 and json.loads(out)["ok"]


def test_qmap_wrong_alpha_fails():
    code, _, _ = call(["qmap", "--linear", "r=2", "s=1", "--d", "4", "--alpha", "0.83"])
    assert code == cli.EXIT_VERIFY


def test_cobweb_csv_sl2():
    code, out, _ = call(["cobweb", "--linear", "r=1", "s=1", "--x0", "2", "--steps", "5"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert [r["kind"] for r in rows[:2]] == ["V", "H"]
    assert float(rows[-1]["x"]) == -3.0 and float(rows[-1]["y"]) == -3.0


def test_sweep_grid_order_and_jobs():
    argv = ["sweep", "--t-values", "0", "0.1", "1", "--r-values", "1", "2", "--s-values", "1", "1.1",
            "--d-values", "1", "2"]
    code, serial, _ = call(argv)
    assert code == 0
    code, parallel, _ = call(argv + ["--jobs", "3"])
    assert code == 0 and parallel == serial
    rows = list(csv.reader(io.StringIO(serial)))
    assert rows[0] == ["t", "r", "s", "d", "alpha_j", "unitary"]
    keys = [tuple(map(float, r[:4])) for r in rows[1:]]
    assert keys == sorted(keys)  # grid order is lexicographic for ascending inputs
    assert any(r[:4] == ["0.1", "1.0", "1.0", "2"] and abs(float(r[4]) - 0.476105) < 1e-5
               for r in rows[1:])


def test_deterministic_output():
    argv = ["analyze", "--quadratic", "t=1", "r=1", "s=1.55"]
    assert call(argv)[1] == call(argv)[1]


def test_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"function": {"kind": "linear", "r": 2, "s": 1}, "d": 4}))
    code, out, _ = call(["cut", "--config", str(cfg)])
    assert code == 0
    assert json.loads(out)["closed_form"] == pytest.approx(14 / 17)


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"function": {"kind": "linear", "r": 2, "s": 1}, "dim": 4}))
    code, _, err = call(["cut", "--config", str(cfg)])
    assert code == cli.EXIT_USAGE and "dim" in err


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = call(["cut", "--linear", "r=2", "s=1", "--d", "4", "-o", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["d"] == 4


@pytest.mark.parametrize("argv,code", [
    (["cut", "--d", "4"], cli.EXIT_USAGE),
    (["cut", "--linear", "r=2", "--d", "4"], cli.EXIT_USAGE),
    (["cut", "--linear", "r=2", "s=1", "--quadratic", "t=1", "r=1", "s=1", "--d", "2"], cli.EXIT_USAGE),
    (["cut", "--func", '{"kind": "cubic"}', "--d", "2"], cli.EXIT_USAGE),
    (["frobnicate"], cli.EXIT_USAGE),
    (["cut", "--quadratic", "t=1", "r=1", "s=1.1", "--d", "2", "--interval", "1", "1"], cli.EXIT_SOLVER),
    (["build", "--quadratic", "t=1", "r=1", "s=1.1", "--d", "2", "--alpha", "-0.316227766016838",
      "--mode", "unitary"], cli.EXIT_SOLVER),
    (["cycles", "--linear", "r=-1", "s=1", "--d", "2"], cli.EXIT_SOLVER),
])
def test_exit_codes(argv, code, capsys):
    rc, _, err = call(argv)
    assert rc == code
    assert err.strip() or capsys.readouterr().err.strip()


def test_main_entry(monkeypatch):
    monkeypatch.setattr("sys.argv", ["nlsl2", "cut", "--linear", "r=1", "s=1", "--d", "5"])
    with pytest.raises(SystemExit) as exc:
        cli.main()
    assert exc.value.code == 0
