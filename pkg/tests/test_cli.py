import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from signalpower import cli, routing as rt, scenarios, signaling
from signalpower.game import FiniteBayesianGame, game_to_json


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- parsing helpers ---------------------------------------------------------


def test_parse_classes():
    assert cli.parse_classes("pri,PUB") == ("Pub", "Pri")
    with pytest.raises(cli.InputError):
        cli.parse_classes("pub,foo")


def test_parse_range():
    assert cli.parse_range("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert cli.parse_range("2:5:1", integer=True) == [2, 3, 4, 5]
    assert cli.parse_range("0.5") == [0.5]
    for bad in ("1:0:0.1", "0:1:0", "0:1:-1", "a:b:c"):
        with pytest.raises(cli.InputError):
            cli.parse_range(bad)


def test_fmt12():
    assert cli.fmt12(1 / 3) == "0.333333333333"
    assert cli.fmt12(float("inf")) == "inf"


# -- run ---------------------------------------------------------------------


def test_run_fig4_json(capsys):
    code, out, _ = run(["run", "fig4", "--alpha", "0.5", "--eps", "0.1", "--classes", "pub,pri", "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["values"]["Pub"] == pytest.approx(1.0454545, abs=2e-3)
    assert rep["values"]["Pri"] == pytest.approx(1.6, abs=1e-7)
    (pair,) = rep["pos"]
    assert pair["pair"] == "PoS(Pri:Pub)"
    assert pair["ratio"] == pytest.approx(0.65341, abs=1e-4)


def test_run_appA_exact(capsys):
    code, out, _ = run(["run", "appA", "--n", "10", "--classes", "ni,pub", "--exact", "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pos"][0]["ratio"] == pytest.approx(0.1, abs=1e-12)
    assert rep["exact_values"] == {"NI": "1/10", "Pub": "1"}


def test_run_single_state_instance(tmp_path, capsys):
    rng = np.random.default_rng(3)
    g = FiniteBayesianGame.from_arrays(rng.uniform(size=(1, 2, 3, 2)), [1.0], "payoff")
    path = tmp_path / "one.json"
    path.write_text(game_to_json(g))
    code, out, _ = run(["run", str(path), "--classes", "fi,ni,pub", "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert len(rep["pos"]) == 2
    assert all(p["ratio"] == pytest.approx(1.0, abs=1e-9) for p in rep["pos"])


def test_run_single_state_dominant_all_classes(tmp_path, capsys):
    # a strictly dominant profile leaves no room for correlation either
    payoff = np.array([[[[3.0, 3.0], [4.0, 1.0]], [[1.0, 4.0], [2.0, 2.0]]]])[:, ::-1, ::-1]
    g = FiniteBayesianGame.from_arrays(payoff, [1.0], "cost")
    path = tmp_path / "pd.json"
    path.write_text(game_to_json(g))
    code, out, _ = run(["run", str(path), "--json"], capsys)
    rep = json.loads(out)
    assert code == 0 and len(rep["pos"]) == 9
    assert all(p["ratio"] == pytest.approx(1.0, abs=1e-9) for p in rep["pos"])


def test_run_routing_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    path.write_text(scenarios.build("fig2", alpha=1).instance.to_json())
    code, out, _ = run(["run", str(path), "--classes", "fi,ni", "--csv"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert float(row["FI"]) == pytest.approx(1.0, abs=1e-6)
    code, _, err = run(["run", str(path), "--classes", "pri"], capsys)
    assert code == 1 and "error" in err


def test_run_human_and_timings(capsys):
    code, out, _ = run(["run", "fig5", "--classes", "pri,exp", "--timings"], capsys)
    assert code == 0
    assert "PoS(exP:Pri)" in out and "timings:" in out
    code, out, _ = run(["run", "fig5", "--classes", "pri,exp", "--json", "--timings"], capsys)
    assert "timings" not in out


def test_run_verify_pass(capsys):
    code, out, _ = run(["run", "fig5", "--verify"], capsys)
    assert code == 0 and "verify: pass" in out


def test_run_verify_violation_exit_2(capsys, monkeypatch):
    # an inflated PoA bound turns the fig4 ratio into a violation
    monkeypatch.setattr(scenarios, "scenario_poa_max", lambda sc: 0.99)
    code, out, _ = run(["run", "fig4", "--classes", "pub,pri", "--verify"], capsys)
    assert code == 2 and "FAIL" in out


def test_run_deterministic(capsys):
    argv = ["run", "sec51", "--alpha", "2", "--eps", "0.1", "--json"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    assert a == b


def test_run_matches_library(capsys):
    _, out, _ = run(["run", "fig4", "--classes", "pri,exp", "--json"], capsys)
    rep = json.loads(out)
    g = scenarios.build("fig4").instance
    assert rep["values"]["Pri"] == float(cli.fmt12(signaling.optimal_private_value(g)[0]))


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "fig9"],
        ["run", "sec51", "--alpha", "1", "--eps", "0.4"],
        ["run", "fig4", "--classes", "bogus"],
        ["run", "sec51", "--classes", "pri,exp", "--exact", "--alpha", "x"],
        ["run", "fig1", "--exact"],
    ],
)
def test_run_input_errors(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_run_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(["run", str(p)], capsys)
    assert code == 1 and "malformed JSON" in err


def test_run_out_file(tmp_path, capsys):
    dest = tmp_path / "r.csv"
    code, out, _ = run(["run", "appA", "--n", "3", "--csv", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert rows(dest.read_text())[0]["n"] == "3"


# -- sweep -------------------------------------------------------------------


def test_sweep_fig1(capsys):
    code, out, _ = run(["sweep", "fig1", "--alpha", "0.25:4:0.25", "--classes", "fi,pub"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 16
    alphas = [float(r["alpha"]) for r in table]
    assert alphas == sorted(alphas)
    for r in table:
        assert float(r["PoS(Pub:FI)"]) == pytest.approx(rt.pigou_poa(float(r["alpha"])), abs=1e-4)


def test_sweep_fig5(capsys):
    code, out, _ = run(["sweep", "fig5", "--alpha", "0.1:0.8:0.1", "--eps", "0.05", "--classes", "pri,exp"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 8
    for r in table:
        a = float(r["alpha"])
        assert float(r["PoS(exP:Pri)"]) == pytest.approx((2 * a + 0.05) / (1 + a), abs=1e-7)


def test_sweep_single_point_equals_run(capsys):
    _, swept, _ = run(["sweep", "fig4", "--alpha", "0.5", "--eps", "0.1", "--classes", "fi,pri"], capsys)
    _, single, _ = run(["run", "fig4", "--alpha", "0.5", "--eps", "0.1", "--classes", "fi,pri", "--csv"], capsys)
    assert swept == single


def test_sweep_grid_order(capsys):
    code, out, _ = run(["sweep", "fig5", "--alpha", "0.3:0.5:0.1", "--eps", "0:0.1:0.1", "--classes", "pri"], capsys)
    assert code == 0
    pts = [(float(r["alpha"]), float(r["eps"])) for r in rows(out)]
    assert pts == sorted(pts) and len(pts) == 6


def test_sweep_jobs_identical(capsys):
    argv = ["sweep", "fig5", "--alpha", "0.2:0.4:0.1", "--classes", "pri,exp"]
    assert run(argv, capsys)[1] == run(argv + ["--jobs", "2"], capsys)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "fig1", "--alpha", "2:1:0.5"],
        ["sweep", "fig5", "--alpha", "0.5:1:0.1", "--eps", "0.1"],
        ["sweep", "nope"],
    ],
)
def test_sweep_errors(argv, capsys):
    assert cli.main(argv) == 1


# -- verify ------------------------------------------------------------------


def test_verify_count_zero(capsys):
    code, out, _ = run(["verify", "--count", "0", "--json"], capsys)
    assert code == 0
    s = json.loads(out)
    assert s["count"] == 0 and s["findings"] == [] and s["violations"] == 0


def test_verify_deterministic(capsys):
    argv = ["verify", "--seed", "7", "--count", "12", "--json"]
    a = run(argv, capsys)
    b = run(argv, capsys)
    assert a == b and a[0] == 0


def test_verify_seed1_200_games():
    s = cli.verify_batch(1, 200, 2, 2, 3, signaling.DEFAULT_GRID)
    assert s["violations"] == 0 and s["errors"] == 0


def test_random_game_properties():
    senses = set()
    for k in range(20):
        g = cli.random_game(5, k, 2, 2, 3)
        assert 1 <= g.n_players <= 2 and 1 <= g.n_states <= 2
        assert all(1 <= len(a) <= 3 for a in g.actions)
        assert np.all((g.payoff >= 0) & (g.payoff <= 1))
        senses.add(g.sense.value)
    assert len(senses) == 2
    assert game_to_json(cli.random_game(5, 3, 2, 2, 3)) == game_to_json(cli.random_game(5, 3, 2, 2, 3))


def test_verify_reports_findings(capsys, monkeypatch):
    def broken(g, grid=512, values=None):
        raise RuntimeError("boom")

    monkeypatch.setattr(signaling, "verify_pos_bound", broken)
    code, out, _ = run(["verify", "--count", "2"], capsys)
    assert code == 2
    assert "RuntimeError: boom" in out
    assert '"payoff"' in out  # offending instance serialized


def test_verify_caps_validated(capsys):
    assert cli.main(["verify", "--players", "5"]) == 1
    assert cli.main(["verify", "--count", "-1"]) == 1


# -- export ------------------------------------------------------------------


def test_export_round_trip(tmp_path, capsys):
    dest = tmp_path / "fig4.json"
    assert cli.main(["export-scenario", "fig4", "--alpha", "0.6", "--eps", "0.2", "--out", str(dest)]) == 0
    code, out, _ = run(["run", str(dest), "--classes", "pri", "--json"], capsys)
    assert json.loads(out)["values"]["Pri"] == pytest.approx(1.8, abs=1e-7)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "signalpower", "run", "appA", "--n", "2", "--classes", "ni,pub", "--csv"], capture_output=True, text=True)
    assert res.returncode == 0
    assert rows(res.stdout)[0]["PoS(Pub:NI)"] == "0.5"
    res = subprocess.run([sys.executable, "-m", "signalpower", "frobnicate"], capture_output=True, text=True)
    assert res.returncode == 1
