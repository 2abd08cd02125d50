import json

import numpy as np
import pytest

from kinvar import butene_cycle, first_order_network, save_network
from kinvar.cli import main, parse_scenario


def _write_scenario(tmp_path, name="scn.json", **overrides):
    scn = {
        "network": {
            "species": ["A", "B"],
            "reactions": [
                {
                    "reactants": [["A", 1]],
                    "products": [["B", 1]],
                    "k_forward": 2.0,
                    "k_backward": 1.0,
                }
            ],
        },
        "experiment": {"a": "A", "b": "B"},
        "grid": {"t_max": 4.0, "points": 25, "spacing": "geometric"},
        "invariants": [{"kind": "linear_ratio", "pair": ["A", "B"]}],
    }
    scn.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(scn))
    return path


def _butene_scenario(tmp_path):
    net_path = tmp_path / "butene.json"
    save_network(butene_cycle(), net_path)
    scn = {
        "network_file": "butene.json",
        "experiment": {"a": "cis-2-butene", "b": "1-butene"},
        "grid": {"t_max": 2.0, "points": 30, "spacing": "geometric"},
        "invariants": [
            {"kind": "linear_ratio", "pair": ["cis-2-butene", "1-butene"]}
        ],
    }
    path = tmp_path / "butene_scn.json"
    path.write_text(json.dumps(scn))
    return path


def test_simulate_writes_csvs_and_summary(tmp_path, capsys):
    cfg = _write_scenario(tmp_path)
    rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    out = tmp_path / "out"
    header = (out / "from_A.csv").read_text().splitlines()[0]
    assert header == "t,A,B"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["engine"] == "linear"
    assert summary["conserved_total"] == 1.0


def test_simulate_oracle_cross_check(tmp_path):
    cfg = _write_scenario(tmp_path)
    rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o"),
               "--oracle"])
    assert rc == 0
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert summary["oracle"]["reference_engine"] == "nonlinear"
    assert summary["oracle"]["max_abs_diff"] < 1e-8


def test_dump_config_round_trips(tmp_path, capsys):
    cfg = _write_scenario(tmp_path)
    rc = main(["simulate", "--config", str(cfg), "--dump-config"])
    assert rc == 0
    dumped = json.loads(capsys.readouterr().out)
    original = parse_scenario(json.loads(cfg.read_text()), tmp_path)
    assert parse_scenario(dumped, tmp_path) == original


def test_grid_flag_overrides_scenario(tmp_path):
    cfg = _write_scenario(tmp_path)
    out = tmp_path / "g"
    rc = main(["simulate", "--config", str(cfg), "--out", str(out),
               "--grid", "1.0,10,linear"])
    assert rc == 0
    rows = (out / "from_A.csv").read_text().splitlines()
    assert len(rows) == 1 + 11  # header plus t = 0 and 10 linear points


def test_invariants_verdict_pass(tmp_path, capsys):
    cfg = _write_scenario(tmp_path)
    rc = main(["invariants", "--config", str(cfg), "--out", str(tmp_path / "i")])
    assert rc == 0
    assert "pass" in capsys.readouterr().out
    payload = json.loads((tmp_path / "i" / "invariants.json").read_text())
    assert payload["reports"][0]["verdict"] is True


def test_invariants_unbalanced_requires_tol(tmp_path, capsys):
    cfg = _butene_scenario(tmp_path)
    rc = main(["invariants", "--config", str(cfg), "--out", str(tmp_path / "i")])
    assert rc == 2
    assert "--tol" in capsys.readouterr().err


def test_invariants_unbalanced_with_loose_tol(tmp_path):
    cfg = _butene_scenario(tmp_path)
    rc = main(["invariants", "--config", str(cfg), "--out", str(tmp_path / "i"),
               "--tol", "5e-3"])
    assert rc == 0


def test_invariants_unbalanced_tight_tol_fails(tmp_path):
    cfg = _butene_scenario(tmp_path)
    rc = main(["invariants", "--config", str(cfg), "--out", str(tmp_path / "i"),
               "--tol", "1e-8"])
    assert rc == 1


def test_invariants_balance_flag_restores_invariant(tmp_path):
    cfg = _butene_scenario(tmp_path)
    rc = main(["invariants", "--config", str(cfg), "--out", str(tmp_path / "i"),
               "--balance"])
    assert rc == 0
    payload = json.loads((tmp_path / "i" / "invariants.json").read_text())
    assert payload["reports"][0]["max_rel_deviation"] < 1e-8


def test_prove_verified_chain(tmp_path, capsys):
    net = first_order_network(
        ["A", "B", "C"], [("A", "B", 2.0, 1.0), ("B", "C", 3.0, 0.0)]
    )
    path = tmp_path / "chain.json"
    save_network(net, path)
    rc = main(["prove", "--config", str(path), "--pair", "A,B",
               "--out", str(tmp_path)])
    assert rc == 0
    payload = json.loads((tmp_path / "proof.json").read_text())
    assert payload["verified"] is True
    assert payload["K_num"] == 2 and payload["K_den"] == 1


def test_prove_unbalanced_fails_and_balance_repairs(tmp_path, capsys):
    path = tmp_path / "butene.json"
    save_network(butene_cycle(), path)
    rc = main(["prove", "--config", str(path), "--pair",
               "cis-2-butene,1-butene", "--out", str(tmp_path / "raw")])
    assert rc == 1
    assert "cycle" in capsys.readouterr().out
    rc = main(["prove", "--config", str(path), "--pair",
               "cis-2-butene,1-butene", "--balance",
               "--out", str(tmp_path / "bal")])
    assert rc == 0


def test_prove_unknown_species(tmp_path, capsys):
    path = tmp_path / "butene.json"
    save_network(butene_cycle(), path)
    assert main(["prove", "--config", str(path), "--pair", "cis-2-butene,X"]) == 2


def test_fig1_is_deterministic(tmp_path):
    rc = main(["fig1", "--out", str(tmp_path / "a")])
    assert rc == 0
    rc = main(["fig1", "--out", str(tmp_path / "b")])
    assert rc == 0
    first = (tmp_path / "a" / "fig1.csv").read_bytes()
    second = (tmp_path / "b" / "fig1.csv").read_bytes()
    assert first == second
    lines = first.decode().splitlines()
    assert lines[0] == "t,BA_over_AA,BB_over_AB,BA_over_AB"
    assert len(lines) == 401


def test_balance_command(tmp_path, capsys):
    path = tmp_path / "butene.json"
    save_network(butene_cycle(), path)
    rc = main(["balance", "--config", str(path), "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "balance_report.json").read_text())
    assert report["max_mismatch_before"] > 1e-4
    assert report["max_mismatch_after"] < 1e-12
    assert (tmp_path / "balanced_network.json").exists()


@pytest.mark.parametrize(
    "mutation, message_part",
    [
        ({"extra_field": 1}, "unknown"),
        ({"experiment": {"a": "A", "b": "A"}}, "distinct"),
        ({"experiment": {"a": "A", "b": "X"}}, "not in"),
        ({"engine": "quantum"}, "engine"),
        ({"grid": {"t_max": -1.0, "points": 10, "spacing": "linear"}}, "t_max"),
    ],
)
def test_bad_scenarios_exit_2(tmp_path, capsys, mutation, message_part):
    cfg = _write_scenario(tmp_path, **mutation)
    rc = main(["invariants", "--config", str(cfg)])
    assert rc == 2
    assert message_part in capsys.readouterr().err


def test_engine_mismatch_exits_2(tmp_path, capsys):
    scn = {
        "network": {
            "species": ["A", "B"],
            "reactions": [
                {
                    "reactants": [["A", 2]],
                    "products": [["B", 1]],
                    "k_forward": 3.0,
                    "k_backward": 1.0,
                }
            ],
        },
        "experiment": {"a": "A", "b": "B"},
        "grid": {"t_max": 2.0, "points": 10, "spacing": "linear"},
        "engine": "linear",
    }
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(scn))
    rc = main(["simulate", "--config", str(path), "--out", str(tmp_path)])
    assert rc == 2
    assert "first-order" in capsys.readouterr().err


def test_closed_form_engine_rejects_odd_topology(tmp_path, capsys):
    cfg = _write_scenario(
        tmp_path,
        network={
            "species": ["A", "B", "C"],
            "reactions": [
                {"reactants": [["A", 1]], "products": [["B", 1]],
                 "k_forward": 1.0, "k_backward": 1.0},
                {"reactants": [["B", 1]], "products": [["C", 1]],
                 "k_forward": 1.0, "k_backward": 1.0},
            ],
        },
        invariants=[],
    )
    rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path),
               "--engine", "closed-form"])
    assert rc == 2


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2
