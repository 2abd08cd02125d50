"""Command-line front end.

Subcommands: ``simulate`` (dual-experiment trajectories to CSV), ``invariants``
(ratio reports with pass/fail exit code), ``prove`` (exact Laplace-domain
proportionality proof), ``fig1`` (built-in butene ratio dataset), ``balance``
(cycle-condition repair of a network file). Scenario and network inputs are
JSON; all outputs are UTF-8 with dot decimals, and reports are pretty-printed
with sorted keys so identical inputs give identical bytes.

Exit codes: 0 success/verified, 1 invariant or proof failure, 2 input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .closed_forms import (
    nonlinear_2A_B,
    nonlinear_2A_2B,
    single_reversible,
    two_step_concentrations,
)
from .errors import (
    BalanceError,
    ConfigError,
    ConservationError,
    DegenerateExperimentError,
    DetailedBalanceError,
    IntegrationError,
    KinvarError,
    MultipleEquilibriaError,
    NetworkValidationError,
    NoReversiblePathError,
)
from .integrate import IntegratorConfig, dual_experiment_nonlinear, integrate
from .invariants import (
    DEFAULT_TOL,
    InvariantSpec,
    evaluate_invariant,
    overshoot_scan,
    resolve_expected_K,
)
from .laplace import exact_balance, prove_fixed_proportion
from .linear import build_rate_matrix, default_time_grid, dual_experiment, simulate_linear
from .network import (
    ORDER_FIRST,
    ReactionNetwork,
    balance_network,
    butene_cycle,
    check_cycle_conditions,
    load_network,
    network_from_dict,
    network_to_dict,
    save_network,
)
from .trajectory import DualExperiment, Trajectory, write_trajectory_csv

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_INPUT_ERRORS = (
    ConfigError,
    NetworkValidationError,
    NoReversiblePathError,
    BalanceError,
    DetailedBalanceError,
    FileNotFoundError,
    ValueError,
)
_NUMERICAL_ERRORS = (
    IntegrationError,
    MultipleEquilibriaError,
    ConservationError,
    DegenerateExperimentError,
)


# ---------------------------------------------------------------------------
# scenario schema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    t_max: float
    points: int
    spacing: str

    def __post_init__(self):
        if self.spacing not in ("linear", "geometric"):
            raise ConfigError(f"grid spacing must be linear or geometric, "
                              f"got {self.spacing!r}")
        if not self.t_max > 0:
            raise ConfigError("grid t_max must be positive")
        if self.points < 2:
            raise ConfigError("grid needs at least 2 points")

    def times(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(0.0, self.t_max, self.points + 1)
        inner = np.geomspace(self.t_max * 1e-3, self.t_max, self.points)
        return np.concatenate(([0.0], inner))


@dataclass(frozen=True)
class ExperimentSpec:
    a: str
    b: str
    a0: Optional[float] = None
    b0: Optional[float] = None


@dataclass(frozen=True)
class InvariantRequest:
    kind: str
    pair: tuple
    expected_K: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    network: ReactionNetwork
    experiment: ExperimentSpec
    grid: Optional[GridSpec]
    invariants: tuple
    engine: str
    balance: str


def _require_keys(data: dict, allowed: set, where: str):
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} field(s): {', '.join(sorted(unknown))}")


def parse_scenario(data: dict, base_dir: Path = Path(".")) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    _require_keys(
        data,
        {"network", "network_file", "experiment", "grid", "invariants",
         "engine", "balance"},
        "scenario",
    )
    if ("network" in data) == ("network_file" in data):
        raise ConfigError("give exactly one of 'network' or 'network_file'")
    if "network" in data:
        net = network_from_dict(data["network"])
    else:
        net = load_network(base_dir / data["network_file"])

    exp = data.get("experiment")
    if not isinstance(exp, dict):
        raise ConfigError("scenario needs an 'experiment' object")
    _require_keys(exp, {"a", "b", "a0", "b0"}, "experiment")
    for key in ("a", "b"):
        if exp.get(key) not in net.names:
            raise ConfigError(f"experiment species {exp.get(key)!r} is not in "
                              "the network")
    if exp["a"] == exp["b"]:
        raise ConfigError("experiment species must be distinct")
    experiment = ExperimentSpec(
        exp["a"], exp["b"],
        None if exp.get("a0") is None else float(exp["a0"]),
        None if exp.get("b0") is None else float(exp["b0"]),
    )

    grid = None
    if data.get("grid") is not None:
        g = data["grid"]
        _require_keys(g, {"t_max", "points", "spacing"}, "grid")
        try:
            grid = GridSpec(float(g["t_max"]), int(g["points"]),
                            str(g.get("spacing", "geometric")))
        except KeyError as exc:
            raise ConfigError(f"grid is missing {exc}") from None

    requests = []
    for item in data.get("invariants", []):
        _require_keys(item, {"kind", "pair", "expected_K"}, "invariant")
        pair = item.get("pair")
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or any(p not in net.names for p in pair)):
            raise ConfigError(f"invariant pair {pair!r} must name two network "
                              "species")
        K = item.get("expected_K")
        requests.append(InvariantRequest(
            str(item.get("kind")), (pair[0], pair[1]),
            None if K is None else float(K),
        ))

    engine = data.get("engine", "auto")
    if engine not in ("auto", "linear", "nonlinear", "closed-form"):
        raise ConfigError(f"unknown engine {engine!r}")
    balance = data.get("balance", "off")
    if balance not in ("off", "check", "enforce"):
        raise ConfigError(f"unknown balance mode {balance!r}")
    return Scenario(net, experiment, grid, tuple(requests), engine, balance)


def scenario_to_dict(sc: Scenario) -> dict:
    out = {
        "network": network_to_dict(sc.network),
        "experiment": {"a": sc.experiment.a, "b": sc.experiment.b},
        "engine": sc.engine,
        "balance": sc.balance,
    }
    if sc.experiment.a0 is not None:
        out["experiment"]["a0"] = sc.experiment.a0
    if sc.experiment.b0 is not None:
        out["experiment"]["b0"] = sc.experiment.b0
    if sc.grid is not None:
        out["grid"] = {"t_max": sc.grid.t_max, "points": sc.grid.points,
                       "spacing": sc.grid.spacing}
    if sc.invariants:
        out["invariants"] = []
        for req in sc.invariants:
            item = {"kind": req.kind, "pair": list(req.pair)}
            if req.expected_K is not None:
                item["expected_K"] = req.expected_K
            out["invariants"].append(item)
    return out


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------

def _resolve_engine(engine: str, net: ReactionNetwork) -> str:
    if engine == "auto":
        return "linear" if net.order_kind == ORDER_FIRST else "nonlinear"
    if engine == "linear" and net.order_kind != ORDER_FIRST:
        raise ConfigError("engine=linear requires an all-first-order network")
    return engine


def _default_times(net: ReactionNetwork, points: int = 400) -> np.ndarray:
    if net.order_kind == ORDER_FIRST:
        return default_time_grid(build_rate_matrix(net), points)
    rates = [r.k_forward for r in net.reactions]
    rates += [r.k_backward for r in net.reactions if r.reversible]
    t_max = 10.0 / min(rates)
    return np.concatenate(
        ([0.0], np.geomspace(1e-3 * t_max, t_max, points))
    )


def _closed_form_dual(net: ReactionNetwork, a: int, b: int,
                      times: np.ndarray) -> DualExperiment:
    """Dual experiment from an analytic solution, if one fits the network.

    Supported shapes: a single reversible first-order conversion, the chain
    A <-> B -> C, and the second-order systems 2A <-> B and 2A <-> 2B. The
    experiment's first species must be the reactant side of the formulas.
    """
    rxns = net.reactions

    def build(cols_a, cols_b):
        conc_a = np.column_stack([np.broadcast_to(c, times.shape) for c in cols_a])
        conc_b = np.column_stack([np.broadcast_to(c, times.shape) for c in cols_b])
        fa = Trajectory(times, conc_a, a, f"from {net.names[a]}", net)
        fb = Trajectory(times, conc_b, b, f"from {net.names[b]}", net)
        # every covered shape starts from one unit of conserved material
        return DualExperiment(fa, fb, a, b, conserved_total=1.0)

    if net.order_kind == ORDER_FIRST and net.n == 2 and len(rxns) == 1 \
            and rxns[0].reversible:
        u = rxns[0].reactants[0][0]
        v = rxns[0].products[0][0]
        if (a, b) != (u, v):
            raise ConfigError(
                "closed-form engine expects the experiment pair in the "
                "reactant -> product orientation"
            )
        sol = single_reversible(rxns[0].k_forward, rxns[0].k_backward, times)
        cols = {u: (sol.a_from_a, sol.a_from_b), v: (sol.b_from_a, sol.b_from_b)}
        order = sorted(cols)
        return build([cols[i][0] for i in order], [cols[i][1] for i in order])

    if net.order_kind == ORDER_FIRST and net.n == 3 and len(rxns) == 2:
        rev = [r for r in rxns if r.reversible]
        irr = [r for r in rxns if not r.reversible]
        if len(rev) == 1 and len(irr) == 1:
            u = rev[0].reactants[0][0]
            v = rev[0].products[0][0]
            w = irr[0].products[0][0]
            if irr[0].reactants[0][0] == v and w not in (u, v):
                if (a, b) != (u, v):
                    raise ConfigError(
                        "closed-form engine expects the experiment pair in "
                        "the reactant -> product orientation"
                    )
                sol = two_step_concentrations(
                    rev[0].k_forward, rev[0].k_backward, irr[0].k_forward, times
                )
                cols = {
                    u: (sol.a_from_a, sol.a_from_b),
                    v: (sol.b_from_a, sol.b_from_b),
                    w: (sol.c_from_a, sol.c_from_b),
                }
                order = sorted(cols)
                return build([cols[i][0] for i in order],
                             [cols[i][1] for i in order])

    if net.n == 2 and len(rxns) == 1 and rxns[0].reversible:
        reac = dict(rxns[0].reactants)
        prod = dict(rxns[0].products)
        if len(reac) == 1 and len(prod) == 1:
            (u, cu), = reac.items()
            (v, cv), = prod.items()
            if (a, b) != (u, v):
                raise ConfigError(
                    "closed-form engine expects the experiment pair in the "
                    "reactant -> product orientation"
                )
            if (cu, cv) == (2, 1):
                sol = nonlinear_2A_B(rxns[0].k_forward, rxns[0].k_backward, times)
                cols_a = {u: sol.a_from_a, v: sol.b_from_a}
                cols_b = {u: sol.a_from_b, v: (1.0 - sol.a_from_b) / 2.0}
                order = sorted(cols_a)
                return build([cols_a[i] for i in order],
                             [cols_b[i] for i in order])
            if (cu, cv) == (2, 2):
                sol = nonlinear_2A_2B(rxns[0].k_forward, rxns[0].k_backward, times)
                cols_a = {u: sol.a_from_a, v: sol.b_from_a}
                cols_b = {u: sol.a_from_b, v: sol.b_from_b}
                order = sorted(cols_a)
                return build([cols_a[i] for i in order],
                             [cols_b[i] for i in order])

    raise ConfigError("closed-form engine does not cover this network shape")


def _run_dual(net: ReactionNetwork, engine: str, a: int, b: int,
              times: np.ndarray, exp: ExperimentSpec) -> DualExperiment:
    if engine == "linear":
        return dual_experiment(net, a, b, times)
    if engine == "closed-form":
        return _closed_form_dual(net, a, b, times)
    return dual_experiment_nonlinear(net, a, b, exp.a0, exp.b0, times)


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _prepare(args) -> tuple:
    if args.config is None:
        raise ConfigError("--config is required")
    path = Path(args.config)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from None
    sc = parse_scenario(data, path.parent)
    if args.grid is not None:
        sc = Scenario(sc.network, sc.experiment, _parse_grid_flag(args.grid),
                      sc.invariants, sc.engine, sc.balance)
    if getattr(args, "engine", None):
        sc = Scenario(sc.network, sc.experiment, sc.grid, sc.invariants,
                      args.engine, sc.balance)
    if getattr(args, "balance", False):
        sc = Scenario(sc.network, sc.experiment, sc.grid, sc.invariants,
                      sc.engine, "enforce")
    return sc, Path(args.out)


def _parse_grid_flag(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("--grid expects tmax,points,spacing")
    return GridSpec(float(parts[0]), int(parts[1]), parts[2])


def _apply_balance(sc: Scenario) -> tuple:
    """Apply the scenario's balance mode; returns (network, cycle report or None)."""
    report = None
    net = sc.network
    if net.order_kind == ORDER_FIRST and sc.balance in ("check", "enforce"):
        report = check_cycle_conditions(net)
        if sc.balance == "enforce":
            net = balance_network(net)
    return net, report


def cmd_simulate(args) -> int:
    sc, out_dir = _prepare(args)
    if args.dump_config:
        print(json.dumps(scenario_to_dict(sc), indent=2, sort_keys=True))
        return EXIT_OK
    net, cycle_report = _apply_balance(sc)
    engine = _resolve_engine(sc.engine, net)
    times = sc.grid.times() if sc.grid else _default_times(net)
    a = net.index_of(sc.experiment.a)
    b = net.index_of(sc.experiment.b)
    dual = _run_dual(net, engine, a, b, times, sc.experiment)

    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}
    for tag, traj in (("from_" + _safe_name(sc.experiment.a), dual.from_a),
                      ("from_" + _safe_name(sc.experiment.b), dual.from_b)):
        path = out_dir / f"{tag}.csv"
        write_trajectory_csv(path, traj, net.names)
        files[tag] = path.name

    summary = {
        "engine": engine,
        "species": list(net.names),
        "experiment": {"a": sc.experiment.a, "b": sc.experiment.b},
        "grid": {"t_min": float(times[1]), "t_max": float(times[-1]),
                 "points": int(len(times))},
        "files": files,
    }
    if dual.conserved_total is not None:
        summary["conserved_total"] = dual.conserved_total
    if cycle_report is not None:
        summary["cycle_max_mismatch"] = cycle_report.max_mismatch
        summary["balance"] = sc.balance
    if args.oracle:
        summary["oracle"] = _oracle_check(net, engine, a, b, times, sc.experiment,
                                          dual)
    _write_json(out_dir / "summary.json", summary)
    print(f"wrote {', '.join(sorted(files.values()))} and summary.json "
          f"to {out_dir}")
    return EXIT_OK


def _oracle_check(net, engine, a, b, times, exp, dual) -> dict:
    """Re-run the experiment on an independent engine and report the gap."""
    if engine in ("linear", "closed-form"):
        other = "nonlinear"
    elif net.order_kind == ORDER_FIRST:
        other = "linear"
    else:
        other = "closed-form"
    ref = _run_dual(net, other, a, b, times, exp)
    diff = max(
        float(np.max(np.abs(dual.from_a.concentrations - ref.from_a.concentrations))),
        float(np.max(np.abs(dual.from_b.concentrations - ref.from_b.concentrations))),
    )
    return {"reference_engine": other, "max_abs_diff": diff}


def cmd_invariants(args) -> int:
    sc, out_dir = _prepare(args)
    if args.dump_config:
        print(json.dumps(scenario_to_dict(sc), indent=2, sort_keys=True))
        return EXIT_OK
    if not sc.invariants:
        raise ConfigError("scenario defines no invariants")
    net, _ = _apply_balance(sc)

    tol = args.tol
    if tol is None:
        if net.order_kind == ORDER_FIRST and sc.balance != "enforce":
            report = check_cycle_conditions(net)
            if not report.satisfied:
                raise ConfigError(
                    f"cycle conditions violated (max mismatch "
                    f"{report.max_mismatch:.3e}); pass --tol explicitly or "
                    "use --balance"
                )
        tol = DEFAULT_TOL

    engine = _resolve_engine(sc.engine, net)
    times = sc.grid.times() if sc.grid else _default_times(net)
    a = net.index_of(sc.experiment.a)
    b = net.index_of(sc.experiment.b)
    dual = _run_dual(net, engine, a, b, times, sc.experiment)

    reports = []
    for req in sc.invariants:
        pa = net.index_of(req.pair[0])
        pb = net.index_of(req.pair[1])
        if req.expected_K is not None:
            spec = InvariantSpec(req.kind, (pa, pb), req.expected_K,
                                 "user-supplied")
        else:
            spec = resolve_expected_K(net, req.kind, pa, pb)
        reports.append(evaluate_invariant(dual, spec, tol=tol))

    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {"engine": engine, "tol": tol,
               "reports": [r.to_dict() for r in reports]}
    _write_json(out_dir / "invariants.json", payload)
    ok = all(r.verdict for r in reports)
    for r in reports:
        state = "pass" if r.verdict else "FAIL"
        print(f"{state} {r.spec.kind} {sc.experiment.a}->{sc.experiment.b} "
              f"pair={r.spec.pair} K={r.spec.expected_K:.12g} "
              f"max_dev={r.max_rel_deviation:.3e}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_prove(args) -> int:
    if args.config is None:
        raise ConfigError("--config is required")
    net = load_network(Path(args.config))
    if net.order_kind != ORDER_FIRST:
        raise ConfigError("proofs require an all-first-order network")
    if args.pair is None:
        raise ConfigError("--pair A,B is required")
    names = args.pair.split(",")
    if len(names) != 2:
        raise ConfigError("--pair expects two comma-separated species names")
    for name in names:
        if name not in net.names:
            raise ConfigError(f"species {name!r} is not in the network")
    a = net.index_of(names[0])
    b = net.index_of(names[1])

    M = build_rate_matrix(net)
    subject = exact_balance(M) if args.balance else M
    report = prove_fixed_proportion(subject, a, b)

    payload = report.to_dict()
    payload["pair"] = [names[0], names[1]]
    payload["balanced"] = bool(args.balance)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "proof.json", payload)
    if report.verified:
        print(f"verified: {names[0]}->{names[1]} fixed proportion "
              f"K = {report.K} (exact)")
        return EXIT_OK
    print(f"NOT verified: first differing coefficient at degree "
          f"{report.failing_coefficient}; "
          f"{len(report.cycle_violations)} cycle violation(s)")
    for v in report.cycle_violations:
        cyc = "->".join(net.names[i] for i in v.cycle)
        print(f"  cycle {cyc}: forward {v.forward_product}, "
              f"backward {v.backward_product}, mismatch {v.mismatch}")
    return EXIT_FAILED


def cmd_fig1(args) -> int:
    net = butene_cycle()
    if args.balance:
        net = balance_network(net)
    grid = _parse_grid_flag(args.grid) if args.grid else GridSpec(2.0, 400, "geometric")
    times = grid.times()
    dual = dual_experiment(net, 0, 1, times)
    mask = times > 0
    t = times[mask]
    a_a = dual.from_a.species(0)[mask]
    b_a = dual.from_a.species(1)[mask]
    a_b = dual.from_b.species(0)[mask]
    b_b = dual.from_b.species(1)[mask]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "fig1.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,BA_over_AA,BB_over_AB,BA_over_AB\n")
        for row in zip(t, b_a / a_a, b_b / a_b, b_a / a_b):
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
    scan = overshoot_scan(dual.from_a, 0, 1)
    print(f"wrote {path} ({len(t)} rows); overshoot "
          f"{'detected' if scan.crossed else 'absent'}"
          + (f" at t={scan.crossing_times[0]:.4g}" if scan.crossed else ""))
    return EXIT_OK


def cmd_balance(args) -> int:
    if args.config is None:
        raise ConfigError("--config is required")
    net = load_network(Path(args.config))
    before = check_cycle_conditions(net)
    balanced = balance_network(net)
    after = check_cycle_conditions(balanced)
    changes = [
        abs(b.k_backward / a.k_backward - 1.0)
        for a, b in zip(net.reactions, balanced.reactions)
        if a.reversible
    ]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_network(balanced, out_dir / "balanced_network.json")
    _write_json(out_dir / "balance_report.json", {
        "max_mismatch_before": before.max_mismatch,
        "max_mismatch_after": after.max_mismatch,
        "max_relative_change": max(changes, default=0.0),
        "cycles": len(before.cycles),
    })
    print(f"cycle mismatch {before.max_mismatch:.3e} -> "
          f"{after.max_mismatch:.3e}; wrote balanced_network.json")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinvar",
        description="Dual-experiment kinetics: simulate reaction networks, "
                    "evaluate time-invariant ratios, and prove them exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engine=True):
        p.add_argument("--config", help="scenario or network JSON file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--grid", help="override grid as tmax,points,spacing")
        if engine:
            p.add_argument("--engine",
                           choices=["auto", "linear", "nonlinear", "closed-form"],
                           help="override the scenario engine")

    p_sim = sub.add_parser("simulate", help="write dual-experiment CSVs")
    common(p_sim)
    p_sim.add_argument("--balance", action="store_true",
                       help="balance cycle conditions before simulating")
    p_sim.add_argument("--oracle", action="store_true",
                       help="cross-check against an independent engine")
    p_sim.add_argument("--dump-config", action="store_true",
                       help="print the resolved scenario and exit")
    p_sim.set_defaults(func=cmd_simulate)

    p_inv = sub.add_parser("invariants", help="evaluate invariant ratios")
    common(p_inv)
    p_inv.add_argument("--tol", type=float,
                       help="verdict tolerance (required for unbalanced "
                            "networks)")
    p_inv.add_argument("--balance", action="store_true",
                       help="balance cycle conditions before evaluating")
    p_inv.add_argument("--dump-config", action="store_true",
                       help="print the resolved scenario and exit")
    p_inv.set_defaults(func=cmd_invariants)

    p_prove = sub.add_parser("prove", help="exact fixed-proportion proof")
    p_prove.add_argument("--config", help="network JSON file")
    p_prove.add_argument("--pair", help="species pair as a,b")
    p_prove.add_argument("--out", default=".", help="output directory")
    p_prove.add_argument("--balance", action="store_true",
                         help="exactly balance the network first (rational "
                              "arithmetic)")
    p_prove.set_defaults(func=cmd_prove)

    p_fig = sub.add_parser("fig1", help="butene ratio dataset "
                                        "(t, BA/AA, BB/AB, BA/AB)")
    p_fig.add_argument("--out", default=".", help="output directory")
    p_fig.add_argument("--grid", help="override grid as tmax,points,spacing")
    p_fig.add_argument("--balance", action="store_true",
                       help="balance the rate constants first")
    p_fig.set_defaults(func=cmd_fig1)

    p_bal = sub.add_parser("balance", help="repair cycle conditions of a "
                                           "network file")
    p_bal.add_argument("--config", help="network JSON file")
    p_bal.add_argument("--out", default=".", help="output directory")
    p_bal.set_defaults(func=cmd_balance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
