#!/usr/bin/env python3
"""Benchmark the adaptive integrator with and without the compiled kernels.

The kernel implementation is chosen once at import time from the
``KINVAR_NO_NUMBA`` environment variable, so each arm runs in its own
subprocess.  The workload is a reversible chain with alternating first- and
second-order steps, integrated over a geometric grid; both arms share the
problem and the timing protocol (one warm-up call, then best-of-N).

Usage: python3 benchmarks/bench_integrate.py [--species N] [--repeats R]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def build_problem(n_species: int):
    import numpy as np
    from kinvar import IntegratorConfig, integrate, make_network, Reaction

    rng = np.random.default_rng(20240817)
    names = [f"S{i}" for i in range(n_species)]
    reactions = []
    for i in range(n_species - 1):
        kf, kb = rng.uniform(0.5, 4.0, size=2)
        order = 2 if i % 3 == 0 else 1
        reactions.append(Reaction(
            reactants=((i, order),),
            products=((i + 1, 1),),
            k_forward=float(kf),
            k_backward=float(kb),
        ))
    net = make_network(names, reactions)
    c0 = np.zeros(n_species)
    c0[0] = 1.0
    times = np.concatenate(([0.0], np.geomspace(1e-3, 20.0, 200)))
    cfg = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-11)
    return net, c0, times, cfg


def worker(n_species: int, repeats: int) -> None:
    from kinvar import NUMBA_ENABLED, integrate

    net, c0, times, cfg = build_problem(n_species)
    integrate(net, c0, times, cfg)  # warm-up (JIT compile on the numba arm)
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        traj = integrate(net, c0, times, cfg)
        samples.append(time.perf_counter() - start)
    checksum = float(traj.concentrations[-1].sum())
    print(json.dumps({
        "numba": NUMBA_ENABLED,
        "best_s": min(samples),
        "mean_s": sum(samples) / len(samples),
        "checksum": checksum,
    }))


def run_arm(no_numba: bool, args) -> dict:
    env = dict(os.environ)
    env["KINVAR_NO_NUMBA"] = "1" if no_numba else "0"
    out = subprocess.run(
        [sys.executable, __file__, "--worker",
         "--species", str(args.species), "--repeats", str(args.repeats)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--species", type=int, default=40)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        worker(args.species, args.repeats)
        return 0

    fallback = run_arm(True, args)
    compiled = run_arm(False, args)
    if not compiled["numba"]:
        print("note: numba unavailable, both arms ran the numpy fallback")
    drift = abs(fallback["checksum"] - compiled["checksum"])
    print(f"problem: {args.species}-species chain, 200 output points, "
          f"rtol 1e-8")
    print(f"numpy fallback  best {fallback['best_s'] * 1e3:8.2f} ms   "
          f"mean {fallback['mean_s'] * 1e3:8.2f} ms")
    print(f"numba kernels   best {compiled['best_s'] * 1e3:8.2f} ms   "
          f"mean {compiled['mean_s'] * 1e3:8.2f} ms")
    print(f"speedup (best): {fallback['best_s'] / compiled['best_s']:.1f}x, "
          f"final-state agreement {drift:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
