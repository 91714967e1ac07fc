#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends.

Runs each workload in the current process, then re-launches itself with
SETLAW_NUMBA flipped to time the other code path, and prints a
comparison table.  Usage:

    python benchmarks/bench_kernels.py            # both backends
    python benchmarks/bench_kernels.py --single   # current backend only
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def workloads():
    import setlaw
    from setlaw import _kernels as k
    from setlaw.experiments import ExperimentConfig, experiment_fd_slln
    from setlaw.randomsets import TwoSetMix

    rng = np.random.default_rng(0)

    def bench_dist():
        total = 0.0
        for _ in range(2000):
            m = int(rng.integers(2, 8))
            d = int(rng.integers(2, 5))
            g = np.ascontiguousarray(rng.normal(size=(m, d)))
            p = rng.normal(size=d)
            for code in (k.L1, k.L2, k.LINF):
                st, v = k.dist_to_hull(g, p, code, k.DEFAULT_MAX_ITER)
                total += v
        return total

    def bench_directed():
        total = 0.0
        for _ in range(300):
            d = int(rng.integers(2, 5))
            ga = np.ascontiguousarray(rng.normal(size=(int(rng.integers(3, 9)), d)))
            gb = np.ascontiguousarray(rng.normal(size=(int(rng.integers(3, 9)), d)))
            for code in (k.L1, k.L2, k.LINF):
                st, v = k.directed_hausdorff_kernel(ga, gb, code, k.DEFAULT_MAX_ITER)
                total += v
        return total

    def bench_prune():
        total = 0
        for _ in range(60):
            g = np.ascontiguousarray(rng.uniform(-1, 1, size=(120, 3)))
            st, mask = k.extreme_mask(g, 1e-9, k.DEFAULT_MAX_ITER)
            total += int(mask.sum())
        return total

    def bench_trajectory():
        sp = setlaw.Space(2, "l2")
        v = setlaw.Polytope(sp, [[0, 0], [1, 0], [0, 1]])
        w = setlaw.Polytope(sp, [[0, 0], [-1, 0], [0, -1]])
        cfg = ExperimentConfig(
            process=TwoSetMix(v, w, 0.5),
            horizon=2000,
            n_trajectories=4,
            mode="exact",
            master_seed=1,
            prune_threshold=64,
        )
        rep = experiment_fd_slln(cfg)
        return rep.aggregates[-1]["median"]

    return [
        ("point-to-hull distances (6000 solves, 3 norms)", bench_dist),
        ("directed hausdorff sweeps (900 pairs)", bench_directed),
        ("hull pruning (60 clouds of 120 points)", bench_prune),
        ("exact trajectories (4 x 2000 steps)", bench_trajectory),
    ]


def run_current():
    from setlaw import backend_name

    results = {}
    for name, fn in workloads():
        fn()  # warm-up (JIT compilation on the numba path)
        t0 = time.perf_counter()
        fn()
        results[name] = time.perf_counter() - t0
    return backend_name(), results


def main():
    backend, mine = run_current()
    if "--single" in sys.argv or os.environ.get("_SETLAW_BENCH_CHILD"):
        print(json.dumps({"backend": backend, "results": mine}))
        return

    other_flag = "0" if backend == "numba" else "1"
    env = dict(os.environ, SETLAW_NUMBA=other_flag, _SETLAW_BENCH_CHILD="1")
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    child = json.loads(proc.stdout.strip().splitlines()[-1])
    other_backend, theirs = child["backend"], child["results"]

    width = max(len(n) for n in mine) + 2
    print(f"{'workload':<{width}}{backend:>12}{other_backend:>12}{'ratio':>9}")
    for name, t in mine.items():
        o = theirs[name]
        ratio = o / t if t > 0 else float("inf")
        print(f"{name:<{width}}{t:>11.3f}s{o:>11.3f}s{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
