"""Timing comparison of the two kernel backends.

The package's inner loops (B-spline design matrix, periodogram, distance
matrices) ship in two versions: compiled with numba's @njit and pure numpy,
selected by the TSBOOST_BACKEND environment variable at import time. This
script runs every kernel under both backends in separate subprocesses and
prints a side-by-side table.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def make_inputs():
    rng = np.random.default_rng(7)
    return {
        "design": (
            np.sort(rng.uniform(0.0, 1.0, size=2000)),
            np.linspace(-0.3, 1.3, 48),
            3,
        ),
        "periodogram": (rng.normal(size=400),),
        "cdist_euclidean": (rng.normal(size=(360, 50)), rng.normal(size=(6, 50))),
        "cdist_penrose": (rng.normal(size=(360, 50)), rng.normal(size=(6, 50))),
    }


def time_kernel(func, args, repeats):
    func(*args)  # warmup; also triggers jit compilation
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def run_single(repeats):
    from tsboost import _kernels

    inputs = make_inputs()
    kernels = {
        "design": _kernels.bspline_design,
        "periodogram": _kernels.periodogram_ordinates,
        "cdist_euclidean": _kernels.cdist_euclidean,
        "cdist_penrose": _kernels.cdist_penrose_radicand,
    }
    timings = {name: time_kernel(func, inputs[name], repeats)
               for name, func in kernels.items()}
    print(json.dumps({"backend": _kernels.BACKEND, "timings": timings}))


def run_comparison(repeats):
    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, TSBOOST_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__),
             "--single", "--repeats", str(repeats)],
            env=env, capture_output=True, text=True, check=True,
        )
        payload = json.loads(proc.stdout)
        if payload["backend"] != backend:
            raise RuntimeError(f"{backend} backend unavailable, got {payload['backend']}")
        results[backend] = payload["timings"]

    width = max(len(k) for k in results["numba"]) + 2
    print(f"{'kernel':<{width}} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name in results["numba"]:
        tn = results["numba"][name]
        tp = results["numpy"][name]
        print(f"{name:<{width}} {tn * 1e6:>10.1f}us {tp * 1e6:>10.1f}us {tp / tn:>8.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--single", action="store_true",
                        help="time the currently active backend and emit JSON")
    args = parser.parse_args()
    if args.single:
        run_single(args.repeats)
    else:
        run_comparison(args.repeats)


if __name__ == "__main__":
    main()
