#!/usr/bin/env python3
"""Benchmark the compiled extension against the pure Python fallback.

Times the three hot kernels on representative workloads:

  * Hardy kernel on a large radius grid (the brute-force oracle load),
  * ODE-inequality residual on a window grid,
  * one full shooting run of the radial eigen-ODE.

Usage: python benchmarks/bench_backends.py [--size 4000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from hebound import backend
from hebound.kernelmath import validate


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=4_000_000, help="grid points")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    prm = validate(3.0, 2, 1.5, 1.0, -1.0)
    rs = np.linspace(0.0, 1.0, args.size + 2)[1:-1]
    xs = np.geomspace(1e-8, 0.6, args.size)
    lam = 9.8315  # near the first eigenvalue for p=3, n=2, R=1

    backends = [("python", backend.get_backend("python"))]
    if backend.HAVE_COMPILED:
        backends.append(("compiled", backend.get_backend("compiled")))
    else:
        print("note: compiled extension not built; timing the fallback only")

    tasks = [
        ("hardy kernel grid", lambda be: be.hardy_kernel_grid(rs, prm)),
        ("residual grid", lambda be: be.supersolution_residual_x_grid(xs, 3.0, -1.0)),
        ("shooting run", lambda be: be.shoot(3.0, 2.0, lam, 1e-6, 1.0, 1e-12, True)),
    ]

    results = {}
    for task_name, task in tasks:
        for be_name, be in backends:
            results[(task_name, be_name)] = best_of(args.repeat, lambda: task(be))

    width = max(len(t) for t, _ in tasks)
    header = f"{'task':<{width}}  {'python':>12}"
    if backend.HAVE_COMPILED:
        header += f"  {'compiled':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for task_name, _ in tasks:
        py = results[(task_name, "python")]
        line = f"{task_name:<{width}}  {py * 1e3:>10.2f}ms"
        if backend.HAVE_COMPILED:
            cc = results[(task_name, "compiled")]
            line += f"  {cc * 1e3:>10.2f}ms  {py / cc:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
