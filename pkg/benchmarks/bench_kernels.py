#!/usr/bin/env python3
"""Benchmark the numba kernel against the pure-numpy fallback.

Times the isochoric stepping workload that dominates engine runs (both
backends produce the same fourth-order update; see ottokiln._kernels).
Run from the repository root:

    python benchmarks/bench_kernels.py [--levels 51] [--steps 20000] [--repeats 5]
"""

import argparse
import math
import time

import numpy as np

from ottokiln._kernels import NUMBA_AVAILABLE, evolve_populations
from ottokiln.bath import bose_einstein


def workload(backend, levels, steps, repeats):
    omega, temperature, gamma0 = 1.5, 1.2, 0.5
    gamma = gamma0 * (bose_einstein(omega, temperature) + 1.0)
    boltz = math.exp(-omega / temperature)
    dt = 1.0 / (40.0 * gamma * levels)
    p0 = np.zeros(levels)
    p0[0] = 1.0
    # warm-up: triggers JIT compilation / matrix build outside the timed region
    evolve_populations(p0, gamma, boltz, dt, 10, 10, backend=backend)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        status, _, _, samples = evolve_populations(p0, gamma, boltz, dt, steps, steps, backend=backend)
        best = min(best, time.perf_counter() - start)
        assert status == 0
    return best, samples[-1]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, default=51)
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    results = {}
    backends = ["numpy"] + (["numba"] if NUMBA_AVAILABLE else [])
    for backend in backends:
        elapsed, final = workload(backend, args.levels, args.steps, args.repeats)
        results[backend] = (elapsed, final)
        rate = args.steps / elapsed
        print(f"{backend:>6}: {elapsed * 1e3:8.2f} ms for {args.steps} steps "
              f"({rate:,.0f} steps/s, {args.levels} levels)")

    if len(results) == 2:
        gap = float(np.abs(results["numba"][1] - results["numpy"][1]).max())
        speedup = results["numpy"][0] / results["numba"][0]
        print(f"numba speedup: {speedup:.1f}x; max |final-state difference|: {gap:.2e}")
    elif not NUMBA_AVAILABLE:
        print("numba not installed; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
