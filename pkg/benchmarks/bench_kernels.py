#!/usr/bin/env python3
"""Backend benchmark: numba kernels against the pure-numpy fallback.

Times the two hot paths (the absorption recursion that tabulates
halting times, and the Monte Carlo trial loop) on both backends and
prints the speedup.  The first numba call pays compilation; a warmup
round keeps that out of the timings.

Usage:
    python benchmarks/bench_kernels.py [--trials N] [--repeats N]
                                       [--epsilon E] [--delta-h D]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pumpwalk import DephasingChannel, WalkSpec
from pumpwalk.kernels import HAS_NUMBA, halting_mass, simulate_halts
from pumpwalk.walk import advance_probabilities


def time_best(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--epsilon", type=float, default=0.4)
    parser.add_argument("--delta-h", type=int, default=12)
    parser.add_argument("--tail", type=float, default=1e-12)
    args = parser.parse_args()

    spec = WalkSpec(channel=DephasingChannel(args.epsilon), delta_h=args.delta_h)
    p_adv = advance_probabilities(spec)
    backends = ["numpy"]
    if HAS_NUMBA:
        backends.insert(0, "numba")
        # compile both kernels before timing
        halting_mass(p_adv, False, 1e-6, 10**6, backend="numba")
        simulate_halts(0, 1000, p_adv, False, 10**6, backend="numba")
    else:
        print("numba not importable; timing the numpy fallback only")

    cases = {
        "halting table": lambda b: halting_mass(p_adv, False, args.tail, 10**6, backend=b),
        f"mc {args.trials} trials": lambda b: simulate_halts(
            0, args.trials, p_adv, False, 10**6, backend=b
        ),
    }

    mass, _ = halting_mass(p_adv, False, args.tail, 10**6)
    print(
        f"epsilon={args.epsilon} delta_h={args.delta_h} "
        f"table length={mass.size} rounds, best of {args.repeats}"
    )
    width = max(len(name) for name in cases)
    for name, fn in cases.items():
        times = {b: time_best(lambda: fn(b), args.repeats) for b in backends}
        line = f"{name:<{width}}  " + "  ".join(
            f"{b}: {times[b] * 1e3:9.3f} ms" for b in backends
        )
        if len(backends) == 2:
            line += f"  speedup: {times['numpy'] / times['numba']:6.1f}x"
        print(line)

    if len(backends) == 2:
        a = simulate_halts(7, 10000, p_adv, False, 10**6, backend="numba")
        b = simulate_halts(7, 10000, p_adv, False, 10**6, backend="numpy")
        print("backends agree bit for bit:", bool(np.array_equal(a, b)))


if __name__ == "__main__":
    main()
