#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-Python/NumPy fallback.

Runs the contact integrator and the low-pass filter through both paths and
prints per-call timings. The jitted path is what `import crashsim` uses when
numba is available and CRASHSIM_NUMBA is not 0; the fallback is the exact
same code without compilation.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from crashsim import _kernels

MASS, DAMPING, STIFFNESS, GRAVITY = 0.241, 46.0, 7040.0, 9.81


def time_call(fn, *args, repeats: int) -> float:
    fn(*args)  # warm-up (JIT compile on the numba path)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_integrator(repeats: int) -> None:
    v0 = math.sqrt(2.0 * GRAVITY * 1.0)
    dt = 5e-5
    args = (MASS, DAMPING, STIFFNESS, GRAVITY, v0, 0.016, dt, 1, 20000)
    rows = [("njit" if _kernels.NUMBA_ENABLED else "njit (unavailable)",
             _kernels.integrate_contact),
            ("pure", _kernels._integrate_contact_impl)]
    print("contact integrator (1 m drop, 20 kHz, ~0.035 s contact):")
    times = {}
    for name, fn in rows:
        if fn is None:
            continue
        times[name] = time_call(fn, *args, repeats=repeats)
        print(f"  {name:5s} {times[name] * 1e3:9.3f} ms/call")
    if _kernels.NUMBA_ENABLED:
        print(f"  speedup {times['pure'] / times['njit']:.1f}x")


def bench_filter(repeats: int) -> None:
    rng = np.random.default_rng(0)
    signal = rng.standard_normal(200_000)
    k = math.tan(math.pi * 500.0 / 20000.0)
    print("low-pass filter (200k samples):")
    times = {}
    for name, fn in (("njit", _kernels.lowpass), ("pure", _kernels._lowpass_impl)):
        times[name] = time_call(fn, signal, k, k, repeats=repeats)
        print(f"  {name:5s} {times[name] * 1e3:9.3f} ms/call")
    if _kernels.NUMBA_ENABLED:
        print(f"  speedup {times['pure'] / times['njit']:.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    print(f"numba path enabled: {_kernels.NUMBA_ENABLED}")
    bench_integrator(args.repeats)
    bench_filter(args.repeats)


if __name__ == "__main__":
    main()
