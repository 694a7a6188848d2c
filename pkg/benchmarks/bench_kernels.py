#!/usr/bin/env python3
"""Compare the JIT-compiled kernels against the pure-numpy fallback.

Runs each kernel in two child processes (FOLDNET_NUMBA=1 and =0) and prints a
side-by-side table. Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json
import sys
import time

import numpy as np

from foldnet import kernels

repeats = int(sys.argv[1])


def best_of(fn, *args):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


kernels.warmup()  # pay JIT compilation up front

results = {"jit": kernels.JIT_ENABLED}

results["schedule_offsets(L=200000,t=7)"] = best_of(kernels.schedule_offsets, 200000, 7)

offsets = kernels.schedule_offsets(3000, 4)
results["dag_edge_arrays(L=3000,t=4)"] = best_of(kernels.dag_edge_arrays, offsets)

eu, ev = kernels.dag_edge_arrays(offsets)
n = 3002
order = np.argsort(ev, kind="stable")
src = eu[order]
counts = np.bincount(ev, minlength=n)
ptr = np.zeros(n + 1, dtype=np.int64)
np.cumsum(counts, out=ptr[1:])
results[f"trophic_sweep(n=3002,m={len(eu)})"] = best_of(kernels.trophic_sweep, n, ptr, src)

levels = kernels.trophic_sweep(n, ptr, src)
results[f"distance_moments(m={len(eu)})"] = best_of(kernels.distance_moments, levels, eu, ev)

print(json.dumps(results))
"""


def run_child(numba_flag: str, repeats: int) -> dict:
    env = dict(os.environ, FOLDNET_NUMBA=numba_flag)
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, str(repeats)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print("timing fallback (FOLDNET_NUMBA=0)...")
    fallback = run_child("0", args.repeats)
    print("timing jit (FOLDNET_NUMBA=1)...")
    jitted = run_child("1", args.repeats)

    if not jitted.pop("jit"):
        print("note: numba unavailable; both columns ran the fallback")
    fallback.pop("jit")

    name_w = max(len(k) for k in fallback)
    print(f"\n{'kernel':<{name_w}}  {'numpy/python':>14}  {'numba':>14}  {'speedup':>8}")
    for name in fallback:
        fb = fallback[name]
        jt = jitted[name]
        ratio = fb / jt if jt > 0 else float("inf")
        print(f"{name:<{name_w}}  {fb * 1e3:>12.3f}ms  {jt * 1e3:>12.3f}ms  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
