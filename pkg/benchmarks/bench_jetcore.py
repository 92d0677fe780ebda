#!/usr/bin/env python3
"""Benchmark the compiled jet kernels against the pure-Python fallback.

Measures the raw kernel operations (both backends live side by side in
one process) and the end-to-end contour/identity pipeline (run in
subprocesses, since the backend is chosen at import time via the
CONTOURGEOM_PURE_PYTHON environment variable).

Usage: python3 benchmarks/bench_jetcore.py [--quick]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from contourgeom import _jetcore_py  # noqa: E402

try:
    from contourgeom import _jetcore
except ImportError:
    _jetcore = None


def time_op(fn, args, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    a = rng.standard_normal(10)
    b = rng.standard_normal(10)
    dp = rng.standard_normal(10)
    dq = rng.standard_normal(10)
    dp[0] = dq[0] = 0.0
    mi = np.array([0, 1, 0, 2, 1, 0, 3, 1], dtype=np.int64)
    mj = np.array([0, 0, 1, 0, 1, 2, 0, 2], dtype=np.int64)
    mc = rng.standard_normal(8)
    u = rng.standard_normal(5)
    w = rng.standard_normal(5)
    ops = [
        ("jet2_mul", (a, b)),
        ("jet2_compose", (a, dp, dq)),
        ("poly_shift2", (mi, mj, mc, 0.3, -0.7)),
        ("jet1_mul", (u, w)),
    ]
    backends = [("python", _jetcore_py)]
    if _jetcore is not None:
        backends.append(("compiled", _jetcore))
    print(f"{'kernel':<14}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for op, args in ops:
        times = [time_op(getattr(mod, op), args, repeat) for _, mod in backends]
        row = f"{op:<14}" + "".join(f"{t * 1e6:>12.2f}us" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


PIPELINE = r"""
import time
import numpy as np
from contourgeom import backend_name
from contourgeom.catalog import random_cubic_monge
from contourgeom.contour import contour_line, find_contour_cusps, trace_singular_set
from contourgeom.identities import check_asymptotic_identities, check_cusp_formulas
from contourgeom.projection import build_projection, view_map
from contourgeom.surface import TangentDirection

rng = np.random.default_rng(7)
t0 = time.perf_counter()
for _ in range(N):
    patch, _ = random_cubic_monge(rng)
    d = TangentDirection((0.0, 0.0), (0.0, 1.0))
    vm = view_map(build_projection(patch, d))
    trace = trace_singular_set(vm, (0.0, 0.0), 0.3)
    contour_line(trace, vm)
    find_contour_cusps(trace, vm)
    check_asymptotic_identities(patch, d, "traced")
    check_cusp_formulas(patch, d, "closed")
print(f"{backend_name():>10}: {time.perf_counter() - t0:.3f}s for N={N} traced cases")
"""


def bench_pipeline(n):
    for env_extra in ({}, {"CONTOURGEOM_PURE_PYTHON": "1"}):
        env = dict(os.environ, **env_extra)
        env["PYTHONPATH"] = (
            os.path.join(os.path.dirname(__file__), "..", "src")
            + os.pathsep
            + env.get("PYTHONPATH", "")
        )
        subprocess.run([sys.executable, "-c", f"N = {n}\n" + PIPELINE], env=env, check=True)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    repeat = 2000 if args.quick else 20000
    n = 5 if args.quick else 40
    print("== raw kernels ==")
    bench_kernels(repeat)
    print("\n== traced pipeline (per-backend subprocess) ==", flush=True)
    bench_pipeline(n)


if __name__ == "__main__":
    main()
