#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the three hot functions on family-triple data (the shapes the orbit
search actually hits) and one end-to-end orbit comparison with whichever
backend is active in this process.  Run after an editable install:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from cartanframes import kernels
from cartanframes.kernels import _numpy as numpy_backend
from cartanframes.liealg import random_orthogonal
from cartanframes.threedim import Params3D, family_triple
from cartanframes.triples import curvature_full, orbit_equivalent, pair_indices, act_orthogonal

try:
    from cartanframes.kernels import _speedups as compiled_backend
except ImportError:
    compiled_backend = None


def timeit(fn, args, repeat=5, number=2000):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def main():
    rng = np.random.default_rng(7)
    t = family_triple(Params3D(0.0, 1.3, -0.7))
    target = family_triple(Params3D(0.0, 1.3, 0.4))
    g_on = np.ascontiguousarray(t.isotropy.orthonormalized())
    conn = np.ascontiguousarray(t.connection)
    curv = np.ascontiguousarray(curvature_full(t))
    proj = np.ascontiguousarray(numpy_backend.span_projector(target.isotropy.orthonormalized()))
    conn_t = np.ascontiguousarray(target.connection)
    curv_t = np.ascontiguousarray(target.curvature)
    q = np.ascontiguousarray(random_orthogonal(3, rng))
    pairs = pair_indices(3)
    rows = np.array([i for i, _ in pairs], dtype=np.intp)
    cols = np.array([j for _, j in pairs], dtype=np.intp)
    c6 = rng.standard_normal((6, 6, 6))
    c6 = np.ascontiguousarray(c6 - np.swapaxes(c6, 1, 2))

    cases = [
        ("act_triple", (g_on, conn, curv, q)),
        ("orbit_residual", (g_on, conn, curv, proj, conn_t, curv_t, q, rows, cols)),
        ("jacobi_residual_max (dim 6)", (c6,)),
    ]

    print(f"active backend: {kernels.backend_name()}")
    header = f"{'kernel':32s} {'numpy':>12s} {'compiled':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, args in cases:
        fn_name = name.split()[0] if "(" in name else name
        base = timeit(getattr(numpy_backend, fn_name), args)
        if compiled_backend is None:
            print(f"{name:32s} {base * 1e6:10.1f} us {'-':>12s} {'-':>9s}")
            continue
        fast = timeit(getattr(compiled_backend, fn_name), args)
        print(f"{name:32s} {base * 1e6:10.1f} us {fast * 1e6:10.1f} us {base / fast:8.1f}x")

    # end to end: one full orbit comparison with the active backend
    mate = act_orthogonal(t, random_orthogonal(3, rng))
    start = time.perf_counter()
    verdict = orbit_equivalent(t, mate, seed=1)
    elapsed = time.perf_counter() - start
    print(f"\norbit_equivalent (one constructed mate, backend "
          f"{kernels.backend_name()}): {elapsed * 1e3:.1f} ms -> {verdict.kind}")
    print("rerun with CARTANFRAMES_DISABLE_SPEEDUPS=1 to time the fallback end to end")


if __name__ == "__main__":
    main()
