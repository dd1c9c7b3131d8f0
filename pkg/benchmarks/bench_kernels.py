"""Benchmark the compiled kernels against the pure numpy/scipy fallback.

Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from polysym import kernels
from polysym.closing import build_closing
from polysym.fingerprint import tagged_midpoints
from polysym.generate import generate_diagram
from polysym.pipeline import build_symmetry_matrix, stack_symmetric
from polysym.fingerprint import edge_symmetry
from polysym.pointgroup import rotation_matrix


def timeit(fn, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref():
    print("== rref (Gauss-Jordan, stacked closing system) ==")
    for points in (5, 10, 20):
        d = generate_diagram("Oh", points=points, seed=3)
        _, orbs = edge_symmetry(d)
        sys = build_closing(d)
        s = build_symmetry_matrix(orbs, sys.edge_ids)
        m = stack_symmetric(sys.M, s)
        thresh = 1e-9 * float(np.abs(m).max())
        rows, cols = m.shape

        def run_pure():
            kernels.pure_rref_inplace(np.array(m, order="C"), thresh)

        t_pure = timeit(run_pure)
        line = f"  {rows:5d} x {cols:4d}: pure {t_pure * 1e3:8.1f} ms"
        if kernels.compiled_available():
            from polysym import _ckern

            def run_compiled():
                _ckern.rref_inplace(np.array(m, order="C"), thresh)

            t_c = timeit(run_compiled)
            line += f" | compiled {t_c * 1e3:8.1f} ms | speedup {t_pure / t_c:5.1f}x"
        print(line)


def bench_match():
    print("== match_permutation (tagged nearest-neighbor) ==")
    for points in (5, 10, 20):
        d = generate_diagram("Oh", points=points, seed=3)
        s = tagged_midpoints(d)
        pts = s.points - s.points.mean(axis=0)
        tags = s.tags
        q = rotation_matrix(np.array([0.0, 0.0, 1.0]), np.pi / 2)
        eps = 1e-4 * float(np.linalg.norm(pts.max(0) - pts.min(0)))
        center = np.zeros(3)

        def run_pure():
            for _ in range(10):
                kernels.pure_match_permutation(pts, tags, q, center, eps)

        t_pure = timeit(run_pure)
        line = f"  n={len(pts):5d} (10 ops): pure {t_pure * 1e3:8.1f} ms"
        if kernels.compiled_available():
            from polysym import _ckern
            cpts = np.ascontiguousarray(pts)
            cq = np.ascontiguousarray(q)

            def run_compiled():
                for _ in range(10):
                    _ckern.match_permutation(cpts, tags, cq, center, eps)

            t_c = timeit(run_compiled)
            line += f" | compiled {t_c * 1e3:8.1f} ms | speedup {t_pure / t_c:5.1f}x"
        print(line)


if __name__ == "__main__":
    print(f"active backend: {kernels.backend_name()} "
          f"(compiled available: {kernels.compiled_available()})")
    bench_rref()
    bench_match()
