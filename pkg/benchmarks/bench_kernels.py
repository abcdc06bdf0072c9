#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot kernels on representative problem sizes, plus one
end-to-end detection pass (the dominant consumer of the kernels), and
prints the speedups.  Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from chebshock._kernels import reference

try:
    from chebshock._kernels import _chebcore as compiled
except ImportError:
    compiled = None


def timeit(fn, *args, repeat=200):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def row(name, ref_time, cmp_time):
    if cmp_time is None:
        print(f"{name:34s} {ref_time*1e6:10.1f} us          (no extension)")
    else:
        print(
            f"{name:34s} {ref_time*1e6:10.1f} us {cmp_time*1e6:10.1f} us "
            f"{ref_time/cmp_time:6.1f}x"
        )


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'fallback':>13s} {'compiled':>13s} {'speedup':>7s}")
    for order, npts in ((60, 241), (60, 2001), (256, 1025)):
        c = rng.normal(size=order + 1)
        x = np.linspace(-1, 1, npts)
        row(
            f"cheb_eval       N={order:3d} pts={npts}",
            timeit(reference.cheb_eval, c, x),
            timeit(compiled.cheb_eval, c, x) if compiled else None,
        )
        rows = rng.normal(size=(12, order + 1))
        row(
            f"cheb_der_eval12 N={order:3d} pts={npts}",
            timeit(reference.cheb_der_eval_many, rows, x, repeat=50),
            timeit(compiled.cheb_der_eval_many, rows, x, repeat=50)
            if compiled
            else None,
        )
    for p, npts in ((3, 481), (56, 481), (225, 481)):
        y = np.linspace(-6, 6, npts)
        row(
            f"hermite_rho     p={p:3d} pts={npts}",
            timeit(reference.hermite_rho, p, y),
            timeit(compiled.hermite_rho, p, y) if compiled else None,
        )


def bench_detection():
    from chebshock import edges, spectral

    grid = spectral.build_grid(60)
    nodal = ((grid.nodes > -0.7) & (grid.nodes < -0.2)).astype(float)
    field = spectral.SpectralField.from_nodal(grid, nodal)

    def full_detection():
        det = edges.DetectionConfig()
        fit, _ = edges.classify_smoothness(field.modal, det)
        thr = edges.resolve_thresholds(det, 1.0)
        prof = edges.minmod_profile(field.modal, det.factors())
        cands = edges.find_peaks(prof, grid, thr)
        edges.reject_spurious(prof, cands, grid, thr, fit)

    t = timeit(full_detection, repeat=10)
    from chebshock._kernels import BACKEND

    print(f"\nfull tophat detection pass ({BACKEND} backend): {t*1e3:.1f} ms")


if __name__ == "__main__":
    if compiled is None:
        print("compiled extension not built; timing the fallback only\n")
    bench_kernels()
    bench_detection()
