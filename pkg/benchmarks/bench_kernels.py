"""Time the numba kernels against the pure-numpy ones.

    python benchmarks/bench_kernels.py [--repeat 20]

Each kernel is called once before timing so compilation is not counted.
"""
import argparse
import time

import numpy as np

from meixner import _kernels, poly1d
from meixner.core import make_params
from meixner.fock import _orbit_index


def cases():
    rng = np.random.default_rng(0)
    a, b = poly1d.recurrence_coefficients(make_params(1.0), 1.0, 64)
    x = rng.standard_normal(20000)
    z = rng.uniform(-20, 20, 20000) + 1j * rng.uniform(-20, 20, 20000)
    inv, counts = _orbit_index(4, 6)
    flat = rng.standard_normal((64, 4 ** 6))
    return {
        "three_term": (x, a, b, 40),
        "basis_moments": (a, b, 60),
        "log_abs_gamma": (z,),
        "orbit_mean": (flat, inv, counts),
    }


def timed(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    repeat = ap.parse_args().repeat

    if _kernels.NUMBA_KERNELS is None:
        print("numba is not installed; only the numpy kernels can run")
    print(f"{'kernel':15s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>9s} {'max diff':>10s}")
    for name, args in cases().items():
        t_np = timed(_kernels.NUMPY_KERNELS[name], args, repeat)
        if _kernels.NUMBA_KERNELS is None:
            print(f"{name:15s} {1e3 * t_np:12.3f}")
            continue
        t_nb = timed(_kernels.NUMBA_KERNELS[name], args, repeat)
        diff = np.max(np.abs(_kernels.NUMPY_KERNELS[name](*args) - _kernels.NUMBA_KERNELS[name](*args)))
        print(f"{name:15s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:9.2f} {diff:10.2e}")


if __name__ == "__main__":
    main()
