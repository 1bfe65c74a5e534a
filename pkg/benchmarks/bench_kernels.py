"""Time the jitted loop kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both variants are imported directly from ``burgesslab._kernels``, so the
BURGESSLAB_BACKEND flag does not matter here.  Compilation is triggered once
before timing.
"""

import argparse
import time

import numpy as np

from burgesslab import _kernels as K
from burgesslab._accel import HAVE_NUMBA
from burgesslab.modular import prime_modulus


def _cases():
    pm = prime_modulus(10007)
    dlog = pm.dlog
    coef = np.array([3, 5, 7, 11], dtype=np.int64)
    fcoef = np.array([[0.1, 0.0], [0.33, 0.0], [0.71, 0.0], [0.05, 0.0]])
    roots = np.arange(1, 9, dtype=np.int64)
    mults = np.array([1, 1, 1, 1, 1, 1, 1, 1], dtype=np.int64)
    return [
        ("exact_phase_sum n=1e6", "exact_phase_sum", (coef, 10**6 + 3, dlog, 17, 10007, 0, 10**6, 0)),
        ("float_phase_sum n=1e6", "float_phase_sum", (fcoef, dlog, 17, 10007, 0, 10**6, 0)),
        ("complete_sum_hist q=10007", "complete_sum_hist", (dlog, roots, mults, 10007)),
        ("power_sum_table X=40 r=3 d=3", "power_sum_table", (40, 3, 3)),
        ("count_j_brute X=14 r=3 d=2", "count_j_brute", (14, 3, 2)),
    ]


def _best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba not installed: the loop column runs as plain Python")
    K.warmup()
    print(f"{'kernel':32s} {'numba (s)':>10s} {'numpy (s)':>10s} {'speedup':>8s}")
    for label, name, fargs in _cases():
        t_loop = _best(getattr(K, name + "_loop"), fargs, args.repeat)
        t_vec = _best(getattr(K, name + "_vec"), fargs, args.repeat)
        print(f"{label:32s} {t_loop:10.4f} {t_vec:10.4f} {t_vec / t_loop:8.2f}x")


if __name__ == "__main__":
    main()
