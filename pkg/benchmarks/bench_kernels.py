"""Compare the numba and numpy paths of the two hot kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  The first numba call
includes compilation and is reported separately.
"""
import argparse
import time

import numpy as np

from spinvertex import kernels
from spinvertex.models import make_model


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
        return

    m = make_model("potts", n=3)
    Wv = np.ascontiguousarray(m.vertical(0.2))
    Wh = np.ascontiguousarray(m.horizontal(0.2))

    cases = [
        ("diagonal_transfer n=3 L=6", kernels.diagonal_transfer_numpy,
         kernels.diagonal_transfer_numba, (Wv, Wh, 6)),
        ("diagonal_transfer n=3 L=7", kernels.diagonal_transfer_numpy,
         kernels.diagonal_transfer_numba, (Wv, Wh, 7)),
        ("configuration_sum n=2 L=4", kernels.configuration_sum_numpy,
         kernels.configuration_sum_numba, (Wv[:2, :2].copy(), Wh[:2, :2].copy(), 4)),
        ("configuration_sum n=3 L=3", kernels.configuration_sum_numpy,
         kernels.configuration_sum_numba, (Wv, Wh, 3)),
    ]
    print(f"{'kernel':32s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s} {'jit [s]':>8s} {'rel diff':>9s}")
    for label, f_np, f_nb, a in cases:
        t0 = time.perf_counter()
        r_nb = f_nb(*a)
        jit = time.perf_counter() - t0
        r_np = f_np(*a)
        t_np = best_of(lambda: f_np(*a), args.repeat)
        t_nb = best_of(lambda: f_nb(*a), args.repeat)
        r_np, r_nb = np.asarray(r_np), np.asarray(r_nb)
        diff = float(np.max(np.abs(r_np - r_nb)) / np.max(np.abs(r_np)))
        print(f"{label:32s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {jit:8.2f} {diff:9.1e}")


if __name__ == "__main__":
    main()
