"""Hot loops with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and the environment variable
``SPINVERTEX_NUMBA`` is not set to ``0``.  Both paths are always importable
as ``*_numba`` / ``*_numpy`` so they can be compared directly.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = [
    "USE_NUMBA",
    "HAVE_NUMBA",
    "diagonal_transfer",
    "configuration_sum",
    "diagonal_transfer_numpy",
    "configuration_sum_numpy",
    "diagonal_transfer_numba",
    "configuration_sum_numba",
]

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and os.environ.get("SPINVERTEX_NUMBA", "1") != "0"


def _digits(N: int, n: int, L: int) -> np.ndarray:
    """Base-n digits of 0..N-1, most significant first, shape (N, L)."""
    idx = np.arange(N)
    out = np.empty((N, L), dtype=np.int64)
    for m in range(L - 1, -1, -1):
        out[:, m] = idx % n
        idx //= n
    return out


# --------------------------------------------------------------------------
# numpy


def diagonal_transfer_numpy(Wv: np.ndarray, Wh: np.ndarray, L: int) -> np.ndarray:
    n = Wv.shape[0]
    N = n**L
    D = _digits(N, n, L)
    T = np.ones((N, N), dtype=complex)
    for m in range(L):
        a = D[:, m][:, None]
        T *= Wv[a, D[:, m][None, :]]
        T *= Wh[a, D[:, (m + 1) % L][None, :]]
    return T


def configuration_sum_numpy(Wv: np.ndarray, Wh: np.ndarray, L: int,
                            chunk: int = 1 << 16) -> complex:
    n = Wv.shape[0]
    sites = L * L
    total = 0j
    N = n**sites
    for start in range(0, N, chunk):
        stop = min(start + chunk, N)
        idx = np.arange(start, stop)
        s = np.empty((stop - start, L, L), dtype=np.int64)
        for p in range(sites - 1, -1, -1):
            s[:, p // L, p % L] = idx % n
            idx //= n
        up = np.roll(s, -1, axis=1)           # s[t+1, m]
        diag = np.roll(up, -1, axis=2)        # s[t+1, m+1]
        w = Wv[s, up] * Wh[s, diag]
        total += w.reshape(stop - start, -1).prod(axis=1).sum()
    return total


# --------------------------------------------------------------------------
# numba


@njit(cache=True)
def diagonal_transfer_numba(Wv, Wh, L):
    n = Wv.shape[0]
    N = n**L
    T = np.empty((N, N), dtype=np.complex128)
    a = np.empty(L, dtype=np.int64)
    b = np.empty(L, dtype=np.int64)
    for ia in range(N):
        r = ia
        for m in range(L - 1, -1, -1):
            a[m] = r % n
            r //= n
        for ib in range(N):
            r = ib
            for m in range(L - 1, -1, -1):
                b[m] = r % n
                r //= n
            acc = 1.0 + 0.0j
            for m in range(L):
                acc *= Wv[a[m], b[m]] * Wh[a[m], b[(m + 1) % L]]
            T[ia, ib] = acc
    return T


@njit(cache=True)
def configuration_sum_numba(Wv, Wh, L):
    n = Wv.shape[0]
    sites = L * L
    s = np.zeros(sites, dtype=np.int64)
    total = 0.0 + 0.0j
    N = n**sites
    for _ in range(N):
        acc = 1.0 + 0.0j
        for t in range(L):
            t1 = (t + 1) % L
            for m in range(L):
                m1 = (m + 1) % L
                v = s[t * L + m]
                acc *= Wv[v, s[t1 * L + m]] * Wh[v, s[t1 * L + m1]]
        total += acc
        # odometer increment, last site fastest
        p = sites - 1
        while p >= 0:
            s[p] += 1
            if s[p] < n:
                break
            s[p] = 0
            p -= 1
    return total


if USE_NUMBA:
    diagonal_transfer = diagonal_transfer_numba
    configuration_sum = configuration_sum_numba
else:
    diagonal_transfer = diagonal_transfer_numpy
    configuration_sum = configuration_sum_numpy
