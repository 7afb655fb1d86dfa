"""Permutator, Lax operator, R-matrix and transfer matrices.

Tensor convention: the composite index of ``A (x) B`` is ``i_A * dim_B + i_B``.
Two-site operators are also handled as rank-4 arrays ``T[i, j, k, l]`` equal
to the matrix element ``<i j| T |k l>``, i.e. ``T.reshape(n*n, n*n)``.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .errors import BudgetError, PoleError
from .models import SpinModel
from .special import POLE_EPS

__all__ = [
    "DENSE_BUDGET",
    "permutator",
    "lax",
    "lax_factors",
    "r_matrix",
    "r_tensor",
    "embed",
    "transfer_dia",
    "transfer_row",
    "transfer_general",
    "translation",
    "partition_trace",
    "brute_force_partition",
]

DENSE_BUDGET = 4096
ENUMERATION_BUDGET = 10**6


def _check_budget(n: int, L: int, budget: int = DENSE_BUDGET) -> None:
    if L < 1:
        raise ValueError(f"lattice size must be >= 1, got {L}")
    if n**L > budget:
        raise BudgetError(f"n**L = {n}**{L} = {n**L} exceeds dense budget {budget}")


def permutator(n: int) -> np.ndarray:
    """Swap operator ``P = sum_ij e_ij (x) e_ji`` on ``C^n (x) C^n``."""
    P = np.zeros((n, n, n, n), dtype=complex)
    i, j = np.indices((n, n))
    P[i, j, j, i] = 1.0
    return P.reshape(n * n, n * n)


def lax_factors(model: SpinModel, x: complex):
    """Return ``(L_h, L_v)`` with ``lax(model, x) = L_h @ L_v``."""
    n = model.n
    Wh = model.horizontal(complex(x))
    Wv = model.vertical(complex(x))
    # L_h = sum_ij W_h(j,i) e_ii (x) e_jj : diagonal, entry (i, j) -> W_h[j, i]
    Lh = np.diag(Wh.T.reshape(-1)).astype(complex)
    Lv = np.zeros((n, n, n, n), dtype=complex)
    i, j, k = np.indices((n, n, n))
    Lv[i, j, k, i] = Wv[j, k]
    return Lh, Lv.reshape(n * n, n * n)


def lax(model: SpinModel, x: complex) -> np.ndarray:
    """Lax operator ``sum_ijk W_h(j,i|x) W_v(j,k|x) e_ik (x) e_ji``."""
    n = model.n
    Wh = model.horizontal(complex(x))
    Wv = model.vertical(complex(x))
    L4 = np.zeros((n, n, n, n), dtype=complex)
    i, j, k = np.indices((n, n, n))
    L4[i, j, k, i] = Wh[j, i] * Wv[j, k]
    return L4.reshape(n * n, n * n)


def r_tensor(model: SpinModel, x: complex, y: complex) -> np.ndarray:
    """R-matrix components ``R[i, j, k, l] = R_{i,j}^{k,l}(x, y)``."""
    n = model.n
    x, y = complex(x), complex(y)
    Whx = model.horizontal(x)
    Wv = model.vertical(x - y)
    Why = model.horizontal(y)
    small = np.argwhere(np.abs(Why) < POLE_EPS)
    if small.size:
        k, i = small[0]
        raise PoleError(f"R-matrix denominator W_h({k},{i}|{y}) vanishes")
    R4 = np.zeros((n, n, n, n), dtype=complex)
    i, j, k = np.indices((n, n, n))
    R4[i, j, k, i] = Whx[j, i] * Wv[j, k] / Why[k, i]
    return R4


def r_matrix(model: SpinModel, x: complex, y: complex) -> np.ndarray:
    """Non-difference-form R-matrix ``R_12(x, y)`` as an ``n^2 x n^2`` array."""
    n = model.n
    return r_tensor(model, x, y).reshape(n * n, n * n)


def embed(op: np.ndarray, sites, n: int, nsites: int) -> np.ndarray:
    """Embed a k-site operator acting on ``sites`` (in that order) into ``nsites``."""
    sites = list(sites)
    k = len(sites)
    if len(set(sites)) != k or not all(0 <= s < nsites for s in sites):
        raise ValueError(f"bad site list {sites} for {nsites} sites")
    rest = nsites - k
    full = np.kron(op, np.eye(n**rest)).reshape([n] * (2 * nsites))
    order = sites + [s for s in range(nsites) if s not in sites]
    # axis a of `full` (row half) currently belongs to site order[a]
    inv = np.argsort(order)
    axes = list(inv) + [nsites + a for a in inv]
    return full.transpose(axes).reshape(n**nsites, n**nsites)


def transfer_dia(model: SpinModel, x: complex, L: int) -> np.ndarray:
    """Diagonal-to-diagonal transfer matrix.

    ``T[a, b] = prod_m W_v(a_m, b_m | x) W_h(a_m, b_{m+1} | x)`` with
    periodic ``b_{L+1} = b_1``.
    """
    _check_budget(model.n, L)
    Wv = model.vertical(complex(x))
    Wh = model.horizontal(complex(x))
    return kernels.diagonal_transfer(np.ascontiguousarray(Wv, dtype=complex),
                                     np.ascontiguousarray(Wh, dtype=complex), L)


def transfer_general(R: np.ndarray, n: int, L: int) -> np.ndarray:
    """``Tr_A[R_A1 R_A2 ... R_AL]`` for a two-site operator ``R``.

    The auxiliary index is carried along and contracted site by site; the
    operator on ``A (x) V`` is never formed.
    """
    _check_budget(n, L)
    R4 = np.asarray(R, dtype=complex).reshape(n, n, n, n)  # [a, i, b, j]
    T = np.zeros((n**L, n**L), dtype=complex)
    for a in range(n):
        # Y[I, b, J]: processed sites I -> J, auxiliary a -> b
        Y = R4[a]
        for _ in range(1, L):
            Y = np.einsum("Xbz,bicj->Xiczj", Y, R4, optimize=True)
            Y = Y.reshape(Y.shape[0] * n, n, -1)
        T += Y[:, a, :]
    return T


def transfer_row(model: SpinModel, x: complex, x0: complex, L: int) -> np.ndarray:
    """Row-to-row transfer matrix built from ``R(x, x0)`` (``x0 = 0``: Lax)."""
    return transfer_general(r_matrix(model, x, x0), model.n, L)


def translation(n: int, L: int) -> np.ndarray:
    """One-site cyclic shift on ``(C^n)^{(x)L}``; equals the transfer matrix at ``x = x0``."""
    return transfer_general(permutator(n), n, L)


def partition_trace(T: np.ndarray, L: int) -> complex:
    """``Tr(T^L)`` by repeated multiplication."""
    if L < 1:
        raise ValueError("power must be >= 1")
    M = np.asarray(T, dtype=complex)
    acc = M
    for _ in range(L - 1):
        acc = acc @ M
    return complex(np.trace(acc))


def brute_force_partition(model: SpinModel, x: complex, L: int) -> complex:
    """Configuration sum over the periodic ``L x L`` lattice of diagonal layers.

    Spin ``s[t, m]`` couples to ``s[t+1, m]`` through ``W_v`` and to
    ``s[t+1, m+1]`` through ``W_h`` (indices mod ``L``).
    """
    n = model.n
    if n ** (L * L) > ENUMERATION_BUDGET:
        raise BudgetError(f"n**(L*L) = {n ** (L * L)} exceeds enumeration budget")
    Wv = np.ascontiguousarray(model.vertical(complex(x)), dtype=complex)
    Wh = np.ascontiguousarray(model.horizontal(complex(x)), dtype=complex)
    return complex(kernels.configuration_sum(Wv, Wh, L))
