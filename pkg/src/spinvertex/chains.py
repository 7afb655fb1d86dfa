"""Clock and Temperley-Lieb operators, and the quantum chains of the models.

Site ``j`` of an ``L``-site chain is tensor factor ``j`` (0-based, most
significant first), matching :func:`spinvertex.vertex.embed`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError
from .models import SpinModel
from .special import POLE_EPS, potts_f, potts_g
from .vertex import _check_budget, embed, permutator, transfer_row, translation

__all__ = [
    "ClockPair",
    "ChainOperator",
    "clock_ops",
    "tl_generators",
    "potts_r_tl",
    "hamiltonian_from_transfer",
    "hamiltonian_explicit",
    "potts_chain",
    "at_chain",
    "reflect_sites",
    "affine_match",
    "diagonalize_hermitian",
    "z_charge",
    "HERMITIAN_TOL",
]

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class ClockPair:
    n: int
    Z: np.ndarray
    X: np.ndarray
    omega: complex


@dataclass
class ChainOperator:
    """A chain Hamiltonian (or other operator) on ``L`` sites of dimension ``n``."""

    n: int
    L: int
    matrix: np.ndarray
    label: str
    hermitian: bool = False

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        self.hermitian = hermiticity_residual(self.matrix) < HERMITIAN_TOL

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def hermiticity_residual(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def clock_ops(n: int) -> ClockPair:
    """``Z = diag(omega^k)`` and the cyclic shift ``X``, with ``ZX = omega XZ``."""
    if n < 2:
        raise ValueError(f"clock operators need n >= 2, got {n}")
    omega = cmath.exp(2j * math.pi / n)
    Z = np.diag(omega ** np.arange(n))
    X = np.zeros((n, n), dtype=complex)
    X[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return ClockPair(n, Z, X, omega)


def _power_sum(op: np.ndarray, n: int, start: int = 0) -> np.ndarray:
    """``sum_{k=start}^{n-1} op^k``."""
    acc = np.zeros_like(op)
    p = np.linalg.matrix_power(op, start)
    for _ in range(start, n):
        acc = acc + p
        p = p @ op
    return acc


def tl_generators(n: int, L: int) -> list[ChainOperator]:
    """Potts representation ``E_1 .. E_{2L-1}`` of the Temperley-Lieb algebra.

    ``E_{2j-1}`` is the single-site projector-like sum of ``X_j^k``;
    ``E_{2j}`` couples sites ``j, j+1`` through ``(Z_j Z_{j+1}^dagger)^k``.
    """
    _check_budget(n, L)
    c = clock_ops(n)
    sq = math.sqrt(n)
    single = _power_sum(c.X, n) / sq
    pair = _power_sum(np.kron(c.Z, c.Z.conj().T), n) / sq
    gens = []
    for j in range(L):
        gens.append(ChainOperator(n, L, embed(single, [j], n, L), f"E{2 * j + 1}"))
        if j < L - 1:
            gens.append(ChainOperator(n, L, embed(pair, [j, j + 1], n, L), f"E{2 * j + 2}"))
    return gens


def potts_r_tl(n: int, x: complex, y: complex) -> np.ndarray:
    """Potts R-matrix written with two-site Temperley-Lieb generators.

    ``P (1 + f(x-y) [E1 + E2 + f(x) E2 E1 + f(-y) E1 E2])``.
    """
    E1, E2 = (g.matrix for g in tl_generators(n, 2)[:2])
    I = np.eye(n * n)
    fxy = potts_f(n, x - y)
    inner = E1 + E2 + potts_f(n, x) * (E2 @ E1) + potts_f(n, -y) * (E1 @ E2)
    return permutator(n) @ (I + fxy * inner)


# --------------------------------------------------------------------------
# Hamiltonian limits


def _central(model, x0, L, h):
    return (transfer_row(model, x0 + h, x0, L) - transfer_row(model, x0 - h, x0, L)) / (2 * h)


def hamiltonian_from_transfer(model: SpinModel, x0: complex, L: int,
                              h: float = 1e-5, richardson: bool = True) -> ChainOperator:
    """``H = T'(x0) T(x0)^{-1}`` with ``T(x) = T(x, x0)`` by finite differences.

    ``T(x0, x0)`` is the one-site translation, so its inverse is its
    conjugate transpose.  With ``richardson`` the step-``h`` and step-``h/2``
    central differences are combined to cancel the ``h^2`` term.
    """
    _check_budget(model.n, L)
    x0 = complex(x0)
    D = _central(model, x0, L, h)
    if richardson:
        D = (4.0 * _central(model, x0, L, h / 2) - D) / 3.0
    Tinv = translation(model.n, L).conj().T
    return ChainOperator(model.n, L, D @ Tinv, f"{model.tag}_transfer_L{L}")


def _numeric_prime(fn, x, h=1e-5):
    return (fn(x + h) - fn(x - h)) / (2 * h)


def hamiltonian_explicit(model: SpinModel, x0: complex, L: int,
                         analytic: bool = True) -> ChainOperator:
    """Log-derivative Hamiltonian assembled term by term from weight derivatives.

    Two-body term on ``(j, j+1)``::

        sum_ik W_h'(i,k|x0)/W_h(i,k|x0) e_ii (x) e_kk
        + sum_ikl W_h(i,l|x0)/W_h(k,l|x0) W_v'(i,k|0) e_ik (x) e_ll

    Analytic derivatives are used when the model provides them and
    ``analytic`` is true; otherwise central differences.
    """
    _check_budget(model.n, L)
    if L < 2:
        raise ValueError("hamiltonian_explicit needs L >= 2")
    n, x0 = model.n, complex(x0)
    if analytic and model.horizontal_prime is not None:
        dWh = model.horizontal_prime(x0)
        dWv = model.vertical_prime(0.0)
    else:
        dWh = _numeric_prime(model.horizontal, x0)
        dWv = _numeric_prime(model.vertical, 0.0)
    Wh = model.horizontal(x0)
    if np.any(np.abs(Wh) < POLE_EPS):
        raise PoleError(f"W_h vanishes at x0={x0}")
    bond = np.zeros((n, n, n, n), dtype=complex)
    i, k = np.indices((n, n))
    bond[i, k, i, k] += dWh / Wh
    i, k, l = np.indices((n, n, n))
    bond[i, l, k, l] += Wh[i, l] / Wh[k, l] * dWv[i, k]
    bond = bond.reshape(n * n, n * n)
    H = sum(embed(bond, [j, (j + 1) % L], n, L) for j in range(L))
    return ChainOperator(n, L, H, f"{model.tag}_explicit_L{L}")


def potts_chain(n: int, x0: complex, L: int, J: float = 1.0) -> ChainOperator:
    """Integrable Z(n)-symmetric deformation of the Potts chain.

    ``H = -J sum_j H_{j,j+1}`` (periodic) with the two-body term built from
    ``X_j`` and ``Z_j Z_{j+1}^dagger`` and couplings ``g_n(x0)``, ``g_n(-x0)``.
    """
    _check_budget(n, L)
    if L < 2:
        raise ValueError("potts_chain needs L >= 2")
    c = clock_ops(n)
    x0 = complex(x0)
    ga, gb = potts_g(n, x0), potts_g(n, -x0)
    I = np.eye(n)
    X1 = np.kron(c.X, I)
    ZZ = np.kron(c.Z, c.Z.conj().T)
    sx = _power_sum(X1, n, 1)
    sz = _power_sum(ZZ, n, 1)
    bond = sx + sz + ga * (sz @ sx) + gb * (sx @ sz)
    H = sum(embed(bond, [j, (j + 1) % L], n, L) for j in range(L))
    return ChainOperator(n, L, -J * H, f"potts{n}_chain_L{L}")


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.diag([1.0 + 0j, -1.0])
_I2 = np.eye(2)


def at_chain(xi: float, x0: complex, L: int, J: float = 1.0) -> ChainOperator:
    """Deformed Ashkin-Teller chain; local dimension 4 = (sigma, tau) pair."""
    _check_budget(4, L)
    if L < 2:
        raise ValueError("at_chain needs L >= 2")
    x0 = complex(x0)
    if abs(cmath.cos(x0)) < POLE_EPS or abs(math.sin(xi)) < POLE_EPS:
        raise PoleError(f"at_chain pole: cos(x0)={cmath.cos(x0)}, sin(xi)={math.sin(xi)}")
    c = math.cos(xi) / cmath.cos(x0)
    s = cmath.sin(x0) / math.sin(xi)
    I4 = np.eye(4)
    sx, sz = np.kron(_SX, _I2), np.kron(_SZ, _I2)
    tx, tz = np.kron(_I2, _SX), np.kron(_I2, _SZ)
    szz = np.kron(sz, sz)
    tzz = np.kron(tz, tz)
    sxj = np.kron(sx, I4)
    txj = np.kron(tx, I4)
    h0 = szz + sxj + tzz + txj + c * (szz @ tzz + sxj @ txj)
    h1 = (-c * s * ((sxj + txj) @ szz @ tzz - (szz + tzz) @ sxj @ txj)
          + c * s * s * (sxj @ tzz + txj @ szz + sxj @ txj @ szz @ tzz)
          - s * (sxj @ szz + txj @ tzz))
    bond = h0 + h1
    H = sum(embed(bond, [j, (j + 1) % L], 4, L) for j in range(L))
    return ChainOperator(4, L, -J * H, f"at_chain_L{L}")


def reflect_sites(M: np.ndarray, n: int, L: int) -> np.ndarray:
    """Conjugate by the site reversal ``j -> L-1-j``."""
    T = np.asarray(M).reshape([n] * (2 * L))
    rev = list(range(L - 1, -1, -1))
    return T.transpose(rev + [L + a for a in rev]).reshape(n**L, n**L)


def affine_match(A: np.ndarray, B: np.ndarray):
    """Fit ``A ~ alpha B + beta I`` from two entries and return the global residual.

    ``alpha`` is read from the largest off-diagonal entry of ``B`` and
    ``beta`` from the (0, 0) diagonal entry.  Returns ``(alpha, beta, residual)``
    with residual the max-abs deviation over all entries.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    off = np.abs(B) * (1 - np.eye(B.shape[0]))
    p = np.unravel_index(np.argmax(off), B.shape)
    if off[p] == 0:
        raise ValueError("reference operator has no off-diagonal entries")
    alpha = A[p] / B[p]
    beta = A[0, 0] - alpha * B[0, 0]
    resid = float(np.max(np.abs(A - alpha * B - beta * np.eye(B.shape[0]))))
    return complex(alpha), complex(beta), resid


def diagonalize_hermitian(op: ChainOperator, check: bool = True) -> np.ndarray:
    """Full ascending real spectrum of a hermitian chain operator."""
    if not op.hermitian:
        raise ValueError(f"{op.label} is not hermitian "
                         f"(residual {hermiticity_residual(op.matrix):.3g})")
    if op.dim > 4096:
        raise ValueError(f"dimension {op.dim} exceeds the dense limit 4096")
    H = 0.5 * (op.matrix + op.matrix.conj().T)
    w, v = np.linalg.eigh(H)
    if check:
        res = np.linalg.norm(H @ v - v * w, axis=0)
        if res.size and res.max() > 1e-8:
            raise RuntimeError(f"eigenpair residual {res.max():.3g} too large")
    return w


def z_charge(n: int, L: int) -> np.ndarray:
    """Global Z(n) charge ``prod_j X_j``; commutes with the Potts chain."""
    X = clock_ops(n).X
    Q = np.eye(1, dtype=complex)
    for _ in range(L):
        Q = np.kron(Q, X)
    return Q


def sector_spectrum(op: ChainOperator) -> dict[int, np.ndarray]:
    """Spectrum of ``op`` resolved by the eigenvalue ``omega^k`` of :func:`z_charge`."""
    n, L = op.n, op.L
    Q = z_charge(n, L)
    qw, qv = np.linalg.eig(Q)
    k = np.round(np.angle(qw) / (2 * math.pi / n)).astype(int) % n
    out = {}
    for sector in range(n):
        basis = qv[:, k == sector]
        basis, _ = np.linalg.qr(basis)
        Hs = basis.conj().T @ op.matrix @ basis
        out[sector] = np.linalg.eigvalsh(0.5 * (Hs + Hs.conj().T))
    return out
