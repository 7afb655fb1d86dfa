import itertools

import numpy as np
import pytest

from spinvertex.errors import BudgetError, PoleError
from spinvertex.models import make_model, make_potts
from spinvertex.vertex import (
    brute_force_partition,
    embed,
    lax,
    lax_factors,
    partition_trace,
    permutator,
    r_matrix,
    r_tensor,
    transfer_dia,
    transfer_general,
    transfer_row,
    translation,
)
from spinvertex.kernels import diagonal_transfer_numpy


def _row_transfer_oracle(R, n, L):
    """Tr_A[R_A1 ... R_AL] built on the full (L+1)-site space, site 0 = A."""
    prod = np.eye(n ** (L + 1), dtype=complex)
    for m in range(1, L + 1):
        prod = prod @ embed(R, [0, m], n, L + 1)
    return np.einsum("aiaj->ij", prod.reshape(n, n**L, n, n**L))


def _diagonal_oracle(model, x, L):
    n = model.n
    Wv, Wh = model.vertical(x), model.horizontal(x)
    states = list(itertools.product(range(n), repeat=L))
    T = np.empty((n**L, n**L), dtype=complex)
    for ia, a in enumerate(states):
        for ib, b in enumerate(states):
            T[ia, ib] = np.prod([Wv[a[m], b[m]] * Wh[a[m], b[(m + 1) % L]] for m in range(L)])
    return T


def test_permutator():
    P2 = permutator(2)
    assert np.array_equal(P2.real, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    rng = np.random.default_rng(0)
    for n in (2, 3, 5):
        P = permutator(n)
        assert np.array_equal(P @ P, np.eye(n * n))
        u, v = rng.normal(size=n), rng.normal(size=n)
        assert np.allclose(P @ np.kron(u, v), np.kron(v, u), atol=1e-15)


def test_embed_convention():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(4, 4))
    B = rng.normal(size=(2, 2))
    I2 = np.eye(2)
    assert np.allclose(embed(A, [0, 1], 2, 3), np.kron(A, I2))
    assert np.allclose(embed(B, [2], 2, 3), np.kron(np.kron(I2, I2), B))
    # reversed site order applies P on both sides
    P = permutator(2)
    assert np.allclose(embed(A, [1, 0], 2, 2), P @ A @ P)


def test_lax_at_zero_is_permutator(model):
    assert np.max(np.abs(lax(model, 0.0) - permutator(model.n))) < 1e-12


def test_lax_entries_potts2():
    m = make_potts(2)
    x = 0.2
    L4 = lax(m, x).reshape(2, 2, 2, 2)
    for i, j, k in itertools.product(range(2), repeat=3):
        # row (i j), column (k i)
        assert L4[i, j, k, i] == pytest.approx(m.wh(j, i, x) * m.wv(j, k, x), abs=1e-15)
    assert np.count_nonzero(np.abs(L4) > 1e-14) <= 8


def test_lax_factors(model):
    x = 0.07 + 0.02j
    Lh, Lv = lax_factors(model, x)
    assert np.array_equal(Lh, np.diag(np.diag(Lh)))
    assert np.max(np.abs(lax_factors(model, 0.0)[0] - np.eye(model.n**2))) < 1e-12
    assert np.max(np.abs(Lh @ Lv - lax(model, x))) < 1e-12


def test_r_matrix_reductions(model):
    x = 0.06 - 0.03j
    P = permutator(model.n)
    assert np.max(np.abs(r_matrix(model, x, x) - P)) < 1e-12
    assert np.max(np.abs(r_matrix(model, x, 0.0) - lax(model, x))) < 1e-12


def test_r_matrix_formula_km3():
    m = make_model("km", n=3, q=0.2)
    x, y = 0.08 + 0.01j, -0.05j
    R = r_tensor(m, x, y)
    Whx, Why, Wv = m.horizontal(x), m.horizontal(y), m.vertical(x - y)
    for i, j, k, l in itertools.product(range(3), repeat=4):
        ref = Whx[j, i] * Wv[j, k] / Why[k, i] if i == l else 0
        assert abs(R[i, j, k, l] - ref) < 1e-15


def test_potts_r_nonzero_count():
    R = r_matrix(make_potts(3), 0.2, 0.1)
    assert np.count_nonzero(np.abs(R) > 1e-14) == 27


def test_r_matrix_pole_names_indices():
    # W_h(i,i|y) = 1 + sqrt(2) f_2(y) vanishes at y = -pi/4
    po = make_potts(2)
    with pytest.raises(PoleError, match=r"W_h\(\d,\d\|"):
        r_matrix(po, 0.1, -np.pi / 4)


def test_transfer_dia_matches_oracle(model):
    L = 2 if model.n > 3 else 3
    x = 0.1 + 0.03j
    assert np.max(np.abs(transfer_dia(model, x, L) - _diagonal_oracle(model, x, L))) < 1e-12


def test_transfer_dia_trivial():
    m = make_potts(2)
    assert np.array_equal(transfer_dia(m, 0.0, 3), np.eye(8))
    x = 0.2
    T1 = transfer_dia(m, x, 1)
    assert np.allclose(T1, m.vertical(x) * m.horizontal(x), atol=1e-15)


def test_transfer_row_matches_full_space_oracle(model):
    L = 2 if model.n > 3 else 3
    R = r_matrix(model, 0.09 - 0.02j, 0.03j)
    T = transfer_general(R, model.n, L)
    assert np.max(np.abs(T - _row_transfer_oracle(R, model.n, L))) < 1e-12


def test_transfer_row_interchanged_diagonal_form(model):
    # at x0 = 0 the row transfer matrix is the diagonal one with W_h <-> W_v
    L = 2 if model.n > 3 else 3
    x = 0.11 + 0.04j
    T = transfer_row(model, x, 0.0, L)
    D = diagonal_transfer_numpy(model.horizontal(x), model.vertical(x), L)
    assert np.max(np.abs(T - D)) < 1e-12


def test_translation_is_cyclic_shift():
    n, L = 3, 4
    S = translation(n, L)
    assert np.array_equal(np.abs(S).sum(axis=0), np.ones(n**L))
    assert np.allclose(np.linalg.matrix_power(S, L), np.eye(n**L))
    assert not np.allclose(np.linalg.matrix_power(S, 2), np.eye(n**L))
    m = make_potts(n)
    assert np.allclose(transfer_row(m, 0.0, 0.0, L), S)
    assert np.allclose(transfer_row(m, 0.2, 0.2, L), S)
    # conjugation moves a one-site operator by one site
    Z = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    A = embed(Z, [0], n, L)
    B = S @ A @ S.conj().T
    assert any(np.allclose(B, embed(Z, [s], n, L)) for s in (1, L - 1))


def test_partition_trace_trivial():
    assert partition_trace(np.eye(5), 3) == 5
    S = translation(2, 3)
    # S^3 = I on 8 states
    assert partition_trace(S, 3) == 8
    assert partition_trace(S, 2) == pytest.approx(np.trace(S @ S).real)


@pytest.mark.parametrize("n,L,x", [(2, 2, 0.2), (2, 3, 0.2), (3, 2, 0.1)])
def test_brute_force_matches_traces(n, L, x):
    m = make_potts(n)
    zb = brute_force_partition(m, x, L)
    zd = partition_trace(transfer_dia(m, x, L), L)
    zr = partition_trace(transfer_row(m, x, 0.0, L), L)
    assert abs(zb - zd) / abs(zd) < 1e-10
    assert abs(zr - zd) / abs(zd) < 1e-10


def test_brute_force_at_zero():
    assert brute_force_partition(make_potts(2), 0.0, 2) == pytest.approx(4)


def test_budgets():
    m = make_potts(3)
    with pytest.raises(BudgetError):
        transfer_dia(m, 0.1, 8)
    with pytest.raises(BudgetError):
        brute_force_partition(m, 0.1, 4)
