"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict that the terminal summary prints
(see ``conftest.py``), so ``pytest tests/test_acceptance.py`` ends with a
pass/fail table.
"""
import json

import numpy as np
import pytest

from spinvertex import chains, checks
from spinvertex.models import make_model, make_potts
from spinvertex.report import SuiteConfig, dumps_report, emit_report, run_suite, stable_hash
from spinvertex.sampling import SplitMix64, sample_rapidities
from spinvertex.vertex import lax, permutator, r_matrix

from conftest import MODEL_SPECS, spec_id

ACCEPTANCE_SEED = 20240917
TUPLES = 20


def _models():
    return [(spec_id(s), make_model(s[0], **s[1])) for s in MODEL_SPECS]


def _tuples(model, count=TUPLES, arity=3):
    return sample_rapidities(model, count, arity, SplitMix64(ACCEPTANCE_SEED))


def _verdict(record, number, title, worst, tol, ok=None):
    ok = worst < tol if ok is None else ok
    record(number, title, ok, f"worst={worst:.3e} tol={tol:.0e}")
    assert ok, f"criterion {number} ({title}): worst {worst:.3e} >= {tol:.0e}"


def test_criterion_1_identity_suite(acceptance):
    worst, where = 0.0, ""
    for tag, m in _models():
        for x, y, z in _tuples(m):
            for r in (checks.check_star_triangle(m, x, y), checks.check_inversion(m, x),
                      checks.check_yb_algebra(m, x, y), checks.check_unitarity(m, x, y),
                      checks.check_ybe(m, x, y, z), checks.check_ybe_reduced(m, x, y, z)):
                if r.residual >= worst:
                    worst, where = r.residual, f"{r.check_name}/{tag}"
    title = f"identity suite, {len(MODEL_SPECS)} models x {TUPLES} tuples (worst: {where})"
    _verdict(acceptance, 1, title, worst, 1e-9)


def test_criterion_2_ashkin_teller_structure(acceptance):
    at = make_model("at", xi=0.3, q=0.15)
    iso = make_model("at_iso", xi=0.4)
    counts = set()
    for m, want in ((at, (64, 16)), (iso, (64, 10))):
        for x, y in _tuples(m, 10, 2):
            counts.add((m.tag, checks.count_distinct(r_matrix(m, x, y), tol=1e-8) == want))
    ok = all(v for _, v in counts)
    acceptance(2, "AT R-matrix: 64 nonzero, 16 distinct; isotropic 10 distinct", ok,
               "all sampled (x, y) agree" if ok else str(sorted(counts)))
    assert ok


def test_criterion_3_partition_equivalence(acceptance):
    worst = 0.0
    for name in ("potts", "fz", "km"):
        for n in (2, 3):
            m = make_model(name, n=n, q=0.2)
            x = _tuples(m, 1, 1)[0][0]
            for L in (1, 2, 3, 4):
                r = checks.check_partition_equality(m, x, L)
                worst = max(worst, r.details["row_vs_dia"])
                if (n, L) in {(2, 2), (2, 3), (3, 2)}:
                    assert "brute_vs_dia" in r.details
                    worst = max(worst, r.details["brute_vs_dia"])
    _verdict(acceptance, 3, "Tr(T_dia^L) = Tr(T_row^L) = brute force", worst, 1e-10)


def test_criterion_4_temperley_lieb(acceptance):
    worst = 0.0
    for n in (2, 3, 4, 5):
        m = make_potts(n)
        for x, y in _tuples(m, TUPLES, 2):
            worst = max(worst, checks.check_potts_tl_r(m, x, y).residual)
        for L in (2, 3):
            worst = max(worst, checks.check_tl_relations(n, L).residual)
    _verdict(acceptance, 4, "TL form of the Potts R-matrix and TL relations", worst, 1e-12)


def test_criterion_5_chain_consistency(acceptance):
    worst, ratios = 0.0, []
    cases = [(make_potts(n), L) for n in (2, 3, 4, 5) for L in (2, 3, 4) if n**L <= 256]
    cases += [(make_model("at_iso", xi=0.4), 2), (make_model("at_iso", xi=0.4), 3)]
    for m, L in cases:
        for x0 in (0.1j, 0.05 - 0.03j):
            worst = max(worst, checks.check_chain_affine(m, x0, L).residual)
            worst = max(worst, checks.check_chain_commutation(m, x0, 0.13 - 0.02j, L).residual)
        if L == 2:
            fd = checks.check_fd_convergence(m, 0.1j, L)
            ratios.append(min(fd.details["ratio"], fd.details["affine_ratio"]))
    ok = worst < 1e-6 and min(ratios) >= 4
    acceptance(5, "explicit chains vs transfer-matrix Hamiltonian, [H, T] = 0", ok,
               f"worst={worst:.3e} tol=1e-06 min_halving_ratio={min(ratios):.3f}")
    assert ok


def test_criterion_6_hermiticity(acceptance):
    worst = 0.0
    for x0 in (0.1j, -0.2j, 0.05j):
        for n, L in ((2, 4), (3, 3), (4, 2), (5, 2)):
            worst = max(worst, chains.hermiticity_residual(chains.potts_chain(n, x0, L).matrix))
        for L in (2, 3):
            worst = max(worst, chains.hermiticity_residual(chains.at_chain(0.4, x0, L).matrix))
    _verdict(acceptance, 6, "deformed chains hermitian at imaginary x0", worst, 1e-10)


def test_criterion_7_reductions(acceptance):
    worst = 0.0
    for _, m in _models():
        P = permutator(m.n)
        worst = max(worst, np.max(np.abs(lax(m, 0.0) - P)))
        for (x,) in _tuples(m, 5, 1):
            worst = max(worst, checks.check_reductions(m, x).residual)
    _verdict(acceptance, 7, "R(x,0) = L(x), R(x,x) = P, L(0) = P", worst, 1e-12)


def test_criterion_8_double_rapidity(acceptance):
    worst = spread = 0.0
    for _, m in _models():
        assert m.reflection_symmetric
        for x, y, z in _tuples(m, 5):
            r = checks.check_double_rapidity_reduction(m, x, y, [0.0, z, -z, 2 * z])
            worst = max(worst, r.residual)
            spread = max(spread, r.details["base_point_spread"])
    _verdict(acceptance, 8, f"double-rapidity reduction (base-point spread {spread:.1e})",
             max(worst, spread), 1e-10)


def test_criterion_9_determinism(acceptance, tmp_path):
    texts = []
    for sub in ("a", "b"):
        cfg = SuiteConfig(model="potts", n=3, samples=5, seed=42, out_dir=str(tmp_path / sub))
        rep = run_suite(cfg)
        paths = emit_report(rep, cfg.out_dir)
        texts.append((paths["json"], dumps_report(rep, include_timing=False)))
    (pa, ta), (pb, tb) = texts
    ok = ta == tb and stable_hash(pa) == stable_hash(pb)
    ok &= json.loads(pa.read_text())["timing"] is not None
    acceptance(9, "report.json byte-identical across runs (timing excluded)", ok,
               f"sha256={stable_hash(pa)[:16]}")
    assert ok
