"""Edge-weight families of integrable spin models.

Spins are labelled ``0..n-1``.  Every model is normalised so that
``W_h(i, j | 0) = 1`` and ``W_v(i, j | 0) = delta_ij``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PoleError
from .special import POLE_EPS, Nome, potts_f, potts_f_prime, potts_scalars, theta_eval

__all__ = [
    "SpinModel",
    "EightVertexWeights",
    "make_potts",
    "make_ashkin_teller",
    "make_ashkin_teller_isotropic",
    "make_fz",
    "make_km",
    "make_model",
    "at_from_eight_vertex",
    "at_pattern",
    "potts_self_dual_residual",
    "weight_matrix",
]

MatrixFn = Callable[[complex], np.ndarray]
ScalarFn = Callable[[complex], complex]


@dataclass(frozen=True)
class SpinModel:
    """An edge-weight family ``W_h(i, j | x)``, ``W_v(i, j | x)``.

    ``horizontal(x)`` / ``vertical(x)`` return the full ``n x n`` weight
    matrices; ``denominators(x)`` returns every denominator that enters the
    weights at ``x`` (used to keep rapidity samples away from poles).
    """

    n: int
    tag: str
    horizontal: MatrixFn
    vertical: MatrixFn
    rho1: ScalarFn
    rho2: ScalarFn
    denominators: Callable[[complex], np.ndarray]
    params: dict = field(default_factory=dict)
    reflection_symmetric: bool = True
    scale: float = 1.0  # natural rapidity scale (gamma_n, xi or lambda)
    # optional analytic derivatives d/dx of the weight matrices
    horizontal_prime: MatrixFn | None = None
    vertical_prime: MatrixFn | None = None

    def wh(self, i: int, j: int, x: complex) -> complex:
        return complex(self.horizontal(complex(x))[i, j])

    def wv(self, i: int, j: int, x: complex) -> complex:
        return complex(self.vertical(complex(x))[i, j])

    def __repr__(self):
        return f"SpinModel({self.tag}, n={self.n}, params={self.params})"


def _checked(num, den, what):
    den = np.asarray(den)
    if np.any(np.abs(den) < POLE_EPS):
        raise PoleError(f"{what}: vanishing denominator")
    return num / den


def weight_matrix(model: SpinModel, which: str, x: complex) -> np.ndarray:
    """``M[i, j] = W(i, j | x)`` for ``which`` in {"horizontal", "vertical"}."""
    if which in ("horizontal", "h"):
        return model.horizontal(complex(x))
    if which in ("vertical", "v"):
        return model.vertical(complex(x))
    raise ValueError(f"which must be 'horizontal' or 'vertical', got {which!r}")


# --------------------------------------------------------------------------
# scalar Potts


def potts_self_dual_residual(Jh: float, Jv: float, n: int) -> float:
    """``(e^Jh - 1)(e^Jv - 1) - n``; zero on the integrable manifold."""
    return (math.exp(Jh) - 1.0) * (math.exp(Jv) - 1.0) - n


def make_potts(n: int) -> SpinModel:
    s = potts_scalars(n)
    sq = math.sqrt(n)
    eye = np.eye(n)
    ones = np.ones((n, n))

    def horizontal(x):
        return ones + sq * potts_f(n, x) * eye

    def vertical(x):
        return potts_f(n, x) / sq * ones + eye

    def denominators(x):
        g = s.gamma
        if s.regime == "trigonometric":
            return np.array([cmath.sin(g - x)])
        if s.regime == "rational":
            return np.array([g - x])
        return np.array([cmath.sinh(g - x)])

    return SpinModel(
        n=n,
        tag=f"potts{n}",
        horizontal=horizontal,
        vertical=vertical,
        rho1=lambda x: 1.0 + 0j,
        rho2=lambda x: 1.0 + 0j,
        denominators=denominators,
        params={"model": "potts", "n": n, "gamma": s.gamma},
        scale=s.gamma,
        horizontal_prime=lambda x: sq * potts_f_prime(n, x) * eye,
        vertical_prime=lambda x: potts_f_prime(n, x) / sq * ones,
    )


# --------------------------------------------------------------------------
# Ashkin-Teller


@dataclass(frozen=True)
class EightVertexWeights:
    wa: complex
    wb: complex
    wc: complex
    wd: complex


def at_from_eight_vertex(w: EightVertexWeights):
    """Map eight-vertex weights to normalised Ashkin-Teller edge weights.

    Returns ``((a_h, b_h, c_h, d_h), (a_v, b_v, c_v, d_v))``.
    """
    sh = w.wb + w.wc
    sv = w.wa + w.wc
    if sh == 0 or sv == 0:
        raise ZeroDivisionError(
            f"degenerate eight-vertex weights: wb+wc={sh}, wa+wc={sv}"
        )
    horiz = (1.0, (w.wa - w.wd) / sh, (w.wa + w.wd) / sh, (w.wc - w.wb) / sh)
    vert = (1.0, (w.wb - w.wd) / sv, (w.wb + w.wd) / sv, (w.wc - w.wa) / sv)
    return horiz, vert


_XOR4 = np.bitwise_xor.outer(np.arange(4), np.arange(4))


def at_pattern(a, b, c, d) -> np.ndarray:
    """Symmetric 4x4 Ashkin-Teller matrix; entry (i, j) depends on i XOR j."""
    return np.array([a, b, c, d], dtype=complex)[_XOR4]


def _theta_ratio_row(x, xi, q):
    """(b, c, d) horizontal and vertical entries, plus all denominators."""
    t1m = theta_eval(1, (xi - x) / 2, q)
    t1p = theta_eval(1, (xi + x) / 2, q)
    th = {k: (theta_eval(k, (xi - x) / 2, q), theta_eval(k, (xi + x) / 2, q)) for k in (2, 3, 4)}
    u1 = theta_eval(1, x / 2, q)
    u1m = theta_eval(1, xi - x / 2, q)
    tv = {k: (theta_eval(k, x / 2, q), theta_eval(k, xi - x / 2, q)) for k in (2, 3, 4)}
    dens = [t1p, u1m] + [th[k][0] for k in (2, 3, 4)] + [tv[k][0] for k in (2, 3, 4)]
    return t1m, t1p, th, u1, u1m, tv, np.array(dens)


def make_ashkin_teller(xi: float, q) -> SpinModel:
    """Self-dual Ashkin-Teller model with theta-function weights."""
    nome = q if isinstance(q, Nome) else Nome(q)

    def parts(x):
        t1m, t1p, th, u1, u1m, tv, dens = _theta_ratio_row(x, xi, nome)
        if np.any(np.abs(dens) < POLE_EPS):
            raise PoleError(f"Ashkin-Teller weight pole at x={x}")
        # kinds 3, 4, 2 give b, c, d respectively
        h = [t1m * th[k][1] / (th[k][0] * t1p) for k in (3, 4, 2)]
        v = [u1 * tv[k][1] / (tv[k][0] * u1m) for k in (3, 4, 2)]
        return h, v

    def horizontal(x):
        return at_pattern(1.0, *parts(x)[0])

    def vertical(x):
        return at_pattern(1.0, *parts(x)[1])

    def rho2(x):
        x = complex(x)
        if abs(x) < 1e-12:
            ratio = 0.5
        else:
            ratio = theta_eval(1, x / 2, nome) / theta_eval(1, x, nome)
        num = theta_eval(1, xi - x, nome) * theta_eval(1, xi + x, nome)
        den = theta_eval(1, xi - x / 2, nome) * theta_eval(1, xi + x / 2, nome)
        return 4.0 * ratio**2 * _checked(num, den, "AT rho2")

    return SpinModel(
        n=4,
        tag="at",
        horizontal=horizontal,
        vertical=vertical,
        rho1=lambda x: 1.0 + 0j,
        rho2=rho2,
        denominators=lambda x: _theta_ratio_row(complex(x), xi, nome)[-1],
        params={"model": "at", "n": 4, "xi": xi, "q": nome.q},
        scale=abs(xi),
    )


def make_ashkin_teller_isotropic(xi: float) -> SpinModel:
    """Layer-isotropic (q -> 0) Ashkin-Teller model, ``b = c``."""
    if abs(math.sin(xi)) < POLE_EPS:
        raise PoleError(f"xi={xi} is a multiple of pi")

    def entries(x):
        hm, hp = (xi - x) / 2, (xi + x) / 2
        vm, vp = x / 2, xi - x / 2
        dens = np.array([cmath.sin(hp), cmath.tan(hp), cmath.cos(hm), cmath.sin(vp),
                         cmath.tan(vp), cmath.cos(vm)])
        if np.any(np.abs(dens) < POLE_EPS):
            raise PoleError(f"isotropic Ashkin-Teller pole at x={x}")
        bh = cmath.sin(hm) / cmath.sin(hp)
        dh = cmath.tan(hm) / cmath.tan(hp)
        bv = cmath.sin(vm) / cmath.sin(vp)
        dv = cmath.tan(vm) / cmath.tan(vp)
        return (bh, bh, dh), (bv, bv, dv)

    def denominators(x):
        x = complex(x)
        hp, vp = (xi + x) / 2, xi - x / 2
        return np.array([cmath.sin(hp), cmath.cos(hp), cmath.cos((xi - x) / 2),
                         cmath.sin(vp), cmath.cos(vp), cmath.cos(x / 2)])

    def rho2(x):
        num = cmath.sin(xi + x) * cmath.sin(xi - x)
        den = cmath.sin(xi + x / 2) * cmath.sin(xi - x / 2) * cmath.cos(x / 2) ** 2
        return _checked(num, den, "isotropic AT rho2")

    return SpinModel(
        n=4,
        tag="at_iso",
        horizontal=lambda x: at_pattern(1.0, *entries(x)[0]),
        vertical=lambda x: at_pattern(1.0, *entries(x)[1]),
        rho1=lambda x: 1.0 + 0j,
        rho2=rho2,
        denominators=denominators,
        params={"model": "at_iso", "n": 4, "xi": xi},
        scale=abs(xi),
    )


# --------------------------------------------------------------------------
# Fateev-Zamolodchikov and Kashiwara-Miwa


def _cumprod_table(num, den, kmax):
    """P[k] = prod_{j=1..k} num(j)/den(j) for k = 0..kmax."""
    out = np.ones(kmax + 1, dtype=complex)
    dens = np.ones(kmax + 1, dtype=complex)
    for j in range(1, kmax + 1):
        d = den(j)
        dens[j] = d
        if abs(d) < POLE_EPS:
            raise PoleError(f"vanishing product denominator at j={j}")
        out[j] = out[j - 1] * num(j) / d
    return out, dens[1:]


def make_fz(n: int) -> SpinModel:
    """Fateev-Zamolodchikov Z(n) model, ``lambda = pi / 2n``."""
    if n < 2:
        raise ValueError(f"FZ model needs n >= 2, got {n}")
    lam = math.pi / (2 * n)
    dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))

    def h_table(x):
        return _cumprod_table(lambda j: cmath.sin((2 * j - 1) * lam - x),
                              lambda j: cmath.sin((2 * j - 1) * lam + x), n - 1)

    def v_table(x):
        return _cumprod_table(lambda j: cmath.sin((2 * j - 2) * lam + x),
                              lambda j: cmath.sin(2 * j * lam - x), n - 1)

    def denominators(x):
        x = complex(x)
        dh = [cmath.sin((2 * j - 1) * lam + x) for j in range(1, n)]
        dv = [cmath.sin(2 * j * lam - x) for j in range(1, n)]
        return np.array(dh + dv)

    def rho2(x):
        num = den = 1.0 + 0j
        for j in range(1, n // 2 + 1):
            num *= cmath.sin((2 * j - 1) * lam + x) * cmath.sin((2 * j - 1) * lam - x)
            den *= cmath.sin(2 * j * lam + x) * cmath.sin(2 * j * lam - x)
        return n * _checked(num, den, "FZ rho2")

    return SpinModel(
        n=n,
        tag=f"fz{n}",
        horizontal=lambda x: h_table(x)[0][dist],
        vertical=lambda x: v_table(x)[0][dist],
        rho1=lambda x: 1.0 + 0j,
        rho2=rho2,
        denominators=denominators,
        params={"model": "fz", "n": n, "lambda": lam},
        scale=lam,
    )


def make_km(n: int, q, index_offset: int = 0, sum_offset: int = 0) -> SpinModel:
    """Kashiwara-Miwa model.

    ``index_offset`` relabels the spins everywhere (0: labels ``0..n-1``,
    1: labels ``1..n``).  ``sum_offset`` shifts only the upper limit of the
    ``a + b`` product; anything but 0 breaks integrability and exists to
    exercise failure reporting.
    """
    if n < 2:
        raise ValueError(f"KM model needs n >= 2, got {n}")
    nome = q if isinstance(q, Nome) else Nome(q)
    qv = complex(nome.q)
    if qv.imag != 0 or not 0 < qv.real < 1:
        # the [f(a) f(b)]**p factors use the real logarithm of positive f
        raise ValueError(f"KM weights need a real nome in (0, 1), got {nome.q}")
    lam = math.pi / (2 * n)
    spins = np.arange(n) + index_offset
    dist = np.abs(np.subtract.outer(spins, spins))
    total = np.add.outer(spins, spins) + sum_offset
    if total.min() < 0:
        raise ValueError(f"sum_offset={sum_offset} makes the a+b product limit negative")
    kmax = int(total.max())
    th40 = theta_eval(4, 0.0, nome)
    f = np.array([th40 / theta_eval(4, 2 * math.pi * a / n, nome) for a in spins])
    logff = np.log(np.multiply.outer(f, f).astype(complex))

    def th(kind, z):
        return theta_eval(kind, z, nome)

    def horizontal(x):
        p1, _ = _cumprod_table(lambda j: th(1, (2 * j - 1) * lam - x),
                               lambda j: th(1, (2 * j - 1) * lam + x), n - 1)
        p4, _ = _cumprod_table(lambda j: th(4, (2 * j - 1) * lam - x),
                               lambda j: th(4, (2 * j - 1) * lam + x), kmax)
        return np.exp(-n * x / math.pi * logff) * p1[dist] * p4[total]

    def vertical(x):
        p1, _ = _cumprod_table(lambda j: th(1, (2 * j - 2) * lam + x),
                               lambda j: th(1, 2 * j * lam - x), n - 1)
        p4, _ = _cumprod_table(lambda j: th(4, (2 * j - 2) * lam + x),
                               lambda j: th(4, 2 * j * lam - x), kmax)
        return np.exp(n * (x - lam) / math.pi * logff) * p1[dist] * p4[total]

    def denominators(x):
        x = complex(x)
        d = [th(1, (2 * j - 1) * lam + x) for j in range(1, n)]
        d += [th(1, 2 * j * lam - x) for j in range(1, n)]
        d += [th(4, (2 * j - 1) * lam + x) for j in range(1, kmax + 1)]
        d += [th(4, 2 * j * lam - x) for j in range(1, kmax + 1)]
        return np.array(d)

    def h_aux(x):
        out = 1.0 + 0j
        for j in range(1, n // 2 + 1):
            num = th(1, (2 * j - 1) * lam + x) * th(4, (2 * j - 1) * lam + x)
            den = th(1, 2 * j * lam + x) * th(4, 2 * j * lam + x)
            out *= _checked(num, den, "KM h(x)")
        return out

    def rho2(x):
        x = complex(x)
        return h_aux(x) * h_aux(-x) / h_aux(0.0) ** 2

    return SpinModel(
        n=n,
        tag=f"km{n}",
        horizontal=horizontal,
        vertical=vertical,
        rho1=lambda x: 1.0 + 0j,
        rho2=rho2,
        denominators=denominators,
        params={"model": "km", "n": n, "q": nome.q, "lambda": lam,
                "index_offset": index_offset, "sum_offset": sum_offset},
        scale=lam,
    )


def km_f(n: int, q, a: int) -> complex:
    """``f(a) = theta_4(0, q) / theta_4(2 pi a / n, q)``."""
    return theta_eval(4, 0.0, q) / theta_eval(4, 2 * math.pi * a / n, q)


def make_model(name: str, n: int | None = None, xi: float | None = None,
               q: float | None = None, **kw) -> SpinModel:
    """Construct a model by name: potts, at, at_iso, fz, km."""
    if name == "potts":
        return make_potts(n)
    if name == "at":
        return make_ashkin_teller(xi, q)
    if name == "at_iso":
        return make_ashkin_teller_isotropic(xi)
    if name == "fz":
        return make_fz(n)
    if name == "km":
        return make_km(n, q, **kw)
    raise ValueError(f"unknown model {name!r}")
