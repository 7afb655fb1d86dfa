"""Scalar kernels: Jacobi theta functions and the Potts functions f_n, g_n."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

__all__ = [
    "Nome",
    "PottsScalars",
    "theta_eval",
    "theta_terms",
    "potts_scalars",
    "potts_gamma",
    "potts_f",
    "potts_g",
    "potts_f_prime",
]

_THETA_TAIL = 1e-17
_THETA_MAX_TERMS = 200
# denominators smaller than this are treated as poles
POLE_EPS = 1e-14


@dataclass(frozen=True)
class Nome:
    """Elliptic nome with ``|q| < 1``."""

    q: complex

    def __post_init__(self):
        q = complex(self.q)
        if not abs(q) < 1.0:
            raise ValueError(f"nome must satisfy |q| < 1, got q={self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def terms(self) -> int:
        return theta_terms(self.q)


def _as_nome(q) -> Nome:
    return q if isinstance(q, Nome) else Nome(q)


def theta_terms(q: complex) -> int:
    """Number of product factors K with ``|q|**(2K) < 1e-17`` (capped at 200)."""
    aq = abs(q)
    if aq == 0.0:
        return 0
    k = math.ceil(math.log(_THETA_TAIL) / (2.0 * math.log(aq)))
    return min(max(k, 1), _THETA_MAX_TERMS)


def theta_eval(kind: int, z: complex, q) -> complex:
    """Jacobi theta function ``theta_kind(z, q)`` by truncated product.

    Parameters
    ----------
    kind : int
        1, 2, 3 or 4.
    z : complex
        Argument in radians.
    q : Nome or complex
        Nome, ``|q| < 1``.
    """
    if kind not in (1, 2, 3, 4):
        raise ValueError(f"theta kind must be 1..4, got {kind}")
    qq = _as_nome(q).q
    z = complex(z)
    K = theta_terms(qq)
    c2 = cmath.cos(2.0 * z)
    prod = 1.0 + 0.0j
    for k in range(1, K + 1):
        q2k = qq ** (2 * k)
        if kind == 1:
            f = 1.0 - 2.0 * q2k * c2 + q2k * q2k
        elif kind == 2:
            f = 1.0 + 2.0 * q2k * c2 + q2k * q2k
        else:
            q_odd = qq ** (2 * k - 1)
            sign = 1.0 if kind == 3 else -1.0
            f = 1.0 + sign * 2.0 * q_odd * c2 + q_odd * q_odd
        prod *= f * (1.0 - q2k)
    if kind == 1:
        return 2.0 * qq**0.25 * cmath.sin(z) * prod
    if kind == 2:
        return 2.0 * qq**0.25 * cmath.cos(z) * prod
    return prod


@dataclass(frozen=True)
class PottsScalars:
    n: int
    gamma: float
    regime: str  # "trigonometric" | "rational" | "hyperbolic"


def potts_scalars(n: int) -> PottsScalars:
    if n < 2:
        raise ValueError(f"Potts model needs n >= 2, got {n}")
    w = math.sqrt(n) / 2.0
    if n in (2, 3):
        return PottsScalars(n, math.acos(w), "trigonometric")
    if n == 4:
        return PottsScalars(n, 1.0, "rational")
    # principal branch of arccosh
    return PottsScalars(n, math.log(w + math.sqrt(w * w - 1.0)), "hyperbolic")


def potts_gamma(n: int) -> float:
    return potts_scalars(n).gamma


def _div(num: complex, den: complex, what: str) -> complex:
    if abs(den) < POLE_EPS:
        raise PoleError(f"{what}: denominator vanishes ({den!r})")
    return num / den


def potts_f(n: int, x: complex) -> complex:
    """Baxterization function: sin(x)/sin(g-x), x/(g-x) or sinh(x)/sinh(g-x)."""
    s = potts_scalars(n)
    g, x = s.gamma, complex(x)
    if s.regime == "trigonometric":
        return _div(cmath.sin(x), cmath.sin(g - x), f"f_{n}({x})")
    if s.regime == "rational":
        return _div(x, g - x, f"f_{n}({x})")
    return _div(cmath.sinh(x), cmath.sinh(g - x), f"f_{n}({x})")


def potts_g(n: int, x: complex) -> complex:
    """Coupling of the extra two-body terms in the deformed Potts chain."""
    s = potts_scalars(n)
    g, x = s.gamma, complex(x)
    if s.regime == "trigonometric":
        return cmath.sin(x) * cmath.sin(g + x) / (math.sin(2 * g) * math.sin(g))
    if s.regime == "rational":
        return x * (1.0 + x) / 2.0
    return cmath.sinh(x) * cmath.sinh(g + x) / (math.sinh(2 * g) * math.sinh(g))


def potts_f_prime(n: int, x: complex) -> complex:
    """Analytic derivative of :func:`potts_f`."""
    s = potts_scalars(n)
    g, x = s.gamma, complex(x)
    if s.regime == "trigonometric":
        # d/dx sin(x)/sin(g-x) = sin(g)/sin(g-x)^2
        return _div(math.sin(g), cmath.sin(g - x) ** 2, f"f'_{n}({x})")
    if s.regime == "rational":
        return _div(g, (g - x) ** 2, f"f'_{n}({x})")
    return _div(math.sinh(g), cmath.sinh(g - x) ** 2, f"f'_{n}({x})")
