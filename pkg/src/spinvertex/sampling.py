"""Seeded rapidity sampling.

Random numbers come from a SplitMix64 stream written out as plain 64-bit
arithmetic, so any language can reproduce the same sample points::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    z = z ^ (z >> 31)
    uniform = (z >> 11) * 2**-53

A point in the disc of radius ``r`` is ``r * sqrt(u1) * exp(2 pi i u2)`` with
``u1, u2`` consecutive uniforms.
"""
from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

from .errors import PoleError
from .models import SpinModel

__all__ = ["SplitMix64", "sample_rapidities", "window_radius", "DENOMINATOR_FLOOR"]

_MASK = (1 << 64) - 1
DENOMINATOR_FLOOR = 1e-6
MAX_TRIES = 50
WINDOW_FRACTION = 0.4


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def disc(self, radius: float) -> complex:
        r = radius * math.sqrt(self.uniform())
        return r * cmath.exp(2j * math.pi * self.uniform())


def window_radius(model: SpinModel) -> float:
    return WINDOW_FRACTION * model.scale


def _safe(model: SpinModel, points) -> bool:
    args = set()
    for p in points:
        args.update((p, -p))
    for a, b in itertools.permutations(points, 2):
        args.add(a - b)
    try:
        for a in args:
            if np.min(np.abs(model.denominators(a))) < DENOMINATOR_FLOOR:
                return False
            if np.min(np.abs(model.horizontal(a))) < DENOMINATOR_FLOOR:
                return False
            model.vertical(a)
    except (PoleError, ZeroDivisionError, FloatingPointError):
        return False
    return True


def sample_rapidities(model: SpinModel, count: int, arity: int,
                      rng: SplitMix64, radius: float | None = None) -> list[tuple]:
    """Draw ``count`` tuples of ``arity`` complex rapidities inside the window.

    A tuple is redrawn (up to 50 times) while any weight denominator, or any
    horizontal weight that enters an R-matrix denominator, falls below
    ``1e-6`` in magnitude at the tuple's points, their negatives or their
    pairwise differences.
    """
    radius = window_radius(model) if radius is None else radius
    out = []
    for _ in range(count):
        for _try in range(MAX_TRIES):
            pts = tuple(rng.disc(radius) for _ in range(arity))
            if _safe(model, pts):
                break
        else:
            raise PoleError(f"no pole-free sample for {model.tag} after {MAX_TRIES} tries")
        out.append(pts)
    return out
