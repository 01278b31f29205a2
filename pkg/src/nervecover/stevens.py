"""Closed forms for random arcs on a circle of circumference 1.

n arcs of length alpha with uniform independent starting points.  Coverage
and the gap-count law follow the classical inclusion-exclusion formulas;
for three arcs the subcomplex probabilities of the nerve are polynomials
in alpha and give an exact cumulative vector for the pipeline.

Arc length alpha equals 2*eps for balls of radius eps.  Passing Fractions
keeps everything exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .coverage import DistributionVector
from .errors import ConfigurationError
from .simplicial import enumerate_subcomplexes, face_from_vertices

EDGE_MASKS = tuple(face_from_vertices(p) for p in ((1, 2), (1, 3), (2, 3)))
TRIANGLE = face_from_vertices((1, 2, 3))


@dataclass(frozen=True)
class ArcModel:
    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("need at least one arc")
        if not 0 < self.alpha <= 1:
            raise ConfigurationError(f"arc length must lie in (0, 1], got {self.alpha}")


def _kmax(n, alpha):
    return min(math.floor(1 / alpha), n)


def _pp(x, e):
    # (x)_+^e with (x)_+^0 = [x > 0], so a full-length single arc covers
    return x ** e if x > 0 else x * 0


def _exact_in(fn):
    # evaluate at the exact binary value of a float alpha, round once
    def wrapped(n, alpha):
        if isinstance(alpha, float):
            out = fn(n, Fraction(alpha))
            return [float(x) for x in out] if isinstance(out, list) else float(out)
        return fn(n, alpha)
    wrapped.__doc__ = fn.__doc__
    wrapped.__name__ = fn.__name__
    return wrapped


@_exact_in
def stevens_coverage(n: int, alpha) -> float:
    """P(n random arcs of length alpha cover the circle).

    >>> stevens_coverage(4, Fraction(3, 10))
    Fraction(1, 125)
    >>> round(stevens_coverage(5, 0.25), 12)
    0.00390625
    """
    ArcModel(n, alpha)
    k = _kmax(n, alpha)
    return sum((-1) ** j * comb(n, j) * _pp(1 - j * alpha, n - 1) for j in range(k + 1))


@_exact_in
def stevens_gap_dist(n: int, alpha) -> list:
    """P(G = j), j = 0..n, G = number of uncovered gaps."""
    ArcModel(n, alpha)
    k = _kmax(n, alpha)
    out = []
    for j in range(n + 1):
        if j > k:
            out.append(alpha * 0)
            continue
        s = sum((-1) ** (i - j) * comb(n - j, i - j) * _pp(1 - i * alpha, n - 1)
                for i in range(j, k + 1))
        out.append(comb(n, j) * s)
    return out


def gap_moments(alpha, k: int):
    """E[G^k] for three arcs, k = 0..3, from the polynomial forms."""
    ArcModel(3, alpha)
    if alpha >= 0.5:
        raise ConfigurationError("three-arc polynomials need alpha < 1/2")
    if k == 0:
        return alpha * 0 + 1
    if k == 1:
        return 3 - 6 * alpha + 3 * alpha ** 2
    if k == 2:
        return 9 - 30 * alpha + 27 * alpha ** 2
    if k == 3:
        if alpha * 3 <= 1:
            return 27 - 114 * alpha + 129 * alpha ** 2
        return 21 - 78 * alpha + 75 * alpha ** 2
    raise ConfigurationError("closed forms exist for k <= 3")


def three_arc_p_value(edges: int, full: bool, alpha):
    """P(the nerve contains a given complex) by edge count and triangle."""
    if full:
        return 3 * alpha ** 2
    if edges == 0:
        return alpha * 0 + 1
    if edges == 1:
        return 2 * alpha
    if edges == 2:
        return 4 * alpha ** 2
    if alpha * 3 <= 1:
        return 3 * alpha ** 2
    return 12 * alpha ** 2 - 6 * alpha + 1


def three_arc_p_vector(alpha) -> DistributionVector:
    """Exact cumulative vector over the 20 labeled complexes on 3 balls."""
    ArcModel(3, alpha)
    if alpha >= 0.5:
        raise ConfigurationError("three-arc polynomials need alpha < 1/2 (good cover)")
    fam = enumerate_subcomplexes(3)
    exact = not isinstance(alpha, float)
    vals = []
    for s in fam:
        e = sum(1 for m in EDGE_MASKS if m in s)
        vals.append(three_arc_p_value(e, TRIANGLE in s, alpha))
    arr = np.array(vals, dtype=object if exact else float)
    return DistributionVector(fam, "cumulative", arr)
