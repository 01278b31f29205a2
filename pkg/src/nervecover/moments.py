"""Recover a distribution on an integer range from its first moments.

With nodes x_i = lo + i (i = 0..N) and V[i][k] = x_i^k, the probability
vector satisfies p V = mu, so p = mu V^{-1}.  The inverse has the closed
form

    v_{ki} = (-1)^{k+i} / N! * C(N, i) * e_{N-k}(x without x_i)

where e_m is the m-th elementary symmetric polynomial.  Entries are built
exactly as Fractions and converted to float for the fast path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, fsum
from numbers import Rational

import numpy as np

from .errors import ConfigurationError

FLOAT_MAX_N = 20


@dataclass(frozen=True)
class IntegerRange:
    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise ConfigurationError(f"empty range [{self.lo}, {self.hi}]")

    @property
    def N(self) -> int:
        return self.hi - self.lo

    @property
    def values(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, x):
        return self.lo <= x <= self.hi


@dataclass
class MomentVector:
    range: IntegerRange
    mu: list            # mu[k] = E[X^k], k = 0..N


@dataclass
class InverseVandermonde:
    range: IntegerRange
    v: object           # (N+1)x(N+1) float array, or list of Fraction rows
    exact: bool


def elementary_symmetric(xs) -> list:
    """e_0..e_len(xs) of the given numbers."""
    e = [1] + [0] * len(xs)
    for j, x in enumerate(xs, 1):
        for m in range(j, 0, -1):
            e[m] += x * e[m - 1]
    return e


def elem_sym_omit(i: int, j: int, xs) -> int:
    """Degree-i elementary symmetric polynomial of xs with xs[j] left out.

    >>> elem_sym_omit(1, 0, (0, 1, 2)), elem_sym_omit(2, 1, (0, 1, 2))
    (3, 0)
    """
    return elementary_symmetric([x for m, x in enumerate(xs) if m != j])[i]


def vandermonde(rng: IntegerRange) -> list[list[int]]:
    return [[x ** k for k in range(rng.N + 1)] for x in rng.values]


@lru_cache(maxsize=None)
def _exact_rows(lo: int, hi: int) -> tuple[tuple[Fraction, ...], ...]:
    xs = list(range(lo, hi + 1))
    N = hi - lo
    nf = factorial(N)
    es = [elementary_symmetric(xs[:i] + xs[i + 1:]) for i in range(N + 1)]
    rows = []
    for k in range(N + 1):
        row = []
        for i in range(N + 1):
            sgn = -1 if (k + i) & 1 else 1
            row.append(Fraction(sgn * comb(N, i) * es[i][N - k], nf))
        rows.append(tuple(row))
    return tuple(rows)


def inverse_vandermonde(rng: IntegerRange, exact: bool = False) -> InverseVandermonde:
    if not exact and rng.N > FLOAT_MAX_N:
        raise ConfigurationError(f"float inverse Vandermonde limited to N <= {FLOAT_MAX_N}")
    rows = _exact_rows(rng.lo, rng.hi)
    if exact:
        return InverseVandermonde(rng, [list(r) for r in rows], True)
    return InverseVandermonde(rng, np.array(rows, dtype=float), False)


def inverse_vandermonde_general(xs) -> list[list[Fraction]]:
    """Exact inverse for arbitrary distinct nodes via Lagrange basis
    coefficients: v_{ki} = (-1)^{N-k} e_{N-k}(x without x_i) / prod_{j != i}(x_i - x_j)."""
    xs = [Fraction(x) for x in xs]
    N = len(xs) - 1
    out = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]
    for i, xi in enumerate(xs):
        others = xs[:i] + xs[i + 1:]
        den = Fraction(1)
        for xj in others:
            den *= xi - xj
        e = elementary_symmetric(others)
        for k in range(N + 1):
            sgn = -1 if (N - k) & 1 else 1
            out[k][i] = sgn * e[N - k] / den
    return out


def _is_exact(mu) -> bool:
    return all(isinstance(m, Rational) for m in mu)


def distribution_from_moments(m: MomentVector, exact: bool | None = None, tol: float = 1e-8):
    """Return (probabilities over m.range.values, diagnostics).

    ``exact=None`` picks exact arithmetic when every moment is rational."""
    rng = m.range
    if len(m.mu) != rng.N + 1:
        raise ConfigurationError(f"need {rng.N + 1} moments, got {len(m.mu)}")
    if exact is None:
        exact = _is_exact(m.mu)
    iv = inverse_vandermonde(rng, exact=exact)
    if exact:
        mu = [Fraction(x) for x in m.mu]
        p = [sum(mu[k] * iv.v[k][i] for k in range(rng.N + 1)) for i in range(rng.N + 1)]
        total = sum(p)
    else:
        mu = np.asarray(m.mu, dtype=float)
        p = [fsum(mu[k] * iv.v[k, i] for k in range(rng.N + 1)) for i in range(rng.N + 1)]
        total = fsum(p)
    diag = {
        "sum_minus_one": float(total - 1),
        "min_probability": float(min(p)),
        "exact": exact,
    }
    if abs(diag["sum_minus_one"]) > tol or diag["min_probability"] < -tol:
        diag["warning"] = "moments inconsistent with a distribution on the range"
    return p, diag


def moments_of(q, rng: IntegerRange, exact: bool | None = None) -> MomentVector:
    """mu_k = sum_j (lo+j)^k q_j, k = 0..N."""
    if exact is None:
        exact = _is_exact(q)
    if exact:
        q = [Fraction(x) for x in q]
        mu = [sum(x ** k * qj for x, qj in zip(rng.values, q)) for k in range(rng.N + 1)]
    else:
        mu = [fsum(float(x) ** k * float(qj) for x, qj in zip(rng.values, q))
              for k in range(rng.N + 1)]
    return MomentVector(rng, mu)
