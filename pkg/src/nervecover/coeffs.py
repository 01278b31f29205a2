"""Expansion coefficients c_{s,k} of I(s)^k over labeled subcomplexes.

For an invariant Q that is additive over faces, the indicator expansion
``Q(nerve)^k = sum_s c_{s,k} [s is a subcomplex of the nerve]`` has
coefficients given by Möbius inversion on the downset lattice.  Since that
lattice is distributive, only sets of maximal faces contribute:

    c_{s,k} = sum_{A subset top(s)} (-1)^{|A|} Q(s minus A)^k

which collapses to binomial sums over the face profile.  The brute-force
oracle below does the same inversion by plain recursion over every
sub-downset, with no knowledge of maximal faces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .errors import ConfigurationError
from .simplicial import (Subcomplex, enumerate_subcomplexes, euler_char,
                         face_count, face_profile, is_subcomplex, top_faces)

BRUTEFORCE_MAX_FACES = 20


@dataclass(frozen=True)
class Invariant:
    kind: str            # "chi" | "face_count" | "chi_rel"
    d: int | None = None

    def __str__(self):
        return f"face_count[{self.d}]" if self.kind == "face_count" else self.kind


CHI = Invariant("chi")
CHI_REL = Invariant("chi_rel")


def FACE_COUNT(d: int) -> Invariant:
    if d < 0:
        raise ConfigurationError("face dimension must be >= 0")
    return Invariant("face_count", d)


def _check_k(k):
    if k < 0:
        raise ConfigurationError("moment order k must be >= 0")


def _sign(e):
    return -1 if e & 1 else 1


def c_chi(s: Subcomplex, k: int) -> int:
    _check_k(k)
    if s.bits == 0:
        return 0 ** k
    if s.bits == 1:
        return 0
    p = face_profile(s)
    plus, minus = p.top_even, p.top_odd
    base = p.low_even - p.low_odd
    tot = 0
    for i in range(plus + 1):
        ci = comb(plus, i)
        for j in range(minus + 1):
            tot += _sign(plus + minus - i - j) * ci * comb(minus, j) * (base + i - j) ** k
    return tot


def c_face_count(s: Subcomplex, d: int, k: int) -> int:
    _check_k(k)
    if s.bits == 0:
        return 0 ** k
    tops = top_faces(s)
    if any(m.bit_count() != d + 1 for m in tops):
        return 0
    r = len(tops)
    return sum(_sign(r - i) * comb(r, i) * i ** k for i in range(r + 1))


def _parity_split(masks):
    odd = sum(1 for m in masks if m.bit_count() & 1)
    return odd, len(masks) - odd


def c_chi_rel(s: Subcomplex, r: Subcomplex, k: int) -> int:
    """Coefficient of the pair indicator [s in N, r in N_boundary]."""
    _check_k(k)
    if s.n != r.n:
        raise ConfigurationError("pair from different families")
    if not is_subcomplex(r, s):
        return 0
    te = [m for m in top_faces(s) if m not in r]
    tw = list(top_faces(r))
    if 0 in te or 0 in tw:
        return 0
    base = euler_char(s) - euler_char(r)
    eo, ee = _parity_split(te)
    wo, we = _parity_split(tw)
    tot = 0
    # removing an e-face drops chi_rel by its sign, a w-face raises it
    for a in range(eo + 1):
        ca = comb(eo, a) * _sign(a)
        for b in range(ee + 1):
            cb = ca * comb(ee, b) * _sign(b)
            for c in range(wo + 1):
                cc = cb * comb(wo, c) * _sign(c)
                for e in range(we + 1):
                    q = base - a + b + c - e
                    tot += cc * comb(we, e) * _sign(e) * q ** k
    return tot


def coefficient(inv: Invariant, s: Subcomplex, k: int, r: Subcomplex | None = None) -> int:
    if inv.kind == "chi":
        return c_chi(s, k)
    if inv.kind == "face_count":
        return c_face_count(s, inv.d, k)
    if inv.kind == "chi_rel":
        if r is None:
            raise ConfigurationError("chi_rel needs a pair (s, r)")
        return c_chi_rel(s, r, k)
    raise ConfigurationError(f"unknown invariant {inv}")


# ------------------------------------------------------------------ oracle

def _evaluate(inv: Invariant, s: Subcomplex, r: Subcomplex | None = None) -> int:
    if inv.kind == "chi":
        return euler_char(s)
    if inv.kind == "face_count":
        return face_count(s, inv.d)
    return euler_char(s) - euler_char(r)


def _sub_downsets(s: Subcomplex) -> list[int]:
    fam = enumerate_subcomplexes(s.n)
    return [b for b in fam.bits if b & ~s.bits == 0]


_oracle_memo: dict = {}


def c_bruteforce(inv: Invariant, s: Subcomplex, k: int, r: Subcomplex | None = None) -> int:
    """Recursive zeta inversion: c_t = Q(t)^k - sum_{l strictly below t} c_l."""
    _check_k(k)
    if s.bits.bit_count() > BRUTEFORCE_MAX_FACES + 1:
        raise ConfigurationError(f"brute force limited to {BRUTEFORCE_MAX_FACES} faces")
    n = s.n
    if inv.kind != "chi_rel":
        memo = _oracle_memo.setdefault((inv, n, k), {})
        if s.bits in memo:
            return memo[s.bits]
        subs = _sub_downsets(s)       # canonical order: sub-downsets first
        for t in subs:
            if t in memo:
                continue
            q = _evaluate(inv, Subcomplex(n, t)) ** k
            memo[t] = q - sum(memo[l] for l in subs if l != t and l & ~t == 0)
        return memo[s.bits]

    if r is None:
        raise ConfigurationError("chi_rel needs a pair (s, r)")
    if not is_subcomplex(r, s):
        return 0
    memo = _oracle_memo.setdefault((inv, n, k), {})
    key = (s.bits, r.bits)
    if key in memo:
        return memo[key]
    ss, rs = _sub_downsets(s), _sub_downsets(r)
    pairs = [(a, b) for a in ss for b in rs if b & ~a == 0]
    pairs.sort(key=lambda p: p[0].bit_count() + p[1].bit_count())
    for a, b in pairs:
        if (a, b) in memo:
            continue
        q = (euler_char(Subcomplex(n, a)) - euler_char(Subcomplex(n, b))) ** k
        below = sum(memo[(x, y)] for x, y in pairs
                    if (x, y) != (a, b) and x & ~a == 0 and y & ~b == 0)
        memo[(a, b)] = q - below
    return memo[key]


# ------------------------------------------------------------------ tables

@dataclass
class CoefficientTable:
    invariant: Invariant
    n: int
    k: int
    values: dict = field(default_factory=dict)   # ordinal -> int

    def rows(self):
        fam = enumerate_subcomplexes(self.n)
        for i, c in sorted(self.values.items()):
            yield str(fam[i]), self.k, c


@lru_cache(maxsize=None)
def _chi_column(n: int, k: int) -> tuple[int, ...]:
    return tuple(c_chi(s, k) for s in enumerate_subcomplexes(n))


@lru_cache(maxsize=None)
def _fc_column(n: int, d: int, k: int) -> tuple[int, ...]:
    return tuple(c_face_count(s, d, k) for s in enumerate_subcomplexes(n))


def coefficient_column(inv: Invariant, n: int, k: int) -> tuple[int, ...]:
    """Coefficients for every member of the family, in canonical order."""
    if inv.kind == "chi":
        return _chi_column(n, k)
    if inv.kind == "face_count":
        return _fc_column(n, inv.d, k)
    raise ConfigurationError("pair invariants have no single-family column")


def coefficient_table(inv: Invariant, n: int, k: int) -> CoefficientTable:
    col = coefficient_column(inv, n, k)
    return CoefficientTable(inv, n, k, {i: c for i, c in enumerate(col)})
