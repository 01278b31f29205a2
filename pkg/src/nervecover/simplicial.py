"""Labeled subcomplexes of the (n-1)-simplex on vertices {1..n}.

A face is a bitmask over the vertices (bit i-1 <-> vertex i).  A subcomplex
is a downward closed set of faces of the Boolean lattice 2^[n], stored as a
single integer ``bits`` with bit ``m`` set iff face ``m`` is present.  The
empty face (mask 0) is a legitimate element, which gives two degenerate
complexes:

* ``{Ø}`` -- no faces at all (``bits == 0``), the bottom element, text ``0``;
* ``{∅}`` -- only the empty simplex (``bits == 1``), text ``{}``.

Every complex with a vertex also holds mask 0.  Counting downsets of 2^[n]
this way gives the Dedekind numbers 3, 6, 20, 168, 7581, ...
Euler characteristic and face counts ignore mask 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from .errors import ConfigurationError

MAX_N = 6
DEDEKIND = (2, 3, 6, 20, 168, 7581, 7828354)


def popcount(m: int) -> int:
    return m.bit_count()


def face_dim(m: int) -> int:
    return m.bit_count() - 1


def face_vertices(m: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(m.bit_length()) if m >> i & 1)


def face_from_vertices(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << (v - 1)
    return m


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 0 or n > MAX_N:
        raise ConfigurationError(f"n must be an integer in [0, {MAX_N}], got {n!r}")


@lru_cache(maxsize=None)
def down_bits(n: int) -> tuple[int, ...]:
    """down_bits(n)[m] = bitset of all submasks of m (m included)."""
    out = []
    for m in range(1 << n):
        b, sub = 0, m
        while True:
            b |= 1 << sub
            if sub == 0:
                break
            sub = (sub - 1) & m
        out.append(b)
    return tuple(out)


@lru_cache(maxsize=None)
def up_bits(n: int) -> tuple[int, ...]:
    full = (1 << n) - 1
    out = []
    for m in range(1 << n):
        b = 0
        rest = full & ~m
        sub = rest
        while True:
            b |= 1 << (m | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        out.append(b)
    return tuple(out)


def closure_bits(masks, n: int) -> int:
    d = down_bits(n)
    b = 0
    for m in masks:
        b |= d[m]
    return b


def is_downset(bits: int, n: int) -> bool:
    d = down_bits(n)
    m = bits
    while m:
        low = m & -m
        f = low.bit_length() - 1
        if d[f] & ~bits:
            return False
        m ^= low
    return True


def _masks_of(bits: int) -> tuple[int, ...]:
    out = []
    m = bits
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return tuple(out)


@dataclass(frozen=True)
class Subcomplex:
    """Downward closed face set on n vertices.  Build with ``from_faces``
    or ``parse``; the raw constructor trusts ``bits``."""

    n: int
    bits: int

    @classmethod
    def from_faces(cls, faces, n: int, close: bool = False) -> "Subcomplex":
        _check_n(n)
        faces = list(faces)
        for m in faces:
            if not 0 <= m < (1 << n):
                raise ConfigurationError(f"face mask {m} out of range for n={n}")
        if close:
            return cls(n, closure_bits(faces, n))
        b = 0
        for m in faces:
            b |= 1 << m
        # nonempty faces imply the empty simplex
        if b & ~1:
            b |= 1
        if not is_downset(b, n):
            raise ConfigurationError("face set is not downward closed")
        return cls(n, b)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """All face masks, the empty simplex included, ascending."""
        return _masks_of(self.bits)

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """Nonempty faces sorted by dimension, then vertex lists."""
        return tuple(sorted((m for m in self.masks if m),
                            key=lambda m: (m.bit_count(), face_vertices(m))))

    def __contains__(self, m: int) -> bool:
        return bool(self.bits >> m & 1)

    def __le__(self, other: "Subcomplex") -> bool:
        return is_subcomplex(self, other)

    @property
    def sort_key(self):
        return (self.bits.bit_count(), self.masks)

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Subcomplex(n={self.n}, {to_text(self)})"


def EMPTY(n: int) -> Subcomplex:
    return Subcomplex(n, 0)


def EMPTY_SIMPLEX(n: int) -> Subcomplex:
    return Subcomplex(n, 1)


def full_simplex(n: int) -> Subcomplex:
    return Subcomplex(n, (1 << (1 << n)) - 1)


def to_text(s: Subcomplex) -> str:
    if s.bits == 0:
        return "0"
    if s.bits == 1:
        return "{}"
    return "+".join("".join(map(str, face_vertices(m))) for m in s.faces)


def parse(text: str, n: int) -> Subcomplex:
    """Inverse of ``to_text``; faces need not be listed down-closed."""
    text = text.strip()
    if text == "0":
        return EMPTY(n)
    if text == "{}":
        return EMPTY_SIMPLEX(n)
    faces = []
    for tok in text.split("+"):
        tok = tok.strip()
        if not tok.isdigit():
            raise ConfigurationError(f"bad face token {tok!r}")
        vs = [int(ch) for ch in tok]
        if any(v < 1 or v > n for v in vs) or len(set(vs)) != len(vs):
            raise ConfigurationError(f"bad face {tok!r} for n={n}")
        faces.append(face_from_vertices(vs))
    return Subcomplex.from_faces(faces, n, close=True)


def is_subcomplex(r: Subcomplex, s: Subcomplex) -> bool:
    return r.bits & ~s.bits == 0


def euler_char(s: Subcomplex) -> int:
    chi = 0
    for m in s.masks:
        if m:
            chi += 1 if m.bit_count() & 1 else -1
    return chi


def relative_euler_char(s: Subcomplex, r: Subcomplex) -> int:
    """chi(s) - chi(r); zero when r is not a subcomplex of s."""
    if not is_subcomplex(r, s):
        return 0
    return euler_char(s) - euler_char(r)


def face_count(s: Subcomplex, d: int) -> int:
    return sum(1 for m in s.masks if m and m.bit_count() == d + 1)


def top_faces(s: Subcomplex) -> tuple[int, ...]:
    """Maximal faces.  Mask 0 appears only for the empty-simplex complex."""
    u = up_bits(s.n)
    return tuple(m for m in s.masks if u[m] & s.bits == 1 << m)


def chain_to_antichain(s: Subcomplex) -> list[int]:
    return sorted(top_faces(s), key=lambda m: (m.bit_count(), face_vertices(m)))


def antichain_to_chain(faces, n: int) -> Subcomplex:
    faces = list(faces)
    for a, b in combinations(faces, 2):
        if a & b in (a, b):
            raise ConfigurationError("faces are not pairwise incomparable")
    return Subcomplex.from_faces(faces, n, close=True)


@dataclass(frozen=True)
class FaceProfile:
    top_even: int
    top_odd: int
    low_even: int
    low_odd: int

    @property
    def top(self):
        return self.top_even + self.top_odd

    @property
    def low(self):
        return self.low_even + self.low_odd

    @property
    def total(self):
        return self.top + self.low


def face_profile(s: Subcomplex) -> FaceProfile:
    """Counts of nonempty faces split by maximality (top = in the
    antichain) and parity of the dimension."""
    tops = set(top_faces(s))
    te = to = le = lo = 0
    for m in s.masks:
        if not m:
            continue
        even = m.bit_count() % 2 == 1     # dim = popcount - 1
        if m in tops:
            te, to = te + even, to + (not even)
        else:
            le, lo = le + even, lo + (not even)
    return FaceProfile(te, to, le, lo)


# ---------------------------------------------------------------- enumeration

def iter_antichains(n: int):
    """Yield every antichain of 2^[n] as (closure bits) via DFS.

    Children of a node only pick masks after the last one chosen that are
    incomparable with everything chosen so far."""
    _check_n(n)
    size = 1 << n
    d, u = down_bits(n), up_bits(n)
    comparable = [d[m] | u[m] for m in range(size)]
    stack = [(0, (1 << size) - 1)]
    while stack:
        closed, allowed = stack.pop()
        yield closed
        a = allowed
        while a:
            low = a & -a
            m = low.bit_length() - 1
            a ^= low
            # only masks greater than m remain eligible below this child
            nxt = (allowed & ~comparable[m]) & ~((low << 1) - 1)
            stack.append((closed | d[m], nxt))


class SubcomplexFamily:
    """All labeled subcomplexes for a fixed n in canonical order:
    by raw face count (mask 0 included), then lexicographically by masks."""

    def __init__(self, n: int, bits):
        self.n = n
        self.bits = tuple(bits)
        self.index = {b: i for i, b in enumerate(self.bits)}

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i) -> Subcomplex:
        return Subcomplex(self.n, self.bits[i])

    def __iter__(self):
        n = self.n
        return (Subcomplex(n, b) for b in self.bits)

    def ordinal(self, s: Subcomplex) -> int:
        if s.n != self.n:
            raise ConfigurationError("subcomplex belongs to another family")
        return self.index[s.bits]

    @cached_property
    def bits_array(self) -> np.ndarray:
        """uint64 copy of the keys (valid for n <= 6)."""
        return np.array(self.bits, dtype=np.uint64)

    @cached_property
    def chis(self) -> np.ndarray:
        return np.array([euler_char(s) for s in self], dtype=np.int64)


def _canon_key(b):
    return (b.bit_count(), _masks_of(b))


@lru_cache(maxsize=None)
def enumerate_subcomplexes(n: int) -> SubcomplexFamily:
    _check_n(n)
    bits = sorted(iter_antichains(n), key=_canon_key)
    return SubcomplexFamily(n, bits)


def enumerate_bruteforce(n: int) -> list[int]:
    """Filter all 2^(2^n) face subsets for downward closure (n <= 4)."""
    if n > 4:
        raise ConfigurationError("brute-force enumeration limited to n <= 4")
    size = 1 << n
    return sorted((b for b in range(1 << size) if is_downset(b, n)), key=_canon_key)
