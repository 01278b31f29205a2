"""Ball covers of a metric graph: intervals, nerve, Rips complex, coverage.

Everything here is the plain reference implementation; the Monte Carlo
driver uses the jitted twin in ``_kernels`` and the tests hold the two
against each other.  Intervals are closed; endpoint comparisons use an
absolute tolerance of 1e-12 times the total graph length.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, NumericalConsistencyError
from .metric_graph import GraphPoint, MetricGraph, intrinsic_distance
from .simplicial import Subcomplex, down_bits


# ------------------------------------------------------------ interval sets

def merge_intervals(ivs, tol=0.0):
    """Union of closed intervals as a sorted disjoint list.

    >>> merge_intervals([(3, 4), (0, 1), (1, 2)])
    [(0, 2), (3, 4)]
    """
    out = []
    for a, b in sorted(ivs):
        if out and a <= out[-1][1] + tol:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def intersect_intervals(xs, ys, tol=0.0):
    """Intersection of two sorted disjoint interval lists.

    >>> intersect_intervals([(0, 2), (3, 5)], [(1, 4)])
    [(1, 2), (3, 4)]
    """
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if a <= b + tol:
            out.append((a, max(a, b)))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def ball_intervals(X: MetricGraph, center: GraphPoint, eps: float):
    """Closed ball as a list (per edge) of merged offset intervals."""
    dv = X.point_to_vertex(center)
    u, v, L = X.edge_arrays
    out = []
    for k in range(len(X.edges)):
        pieces = []
        a = eps - dv[u[k]]
        if a >= 0:
            pieces.append((0.0, min(a, L[k])))
        b = eps - dv[v[k]]
        if b >= 0:
            pieces.append((max(L[k] - b, 0.0), float(L[k])))
        if k == center.edge:
            pieces.append((max(center.offset - eps, 0.0), min(center.offset + eps, L[k])))
        out.append(merge_intervals([(float(x), float(y)) for x, y in pieces], X.tol))
    return out


# ------------------------------------------------------------ realizations

@dataclass(eq=False)
class BallCoverRealization:
    graph: MetricGraph
    eps: float
    centers: tuple

    def __post_init__(self):
        self.centers = tuple(self.centers)
        if not self.eps > 0:
            raise ConfigurationError("eps must be positive")
        if len(self.centers) > 6:
            raise ConfigurationError("at most 6 balls")

    @property
    def n(self):
        return len(self.centers)

    @cached_property
    def intervals(self):
        return [ball_intervals(self.graph, c, self.eps) for c in self.centers]

    @cached_property
    def is_good_guaranteed(self) -> bool:
        return self.eps < self.graph.girth / 4

    @cached_property
    def is_rips_valid(self) -> bool:
        return self.eps < self.graph.girth / 6


@dataclass(frozen=True)
class NerveComplex:
    complex: Subcomplex
    is_rips_valid: bool
    is_good_guaranteed: bool


def _nonempty(per_edge) -> bool:
    return any(per_edge)


def build_nerve(r: BallCoverRealization, check_rips: bool = True) -> NerveComplex:
    """Faces = ball sets with a common point; apriori-style so a face is
    only tested once all its facets are in."""
    n, tol = r.n, r.graph.tol
    bits = 1 if n else 0
    inter = {}
    for m in range(1, 1 << n):
        i0 = (m & -m).bit_length() - 1
        rest = m ^ (1 << i0)
        if rest == 0:
            inter[m] = r.intervals[i0]
            bits |= 1 << m
            continue
        b = m
        ok = True
        while b:
            low = b & -b
            if not bits >> (m ^ low) & 1:
                ok = False
                break
            b ^= low
        if not ok:
            continue
        cur = [intersect_intervals(x, y, tol) for x, y in zip(inter[rest], r.intervals[i0])]
        if _nonempty(cur):
            inter[m] = cur
            bits |= 1 << m
    s = Subcomplex(n, bits)
    out = NerveComplex(s, r.is_rips_valid, r.is_good_guaranteed)
    if check_rips and r.is_rips_valid:
        rips = build_rips(r)
        if rips.bits != s.bits:
            raise NumericalConsistencyError(
                f"nerve {s} differs from Rips complex {rips} below the Rips threshold")
    return out


def center_distances(r: BallCoverRealization) -> np.ndarray:
    n = r.n
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = intrinsic_distance(r.graph, r.centers[i], r.centers[j])
    return d


def build_rips(r: BallCoverRealization) -> Subcomplex:
    """Clique complex of {d(centers) <= 2 eps}."""
    n = r.n
    d = center_distances(r)
    adj = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and d[i, j] <= 2 * r.eps + r.graph.tol:
                adj[i] |= 1 << j
    bits = 1 if n else 0
    for m in range(1, 1 << n):
        if all(m & ~adj[i] & ~(1 << i) == 0 for i in range(n) if m >> i & 1):
            bits |= 1 << m
    return Subcomplex(n, bits)


# ------------------------------------------------------------ boundary

def _ball_covers_vertex(r: BallCoverRealization, i: int, w: int) -> bool:
    X, tol = r.graph, r.graph.tol
    u, v, L = X.edge_arrays
    hit = False
    for k in range(len(X.edges)):
        if u[k] == w and any(a <= tol for a, _ in r.intervals[i][k]):
            hit = True
        if v[k] == w and any(b >= L[k] - tol for _, b in r.intervals[i][k]):
            hit = True
    if X.degree[X.vertices[w]] == 0:
        hit = bool(X.point_to_vertex(r.centers[i])[w] <= r.eps)
    return hit


def boundary_indicators(r: BallCoverRealization) -> np.ndarray:
    """bool[ball, boundary vertex] in sorted boundary-index order."""
    bidx = r.graph.boundary_indices
    out = np.zeros((r.n, len(bidx)), dtype=bool)
    for i in range(r.n):
        for j, w in enumerate(bidx):
            out[i, j] = _ball_covers_vertex(r, i, int(w))
    return out


def boundary_nerve(r: BallCoverRealization) -> Subcomplex:
    """Nerve of the balls restricted to the boundary points."""
    ind = boundary_indicators(r)
    d = down_bits(r.n)
    bits = 0
    for j in range(ind.shape[1]):
        m = sum(1 << i for i in range(r.n) if ind[i, j])
        if m:
            bits |= d[m]
    return Subcomplex(r.n, bits)


@dataclass(frozen=True)
class GoodCoverCheck:
    ok: bool
    violations: tuple       # balls that reach two or more boundary points


def pair_good_cover_check(r: BallCoverRealization) -> GoodCoverCheck:
    ind = boundary_indicators(r)
    bad = tuple(i for i in range(r.n) if ind[i].sum() >= 2)
    return GoodCoverCheck(not bad, bad)


# ------------------------------------------------------------ coverage

def covered_pieces(r: BallCoverRealization):
    """Per edge: merged union of every ball's intervals."""
    E = len(r.graph.edges)
    return [merge_intervals([iv for ball in r.intervals for iv in ball[k]], r.graph.tol)
            for k in range(E)]


def _uncovered_isolated(r: BallCoverRealization):
    X = r.graph
    out = []
    for w, name in enumerate(X.vertices):
        if X.degree[name] == 0 and not any(_ball_covers_vertex(r, i, w) for i in range(r.n)):
            out.append(w)
    return out


def covers_fully(r: BallCoverRealization) -> bool:
    X, tol = r.graph, r.graph.tol
    for L, pcs in zip(X.edge_arrays[2], covered_pieces(r)):
        if not pcs or pcs[0][0] > tol or pcs[-1][1] < L - tol or len(pcs) > 1:
            return False
    return not _uncovered_isolated(r)


def complement_components(r: BallCoverRealization) -> int:
    """Connected components of X minus the union of balls."""
    X, tol = r.graph, r.graph.tol
    u, v, L = X.edge_arrays
    parent = list(range(len(X.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[a] = b

    nodes = set()
    for k, pcs in enumerate(covered_pieces(r)):
        # (touches u, touches v) per gap; merged pieces sit > tol apart
        if not pcs:
            gaps = [(True, True)]
        else:
            gaps = [(False, False)] * (len(pcs) - 1)
            if pcs[0][0] > tol:
                gaps.append((True, False))
            if pcs[-1][1] < L[k] - tol:
                gaps.append((False, True))
        for at_u, at_v in gaps:
            g = len(parent)
            parent.append(g)
            nodes.add(g)
            if at_u:
                union(g, int(u[k]))
            if at_v:
                union(g, int(v[k]))
    for w in _uncovered_isolated(r):
        nodes.add(w)
    return len({find(a) for a in nodes})


def covered_betti(r: BallCoverRealization) -> tuple[int, int]:
    """(b0, b1) of the union of the balls."""
    X, tol = r.graph, r.graph.tol
    u, v, L = X.edge_arrays
    nv = len(X.vertices)
    covered_v = [False] * nv
    free = 0
    full = []
    for k, pcs in enumerate(covered_pieces(r)):
        for a, b in pcs:
            at_u, at_v = a <= tol, b >= L[k] - tol
            if at_u:
                covered_v[u[k]] = True
            if at_v:
                covered_v[v[k]] = True
            if at_u and at_v:
                full.append(k)
            elif not at_u and not at_v:
                free += 1
    for w, name in enumerate(X.vertices):
        if X.degree[name] == 0 and any(_ball_covers_vertex(r, i, w) for i in range(r.n)):
            covered_v[w] = True
    parent = list(range(nv))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k in full:
        a, b = find(int(u[k])), find(int(v[k]))
        if a != b:
            parent[a] = b
    verts = [w for w in range(nv) if covered_v[w]]
    comps = len({find(w) for w in verts})
    b0 = comps + free
    b1 = len(full) - len(verts) + comps
    return b0, b1


def realization_rows(r: BallCoverRealization):
    """(ball, edge, interval_start, interval_end) rows, balls numbered from 1."""
    for i, ball in enumerate(r.intervals, 1):
        for k, pcs in enumerate(ball):
            for a, b in pcs:
                yield i, r.graph.edges[k].id, a, b


def random_realization(X: MetricGraph, n: int, eps: float, rng) -> BallCoverRealization:
    """Uniform-by-length centers (reference sampler for tests and dumps)."""
    u, v, L = X.edge_arrays
    cum = np.cumsum(L)
    pts = []
    for _ in range(n):
        x = rng.random() * cum[-1]
        k = int(min(np.searchsorted(cum, x, side="right"), len(L) - 1))
        off = x - (cum[k] - L[k])
        pts.append(GraphPoint(k, float(min(max(off, 0.0), L[k]))))
    return BallCoverRealization(X, eps, pts)

