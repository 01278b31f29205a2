"""Finite metric graphs: vertices, edges with positive lengths, boundary.

A point lives on an edge at an offset in [0, L] measured from the edge's
first endpoint.  Points sitting on a vertex are canonicalised to the first
incident edge (file order) so equal points compare equal.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, InputOutputError


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: float


@dataclass(frozen=True)
class GraphPoint:
    edge: int          # edge index
    offset: float


@dataclass(eq=False)
class MetricGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    boundary: frozenset = field(default=None)
    name: str = ""

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.edges = tuple(self.edges)
        if len(set(self.vertices)) != len(self.vertices):
            raise ConfigurationError("duplicate vertex id")
        if len({e.id for e in self.edges}) != len(self.edges):
            raise ConfigurationError("duplicate edge id")
        vset = set(self.vertices)
        for e in self.edges:
            if e.u not in vset or e.v not in vset:
                raise ConfigurationError(f"edge {e.id} references an unknown vertex")
            if not (math.isfinite(e.length) and e.length > 0):
                raise ConfigurationError(f"edge {e.id} needs a positive finite length")
        leaves = frozenset(v for v in self.vertices if self.degree[v] == 1)
        if self.boundary is None:
            self.boundary = leaves
        else:
            b = frozenset(self.boundary)
            if not b <= leaves:
                raise ConfigurationError(
                    f"boundary override must name degree-1 vertices, got {sorted(b - leaves)}")
            self.boundary = b

    @cached_property
    def vindex(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def degree(self) -> dict:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    @cached_property
    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    @cached_property
    def tol(self) -> float:
        return 1e-12 * max(self.total_length, 1.0)

    @cached_property
    def edge_arrays(self):
        vi = self.vindex
        u = np.array([vi[e.u] for e in self.edges], dtype=np.int64)
        v = np.array([vi[e.v] for e in self.edges], dtype=np.int64)
        L = np.array([e.length for e in self.edges], dtype=np.float64)
        return u, v, L

    @cached_property
    def girth(self) -> float:
        return shortest_cycle_length(self)

    @cached_property
    def boundary_indices(self) -> np.ndarray:
        return np.array(sorted(self.vindex[b] for b in self.boundary), dtype=np.int64)

    @cached_property
    def vertex_distances(self) -> np.ndarray:
        """All-pairs shortest path lengths between vertices (Dijkstra)."""
        n = len(self.vertices)
        adj = self._adjacency()
        D = np.full((n, n), np.inf)
        for s in range(n):
            D[s] = _dijkstra(adj, s, n)
        return D

    def _adjacency(self, skip=None, merge=None):
        # merge maps vertex index -> representative (boundary quotient)
        n = len(self.vertices)
        rep = merge if merge is not None else list(range(n))
        adj = [[] for _ in range(n)]
        u, v, L = self.edge_arrays
        for k in range(len(self.edges)):
            if k == skip:
                continue
            a, b = rep[u[k]], rep[v[k]]
            adj[a].append((b, L[k]))
            adj[b].append((a, L[k]))
        return adj

    # points
    def point(self, edge, offset: float) -> GraphPoint:
        k = edge if isinstance(edge, (int, np.integer)) else self._edge_index(edge)
        L = self.edges[k].length
        if not -self.tol <= offset <= L + self.tol:
            raise ConfigurationError(f"offset {offset} outside edge of length {L}")
        offset = min(max(offset, 0.0), L)
        if offset == 0.0:
            return self.vertex_point(self.edges[k].u)
        if offset == L:
            return self.vertex_point(self.edges[k].v)
        return GraphPoint(int(k), float(offset))

    def vertex_point(self, w: str) -> GraphPoint:
        for k, e in enumerate(self.edges):
            if e.u == w:
                return GraphPoint(k, 0.0)
            if e.v == w:
                return GraphPoint(k, e.length)
        raise ConfigurationError(f"vertex {w!r} has no incident edge")

    def _edge_index(self, eid) -> int:
        for k, e in enumerate(self.edges):
            if e.id == eid:
                return k
        raise ConfigurationError(f"unknown edge {eid!r}")

    def point_to_vertex(self, p: GraphPoint) -> np.ndarray:
        """Distances from p to every vertex."""
        D = self.vertex_distances
        u, v, L = self.edge_arrays
        t = p.offset
        return np.minimum(t + D[u[p.edge]], (L[p.edge] - t) + D[v[p.edge]])


def _dijkstra(adj, s, n):
    dist = np.full(n, np.inf)
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, a = heapq.heappop(heap)
        if d > dist[a]:
            continue
        for b, w in adj[a]:
            nd = d + w
            if nd < dist[b]:
                dist[b] = nd
                heapq.heappush(heap, (nd, b))
    return dist


def intrinsic_distance(X: MetricGraph, p: GraphPoint, q: GraphPoint) -> float:
    """Geodesic distance: best of the four endpoint routes, plus the direct
    route when both points share an edge."""
    D = X.vertex_distances
    u, v, L = X.edge_arrays
    ep, tp = p.edge, p.offset
    eq, tq = q.edge, q.offset
    legs_p = ((u[ep], tp), (v[ep], L[ep] - tp))
    legs_q = ((u[eq], tq), (v[eq], L[eq] - tq))
    best = min(a + D[x, y] + b for x, a in legs_p for y, b in legs_q)
    if ep == eq:
        best = min(best, abs(tp - tq))
    return float(best)


def shortest_cycle_length(X: MetricGraph) -> float:
    """Girth of X with its boundary collapsed to one point; +inf if the
    quotient is a tree."""
    n = len(X.vertices)
    rep = list(range(n))
    bidx = sorted(X.vindex[b] for b in X.boundary)
    for b in bidx:
        rep[b] = bidx[0]
    u, v, L = X.edge_arrays
    best = math.inf
    for k in range(len(X.edges)):
        a, b = rep[u[k]], rep[v[k]]
        if a == b:
            best = min(best, float(L[k]))
            continue
        d = _dijkstra(X._adjacency(skip=k, merge=rep), a, n)[b]
        best = min(best, float(d + L[k]))
    return best


def euler_char_graph(X: MetricGraph) -> int:
    return len(X.vertices) - len(X.edges)


def chi_rel_graph(X: MetricGraph) -> int:
    return euler_char_graph(X) - len(X.boundary)


# ------------------------------------------------------------- fixtures + IO

def circle(c: float = 1.0) -> MetricGraph:
    return MetricGraph(("o",), (Edge("loop", "o", "o", c),), name="circle")


def theta(a: float = 1.0, b: float = 1.0, c: float = 2.0) -> MetricGraph:
    es = (Edge("a", "p", "q", a), Edge("b", "p", "q", b), Edge("c", "p", "q", c))
    return MetricGraph(("p", "q"), es, name="theta")


def interval(length: float = 1.0) -> MetricGraph:
    return MetricGraph(("l", "r"), (Edge("e", "l", "r", length),), name="interval")


def ytree(a: float = 1.0, b: float = 1.0, c: float = 1.0) -> MetricGraph:
    es = (Edge("a", "o", "x", a), Edge("b", "o", "y", b), Edge("c", "o", "z", c))
    return MetricGraph(("o", "x", "y", "z"), es, name="ytree")


BUILTIN = {"circle": circle, "theta": theta, "interval": interval, "ytree": ytree}


def parse_graph(text: str, boundary_override=None, name: str = "") -> MetricGraph:
    """Lines ``vertex <id>`` / ``edge <id> <u> <v> <length>``; ``#`` comments."""
    vs, es = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "vertex" and len(tok) == 2:
            vs.append(tok[1])
        elif tok[0] == "edge" and len(tok) == 5:
            try:
                L = float(tok[4])
            except ValueError:
                raise ConfigurationError(f"line {lineno}: bad length {tok[4]!r}") from None
            if not (math.isfinite(L) and L > 0):
                raise ConfigurationError(f"line {lineno}: edge length must be positive, got {tok[4]}")
            es.append(Edge(tok[1], tok[2], tok[3], L))
        else:
            raise ConfigurationError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if not vs:
        raise ConfigurationError("graph has no vertices")
    g = MetricGraph(tuple(vs), tuple(es), boundary_override, name=name)
    if not np.isfinite(g.vertex_distances[0]).all():
        raise ConfigurationError("graph is disconnected")
    return g


def load_graph(source: str, boundary_override=None) -> MetricGraph:
    """A builtin name (circle, theta, interval, ytree) or a path."""
    if source in BUILTIN and not Path(source).exists():
        g = BUILTIN[source]()
        if boundary_override is not None:
            g = MetricGraph(g.vertices, g.edges, boundary_override, name=g.name)
        return g
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputOutputError(f"cannot read graph file {source!r}: {exc}") from exc
    return parse_graph(text, boundary_override, name=Path(source).stem)


def graph_to_text(X: MetricGraph) -> str:
    lines = [f"vertex {v}" for v in X.vertices]
    lines += [f"edge {e.id} {e.u} {e.v} {e.length!r}" for e in X.edges]
    return "\n".join(lines) + "\n"
