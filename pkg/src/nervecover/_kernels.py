"""Jitted per-sample kernel for the Monte Carlo driver.

Mirrors the reference code in ``nerve`` (same interval rules, same
tolerance) but works on flat arrays so a batch of realizations can be
processed without Python overhead.
"""
import numpy as np
from numba import njit

MAXP = 3          # pieces per ball per edge
MAXI = 16         # pieces of an intersection per edge


@njit(cache=True)
def _sort_merge(lo, hi, cnt, tol):
    # insertion sort by lo, then merge in place; returns new count
    for a in range(1, cnt):
        x, y = lo[a], hi[a]
        b = a - 1
        while b >= 0 and lo[b] > x:
            lo[b + 1] = lo[b]
            hi[b + 1] = hi[b]
            b -= 1
        lo[b + 1] = x
        hi[b + 1] = y
    if cnt == 0:
        return 0
    m = 0
    for a in range(1, cnt):
        if lo[a] <= hi[m] + tol:
            if hi[a] > hi[m]:
                hi[m] = hi[a]
        else:
            m += 1
            lo[m] = lo[a]
            hi[m] = hi[a]
    return m + 1


@njit(cache=True)
def process_batch(eu, ev, L, D, bnd, isolated, ce, ct, eps, tol, down):
    """Per-sample statistics for centers (ce[t, i], ct[t, i]).

    Returns nerve bits, boundary-nerve bits, Rips bits, fully-covered flag,
    complement component count, covered boundary count and a flag for balls
    reaching two boundary points."""
    T, n = ce.shape
    E = L.shape[0]
    V = D.shape[0]
    B = bnd.shape[0]
    nm = 1 << n

    nerve = np.zeros(T, np.uint64)
    bnerve = np.zeros(T, np.uint64)
    rips = np.zeros(T, np.uint64)
    covered = np.zeros(T, np.bool_)
    comps = np.zeros(T, np.int64)
    nbcov = np.zeros(T, np.int64)
    bad = np.zeros(T, np.bool_)

    dv = np.empty((n, V))
    plo = np.empty((n, E, MAXP))
    phi = np.empty((n, E, MAXP))
    pc = np.zeros((n, E), np.int64)
    ilo = np.empty((nm, E, MAXI))
    ihi = np.empty((nm, E, MAXI))
    ic = np.zeros((nm, E), np.int64)
    ulo = np.empty(MAXP * n + 1)
    uhi = np.empty(MAXP * n + 1)
    parent = np.empty(V + E * (MAXP * n + 1), np.int64)
    is_node = np.zeros(V + E * (MAXP * n + 1), np.bool_)
    seen = np.zeros(V + E * (MAXP * n + 1), np.bool_)
    hitb = np.zeros((n, B), np.bool_)
    adj = np.zeros(n, np.int64)

    for t in range(T):
        # distances from each center to every vertex
        for i in range(n):
            k = ce[t, i]
            x = ct[t, i]
            for w in range(V):
                a = x + D[eu[k], w]
                b = (L[k] - x) + D[ev[k], w]
                dv[i, w] = a if a < b else b

        # ball pieces per edge
        for i in range(n):
            for k in range(E):
                c = 0
                a = eps - dv[i, eu[k]]
                if a >= 0:
                    plo[i, k, c] = 0.0
                    phi[i, k, c] = a if a < L[k] else L[k]
                    c += 1
                b = eps - dv[i, ev[k]]
                if b >= 0:
                    s = L[k] - b
                    plo[i, k, c] = s if s > 0.0 else 0.0
                    phi[i, k, c] = L[k]
                    c += 1
                if k == ce[t, i]:
                    s = ct[t, i] - eps
                    e = ct[t, i] + eps
                    plo[i, k, c] = s if s > 0.0 else 0.0
                    phi[i, k, c] = e if e < L[k] else L[k]
                    c += 1
                pc[i, k] = _sort_merge(plo[i, k], phi[i, k], c, tol)

        # nerve, apriori over masks in increasing order
        bits = np.uint64(1) if n > 0 else np.uint64(0)
        for m in range(1, nm):
            i0 = 0
            while not (m >> i0) & 1:
                i0 += 1
            rest = m ^ (1 << i0)
            if rest == 0:
                for k in range(E):
                    ic[m, k] = pc[i0, k]
                    for a in range(pc[i0, k]):
                        ilo[m, k, a] = plo[i0, k, a]
                        ihi[m, k, a] = phi[i0, k, a]
                bits |= np.uint64(1) << np.uint64(m)
                continue
            ok = True
            for j in range(n):
                if (m >> j) & 1:
                    if not (bits >> np.uint64(m ^ (1 << j))) & np.uint64(1):
                        ok = False
                        break
            if not ok:
                continue
            any_piece = False
            for k in range(E):
                c = 0
                a = 0
                b = 0
                na = ic[rest, k]
                nb = pc[i0, k]
                while a < na and b < nb:
                    s = ilo[rest, k, a]
                    if plo[i0, k, b] > s:
                        s = plo[i0, k, b]
                    e = ihi[rest, k, a]
                    if phi[i0, k, b] < e:
                        e = phi[i0, k, b]
                    if s <= e + tol and c < MAXI:
                        ilo[m, k, c] = s
                        ihi[m, k, c] = e if e > s else s
                        c += 1
                    if ihi[rest, k, a] < phi[i0, k, b]:
                        a += 1
                    else:
                        b += 1
                ic[m, k] = c
                if c > 0:
                    any_piece = True
            if any_piece:
                bits |= np.uint64(1) << np.uint64(m)
        nerve[t] = bits

        # Rips complex on center distances
        for i in range(n):
            adj[i] = 0
        for i in range(n):
            for j in range(i + 1, n):
                kj = ce[t, j]
                tj = ct[t, j]
                d1 = dv[i, eu[kj]] + tj
                d2 = dv[i, ev[kj]] + (L[kj] - tj)
                d = d1 if d1 < d2 else d2
                if kj == ce[t, i]:
                    d3 = abs(ct[t, i] - tj)
                    if d3 < d:
                        d = d3
                if d <= 2.0 * eps + tol:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        rb = np.uint64(1) if n > 0 else np.uint64(0)
        for m in range(1, nm):
            clique = True
            for i in range(n):
                if (m >> i) & 1 and (m & ~adj[i] & ~(1 << i)) != 0:
                    clique = False
                    break
            if clique:
                rb |= np.uint64(1) << np.uint64(m)
        rips[t] = rb

        # union of balls per edge, gaps and complement components
        for a in range(V):
            parent[a] = a
            is_node[a] = False
        nodes = V
        ngaps = 0
        for k in range(E):
            c = 0
            for i in range(n):
                for a in range(pc[i, k]):
                    ulo[c] = plo[i, k, a]
                    uhi[c] = phi[i, k, a]
                    c += 1
            c = _sort_merge(ulo, uhi, c, tol)
            # gaps as (touches u, touches v)
            if c == 0:
                g = nodes
                parent[g] = g
                is_node[g] = True
                nodes += 1
                ngaps += 1
                _union(parent, g, eu[k])
                _union(parent, g, ev[k])
                continue
            for a in range(c - 1):
                g = nodes
                parent[g] = g
                is_node[g] = True
                nodes += 1
                ngaps += 1
            if ulo[0] > tol:
                g = nodes
                parent[g] = g
                is_node[g] = True
                nodes += 1
                ngaps += 1
                _union(parent, g, eu[k])
            if uhi[c - 1] < L[k] - tol:
                g = nodes
                parent[g] = g
                is_node[g] = True
                nodes += 1
                ngaps += 1
                _union(parent, g, ev[k])
        for w in range(V):
            if isolated[w]:
                hit = False
                for i in range(n):
                    if dv[i, w] <= eps:
                        hit = True
                if not hit:
                    is_node[w] = True
                    ngaps += 1
        covered[t] = ngaps == 0
        cnt = 0
        for a in range(nodes):
            if is_node[a]:
                r = _find(parent, a)
                if not seen[r]:
                    seen[r] = True
                    cnt += 1
        comps[t] = cnt
        for a in range(nodes):
            is_node[a] = False
            seen[a] = False

        # boundary points
        for i in range(n):
            for j in range(B):
                w = bnd[j]
                hit = False
                for k in range(E):
                    for a in range(pc[i, k]):
                        if eu[k] == w and plo[i, k, a] <= tol:
                            hit = True
                        if ev[k] == w and phi[i, k, a] >= L[k] - tol:
                            hit = True
                hitb[i, j] = hit
        bb = np.uint64(0)
        nb = 0
        for j in range(B):
            cm = 0
            for i in range(n):
                if hitb[i, j]:
                    cm |= 1 << i
            if cm != 0:
                nb += 1
                bb |= down[cm]
        viol = False
        for i in range(n):
            c = 0
            for j in range(B):
                if hitb[i, j]:
                    c += 1
            if c >= 2:
                viol = True
        bnerve[t] = bb
        nbcov[t] = nb
        bad[t] = viol
    return nerve, bnerve, rips, covered, comps, nbcov, bad


@njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def _union(parent, a, b):
    a = _find(parent, a)
    b = _find(parent, b)
    if a != b:
        parent[a] = b


def down_array(n: int) -> np.ndarray:
    from .simplicial import down_bits
    return np.array(down_bits(n), dtype=np.uint64)
