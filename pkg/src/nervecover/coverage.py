"""Distribution of the nerve's Euler characteristic and coverage probability.

Two routes to P(chi(N) = m) are kept side by side and must agree:

* the direct path sums atomic probabilities P_s = P(N = s) by chi(s);
* the moment path forms E[chi^k] = sum_s c_{s,k} p_s from cumulative
  probabilities p_s = P(s is a subcomplex of N) and inverts the moment
  problem on [chi(X), n].

By the Nerve Lemma chi(N) = chi(union of balls) for good covers, and the
union is all of X exactly when chi(N) = chi(X) (relative versions for
graphs with boundary).  Vectors built from Monte Carlo counts are exact
rationals, so the two paths agree to the last digit there.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import fsum

import numpy as np

from .coeffs import CHI, c_chi_rel, coefficient_column
from .errors import ConfigurationError, NumericalConsistencyError
from .metric_graph import MetricGraph, chi_rel_graph, euler_char_graph
from .moments import IntegerRange, MomentVector, distribution_from_moments
from .simplicial import (Subcomplex, SubcomplexFamily, down_bits, enumerate_subcomplexes,
                         euler_char, top_faces)

FORMS = ("atomic", "cumulative")
CONSISTENCY_TOL = 1e-8
WORKERS_ENV = "NERVECOVER_WORKERS"
MAX_REJECTION_RATE = 0.5


# ------------------------------------------------------------ vectors

@dataclass
class DistributionVector:
    """One value per member of the family, canonical order.  ``values`` is a
    float array, or an object array of Fractions for exact work."""
    family: SubcomplexFamily
    form: str
    values: np.ndarray

    def __post_init__(self):
        if self.form not in FORMS:
            raise ConfigurationError(f"form must be one of {FORMS}")
        self.values = np.asarray(self.values)
        if self.values.shape != (len(self.family),):
            raise ConfigurationError(
                f"expected {len(self.family)} values, got shape {self.values.shape}")

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values != 0)

    def __getitem__(self, s: Subcomplex):
        return self.values[self.family.ordinal(s)]

    @classmethod
    def from_counts(cls, family: SubcomplexFamily, counts: dict, total: int):
        """Atomic vector of exact frequencies; ``counts`` keyed by bits."""
        vals = np.array([Fraction(0)] * len(family), dtype=object)
        for b, c in counts.items():
            vals[family.index[b]] = Fraction(int(c), int(total))
        return cls(family, "atomic", vals)

    def to_float(self) -> "DistributionVector":
        return DistributionVector(self.family, self.form, self.values.astype(float))


def _common_numerators(vals):
    """Fractions -> (int64 numerators, denominator) or None if too large."""
    fr = [Fraction(v) for v in vals]
    if not fr:
        return np.zeros(0, np.int64), 1
    den = math.lcm(*(f.denominator for f in fr))
    nums = [f.numerator * (den // f.denominator) for f in fr]
    if den >= 2 ** 62 or sum(abs(x) for x in nums) >= 2 ** 62:
        return None
    return np.array(nums, dtype=np.int64), den


def _superset_mask(fam_bits: np.ndarray, sup_bits: np.ndarray) -> np.ndarray:
    """mask[i, j] = family member i is contained in support member j."""
    return (fam_bits[:, None] & ~sup_bits[None, :]) == 0


def _require_small(family):
    if family.n > 6:
        raise ConfigurationError("n > 6 not supported")


def p_from_P(d: DistributionVector) -> DistributionVector:
    """Cumulative from atomic: p_s = sum over t containing s of P_t."""
    if d.form != "atomic":
        raise ConfigurationError("p_from_P expects an atomic vector")
    fam = d.family
    _require_small(fam)
    idx = d.support()
    fb = fam.bits_array
    sb = fb[idx]
    M = len(fam)
    chunk = max(1, (1 << 24) // max(M, 1))
    if d.exact:
        packed = _common_numerators(d.values[idx])
        if packed is None:
            out = [Fraction(0)] * M
            for j in idx:
                t = fam.bits[j]
                for i, s in enumerate(fam.bits):
                    if s & ~t == 0:
                        out[i] += d.values[j]
            return DistributionVector(fam, "cumulative", np.array(out, dtype=object))
        nums, den = packed
        acc = np.zeros(M, dtype=np.int64)
        for a in range(0, len(idx), chunk):
            acc += _superset_mask(fb, sb[a:a + chunk]).astype(np.int64) @ nums[a:a + chunk]
        vals = np.array([Fraction(int(x), den) for x in acc], dtype=object)
        return DistributionVector(fam, "cumulative", vals)
    w = d.values[idx].astype(float)
    acc = np.zeros(M)
    for a in range(0, len(idx), chunk):
        acc += _superset_mask(fb, sb[a:a + chunk]) @ w[a:a + chunk]
    return DistributionVector(fam, "cumulative", acc)


@lru_cache(maxsize=None)
def _addable(n: int, bits: int) -> tuple[int, ...]:
    """Faces whose proper faces are all present (the empty face for {Ø})."""
    if bits == 0:
        return (0,)
    d = down_bits(n)
    return tuple(m for m in range(1, 1 << n)
                 if not bits >> m & 1 and (d[m] & ~(1 << m)) & ~bits == 0)


def _signed_subset_sum(base: int, adds, lookup, values, exact):
    """sum over subsets S of adds of (-1)^|S| values[lookup[base | S]]."""
    k = len(adds)
    orv = [0] * (1 << k)
    terms = []
    for sub in range(1 << k):
        if sub:
            low = sub & -sub
            orv[sub] = orv[sub ^ low] | (1 << adds[low.bit_length() - 1])
        v = values[lookup[base | orv[sub]]]
        terms.append(-v if sub.bit_count() & 1 else v)
    return sum(terms, Fraction(0)) if exact else fsum(terms)


def P_from_p(d: DistributionVector, tol: float = 1e-9) -> DistributionVector:
    """Atomic from cumulative by Möbius inversion on the downset lattice."""
    if d.form != "cumulative":
        raise ConfigurationError("P_from_p expects a cumulative vector")
    fam = d.family
    out = []
    for s in fam.bits:
        out.append(_signed_subset_sum(s, _addable(fam.n, s), fam.index, d.values, d.exact))
    vals = np.array(out, dtype=object if d.exact else float)
    worst = min(out) if out else 0
    if worst < -tol:
        raise ConfigurationError(
            f"cumulative vector is not a distribution (atomic mass {float(worst):.3g})")
    return DistributionVector(fam, "atomic", vals)


# ------------------------------------------------------------ chi law

@dataclass
class ChiDistribution:
    range: IntegerRange
    p_path: list          # P(chi = m) from atomic masses
    moment_path: list     # same law through moments + inverse Vandermonde
    moments: list
    discrepancy: float
    exact: bool

    def prob(self, m: int):
        return self.moment_path[m - self.range.lo]

    @property
    def mean(self):
        return self.moments[1] / self.moments[0] if len(self.moments) > 1 else self.range.lo


def _both_forms(d: DistributionVector):
    if d.form == "atomic":
        return d, p_from_P(d)
    return P_from_p(d), d


def _check_paths(rng, p_path, moment_path, moments, exact, tol):
    disc = max(abs(float(a - b)) for a, b in zip(p_path, moment_path))
    if disc > tol:
        raise NumericalConsistencyError(
            f"direct and moment paths disagree by {disc:.3g} (tol {tol:g})")
    return ChiDistribution(rng, p_path, moment_path, moments, disc, exact)


def chi_distribution(d: DistributionVector, rng: IntegerRange,
                     tol: float = CONSISTENCY_TOL) -> ChiDistribution:
    P, p = _both_forms(d)
    fam = d.family
    exact = d.exact
    zero = Fraction(0) if exact else 0.0
    bins = [[] for _ in rng.values]
    for i in P.support():
        c = int(fam.chis[i])
        if c not in rng:
            if abs(float(P.values[i])) > tol:
                raise ConfigurationError(f"mass on chi={c} outside range [{rng.lo}, {rng.hi}]")
            continue
        bins[c - rng.lo].append(P.values[i])
    p_path = [sum(b, zero) if exact else fsum(b) for b in bins]

    sup = p.support()
    mu = []
    for k in range(rng.N + 1):
        col = coefficient_column(CHI, fam.n, k)
        terms = [col[i] * p.values[i] for i in sup if col[i]]
        mu.append(sum(terms, zero) if exact else fsum(terms))
    probs, _ = distribution_from_moments(MomentVector(rng, mu), exact=exact)
    return _check_paths(rng, p_path, probs, mu, exact, tol)


# ------------------------------------------------------------ pairs

@dataclass
class PairDistributionVector:
    """Values on pairs (s, r), r a subcomplex of s, keyed by ordinals."""
    family: SubcomplexFamily
    form: str
    values: dict

    def __post_init__(self):
        if self.form not in FORMS:
            raise ConfigurationError(f"form must be one of {FORMS}")
        bits = self.family.bits
        for (i, j) in self.values:
            if bits[j] & ~bits[i]:
                raise ConfigurationError("pair (s, r) with r not inside s")

    @property
    def exact(self) -> bool:
        return any(isinstance(v, Fraction) for v in self.values.values())

    @classmethod
    def from_counts(cls, family, counts: dict, total: int):
        ix = family.index
        vals = {(ix[a], ix[b]): Fraction(int(c), int(total)) for (a, b), c in counts.items()}
        return cls(family, "atomic", vals)

    @classmethod
    def from_single(cls, d: DistributionVector):
        """Lift a vector for a graph without boundary: r is always {Ø}."""
        e = d.family.index[0]
        vals = {(i, e): d.values[i] for i in d.support()}
        return cls(d.family, d.form, vals)


def pair_p_from_P(d: PairDistributionVector) -> PairDistributionVector:
    if d.form != "atomic":
        raise ConfigurationError("pair_p_from_P expects an atomic vector")
    fam = d.family
    fb = fam.bits_array
    M = len(fam)
    items = [(k, v) for k, v in d.values.items() if v != 0]
    exact = d.exact
    if exact:
        packed = _common_numerators([v for _, v in items])
        if packed is None:
            raise ConfigurationError("denominators too large for the exact pair path")
        w, den = packed
    else:
        w, den = np.array([float(v) for _, v in items]), None
    keys, weights = [], []
    for (pos, ((i, j), _)) in enumerate(items):
        S = np.flatnonzero((fb & ~fb[i]) == 0)
        R = np.flatnonzero((fb & ~fb[j]) == 0)
        ok = (fb[R][None, :] & ~fb[S][:, None]) == 0
        a, b = np.nonzero(ok)
        keys.append(S[a].astype(np.int64) * M + R[b])
        weights.append(np.full(len(a), w[pos], dtype=w.dtype))
    if not keys:
        return PairDistributionVector(fam, "cumulative", {})
    keys = np.concatenate(keys)
    weights = np.concatenate(weights)
    uk, inv = np.unique(keys, return_inverse=True)
    tot = np.zeros(len(uk), dtype=weights.dtype)
    np.add.at(tot, inv, weights)
    vals = {}
    for key, t in zip(uk.tolist(), tot.tolist()):
        vals[(key // M, key % M)] = Fraction(int(t), den) if exact else float(t)
    return PairDistributionVector(fam, "cumulative", vals)


def pair_P_from_p(d: PairDistributionVector, tol: float = 1e-9) -> PairDistributionVector:
    """Möbius inversion on the lattice of pairs: each step adds a face to s
    (facets in s) or a face of s to r (facets in r)."""
    if d.form != "cumulative":
        raise ConfigurationError("pair_P_from_p expects a cumulative vector")
    fam = d.family
    n, bits, ix = fam.n, fam.bits, fam.index
    exact = d.exact
    get = d.values.get
    zero = Fraction(0) if exact else 0.0
    out = {}
    for i, s in enumerate(bits):
        for j, r in enumerate(bits):
            if r & ~s:
                continue
            moves = [("s", m) for m in _addable(n, s)]
            moves += [("r", m) for m in _addable(n, r) if s >> m & 1]
            tot = []
            for sub in range(1 << len(moves)):
                ss, rr = s, r
                for b, (side, m) in enumerate(moves):
                    if sub >> b & 1:
                        if side == "s":
                            ss |= 1 << m
                        else:
                            rr |= 1 << m
                v = get((ix[ss], ix[rr]), zero)
                tot.append(-v if sub.bit_count() & 1 else v)
            val = sum(tot, zero) if exact else fsum(tot)
            if val < -tol:
                raise ConfigurationError("cumulative pair vector is not a distribution")
            if val != 0:
                out[(i, j)] = val
    return PairDistributionVector(fam, "atomic", out)


@lru_cache(maxsize=1 << 16)
def _pair_shape(n: int, sb: int, rb: int):
    s, r = Subcomplex(n, sb), Subcomplex(n, rb)
    te = [m for m in top_faces(s) if not rb >> m & 1]
    return len(te) + len(top_faces(r))


@lru_cache(maxsize=1 << 18)
def _c_rel(n: int, sb: int, rb: int, k: int) -> int:
    return c_chi_rel(Subcomplex(n, sb), Subcomplex(n, rb), k)


def relative_chi_distribution(d: PairDistributionVector, rng: IntegerRange,
                              tol: float = CONSISTENCY_TOL) -> ChiDistribution:
    if d.form == "atomic":
        P, p = d, pair_p_from_P(d)
    else:
        P, p = pair_P_from_p(d), d
    fam = d.family
    n, bits, chis = fam.n, fam.bits, fam.chis
    exact = d.exact
    zero = Fraction(0) if exact else 0.0
    bins = [[] for _ in rng.values]
    for (i, j), v in P.values.items():
        c = int(chis[i] - chis[j])
        if c not in rng:
            if abs(float(v)) > tol:
                raise ConfigurationError(f"mass on chi_rel={c} outside [{rng.lo}, {rng.hi}]")
            continue
        bins[c - rng.lo].append(v)
    p_path = [sum(b, zero) if exact else fsum(b) for b in bins]

    mu = [[] for _ in range(rng.N + 1)]
    for (i, j), v in p.values.items():
        if v == 0:
            continue
        width = _pair_shape(n, bits[i], bits[j])
        # a k-th difference over more than k maximal elements vanishes
        for k in range(min(width, rng.N + 1), rng.N + 1):
            c = _c_rel(n, bits[i], bits[j], k)
            if c:
                mu[k].append(c * v)
    mu = [sum(t, zero) if exact else fsum(t) for t in mu]
    probs, _ = distribution_from_moments(MomentVector(rng, mu), exact=exact)
    return _check_paths(rng, p_path, probs, mu, exact, tol)


# ------------------------------------------------------------ reports

@dataclass
class CoverageReport:
    method: str            # exact-pipeline | mc-pipeline | mc-oracle | stevens
    probability: object
    stderr: float = 0.0
    samples: int = 0
    rejections: int = 0
    diagnostics: dict = field(default_factory=dict)


def chi_range(X: MetricGraph, n: int, relative: bool = False) -> IntegerRange:
    lo = chi_rel_graph(X) if relative else euler_char_graph(X)
    return IntegerRange(lo, n)


def coverage_probability_closed(d: DistributionVector, X: MetricGraph) -> CoverageReport:
    if X.boundary:
        raise ConfigurationError("graph has boundary points; use the relative variant")
    rng = chi_range(X, d.family.n)
    cd = chi_distribution(d, rng)
    return CoverageReport("exact-pipeline", cd.prob(rng.lo), 0.0, diagnostics={
        "direct_path": cd.p_path[0], "discrepancy": cd.discrepancy,
        "mean_chi": cd.mean, "chi_distribution": cd})


def coverage_probability_relative(d: PairDistributionVector, X: MetricGraph) -> CoverageReport:
    rng = chi_range(X, d.family.n, relative=True)
    cd = relative_chi_distribution(d, rng)
    return CoverageReport("exact-pipeline", cd.prob(rng.lo), 0.0, diagnostics={
        "direct_path": cd.p_path[0], "discrepancy": cd.discrepancy,
        "mean_chi": cd.mean, "chi_distribution": cd})


def azuma_bound(mu0, n: int, X: MetricGraph) -> float:
    """exp(-mu0^2 / (2 n (|chi_rel(X)| + 2)^2)), mu0 = E[chi_rel] - chi_rel(X)."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    if mu0 < 0:
        raise ConfigurationError(f"shifted mean must be >= 0, got {mu0}")
    c = abs(chi_rel_graph(X)) + 2
    return math.exp(-float(mu0) ** 2 / (2 * n * c * c))


def shifted_mean(cd: ChiDistribution):
    return cd.mean - cd.range.lo


# ------------------------------------------------------------ Monte Carlo

@dataclass(frozen=True)
class UniformSampler:
    """Centers uniform with respect to length."""
    name = "uniform"

    def draw(self, X: MetricGraph, rng, T: int, n: int):
        _, _, L = X.edge_arrays
        cum = np.cumsum(L)
        x = rng.random((T, n)) * cum[-1]
        k = np.minimum(np.searchsorted(cum, x, side="right"), len(L) - 1)
        off = np.clip(x - (cum[k] - L[k]), 0.0, L[k])
        return k.astype(np.int64), off


@dataclass(frozen=True)
class EdgeMixtureSampler:
    """Pick an edge with the given weights, then a uniform offset."""
    weights: tuple
    name = "edge-mixture"

    def draw(self, X: MetricGraph, rng, T: int, n: int):
        _, _, L = X.edge_arrays
        w = np.asarray(self.weights, dtype=float)
        if w.shape != L.shape or (w < 0).any() or w.sum() <= 0:
            raise ConfigurationError("edge-mixture weights must be nonnegative, one per edge")
        k = rng.choice(len(L), size=(T, n), p=w / w.sum()).astype(np.int64)
        off = rng.random((T, n)) * L[k]
        return k, off


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        w = int(raw)
    except ValueError:
        raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if w < 1:
        raise ConfigurationError(f"{WORKERS_ENV} must be >= 1")
    return w


def worker_rng(seed: int, worker: int):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(worker,))
    return np.random.Generator(np.random.Philox(ss))


def _merge(dst: dict, keys, counts):
    for k, c in zip(keys, counts):
        dst[k] = dst.get(k, 0) + int(c)


def _run_chunk(X, n, eps, trials, seed, worker, sampler, on_violation, batch):
    from ._kernels import down_array, process_batch

    rng = worker_rng(seed, worker)
    u, v, L = X.edge_arrays
    D = X.vertex_distances
    bnd = X.boundary_indices
    iso = np.array([X.degree[w] == 0 for w in X.vertices])
    down = down_array(n)
    check_rips = eps < X.girth / 6
    res = dict(nerve={}, pair={}, shortcut={}, covered=0, covered_all=0, accepted=0,
               violations=0, drawn=0, rips_mismatch=0)
    chi_of = {}
    while True:
        need = trials - (res["accepted"] if on_violation == "reject" else res["drawn"])
        if need <= 0:
            break
        T = min(batch, need)
        ce, ct = sampler.draw(X, rng, T, n)
        nb, bb, rb, cov, comps, nbc, bad = process_batch(u, v, L, D, bnd, iso, ce, ct,
                                                         float(eps), X.tol, down)
        res["drawn"] += T
        nviol = int(bad.sum())
        res["violations"] += nviol
        res["covered_all"] += int(cov.sum())
        if on_violation == "reject":
            keep = ~bad
            if nviol:
                room = trials - res["accepted"]
                keep &= np.cumsum(keep) <= room
        else:
            keep = ~bad
        if check_rips:
            res["rips_mismatch"] += int((nb[keep] != rb[keep]).sum())
        nb, bb, cov, nbc = nb[keep], bb[keep], cov[keep], nbc[keep]
        res["accepted"] += int(keep.sum())
        res["covered"] += int(cov.sum())
        uk, uc = np.unique(nb, return_counts=True)
        _merge(res["nerve"], uk.tolist(), uc)
        pairs = np.stack([nb, bb], axis=1)
        pk, pc = np.unique(pairs, axis=0, return_counts=True)
        _merge(res["pair"], [tuple(r) for r in pk.tolist()], pc)
        uk, inv = np.unique(nb, return_inverse=True)
        for b in uk.tolist():
            if b not in chi_of:
                chi_of[b] = euler_char(Subcomplex(n, b))
        chi = np.array([chi_of[b] for b in uk.tolist()], dtype=np.int64)[inv.ravel()]
        sk, sc = np.unique(chi - nbc, return_counts=True)
        _merge(res["shortcut"], sk.tolist(), sc)
        if res["drawn"] >= 1000 and res["violations"] > MAX_REJECTION_RATE * res["drawn"]:
            break
    return res


@dataclass
class McResult:
    graph: MetricGraph
    n: int
    eps: float
    trials: int
    seed: int
    workers: int
    sampler: str
    on_violation: str
    accepted: int
    violations: int
    drawn: int
    covered: int
    covered_all: int
    nerve_counts: dict
    pair_counts: dict
    shortcut_counts: dict
    rips_mismatch: int
    good_guaranteed: bool

    @property
    def family(self):
        return enumerate_subcomplexes(self.n)

    def atomic(self) -> DistributionVector:
        return DistributionVector.from_counts(self.family, self.nerve_counts, self.accepted)

    def pair_atomic(self) -> PairDistributionVector:
        return PairDistributionVector.from_counts(self.family, self.pair_counts, self.accepted)

    def chi_distribution(self) -> ChiDistribution:
        return chi_distribution(self.atomic(), chi_range(self.graph, self.n))

    def relative_chi_distribution(self) -> ChiDistribution:
        return relative_chi_distribution(self.pair_atomic(),
                                         chi_range(self.graph, self.n, relative=True))

    def _se(self, p, T):
        p = float(p)
        return math.sqrt(max(p * (1 - p), 0.0) / T) if T else float("nan")

    def pipeline_report(self) -> CoverageReport:
        if self.graph.boundary:
            cd = self.relative_chi_distribution()
        else:
            cd = self.chi_distribution()
        p = cd.prob(cd.range.lo)
        return CoverageReport("mc-pipeline", p, self._se(p, self.accepted), self.accepted,
                              self.violations, {"direct_path": cd.p_path[0],
                                                "discrepancy": cd.discrepancy,
                                                "chi_distribution": cd})

    def oracle_report(self) -> CoverageReport:
        if self.on_violation == "keep":
            p, T = Fraction(self.covered_all, self.drawn), self.drawn
        else:
            p, T = Fraction(self.covered, self.accepted), self.accepted
        return CoverageReport("mc-oracle", p, self._se(p, T), T, self.violations)

    def shortcut_probability(self):
        """P(chi(N) - #covered boundary points = chi_rel(X))."""
        target = chi_rel_graph(self.graph)
        return Fraction(self.shortcut_counts.get(target, 0), self.accepted)


def mc_estimate(X: MetricGraph, n: int, eps: float, trials: int, seed: int = 0,
                workers: int | None = None, sampler=None, on_violation: str = "reject",
                relax_good_cover: bool = False, batch: int = 1 << 16) -> McResult:
    """Sample ball centers, build nerves in batches and tally them.

    Pair-good-cover violations (one ball reaching two boundary points) are
    resampled under ``reject`` or kept out of the pipeline under ``keep``."""
    if not 1 <= n <= 6:
        raise ConfigurationError("n must lie in [1, 6]")
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    if on_violation not in ("reject", "keep"):
        raise ConfigurationError("on_violation must be 'reject' or 'keep'")
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    if not X.edges:
        raise ConfigurationError("graph has no edges to sample from")
    good = eps < X.girth / 4
    if not good and not relax_good_cover:
        raise ConfigurationError(
            f"eps={eps} >= girth/4={X.girth / 4:.6g}: balls may not form a good cover")
    sampler = sampler or UniformSampler()
    split = [trials // workers + (w < trials % workers) for w in range(workers)]
    args = [(X, n, eps, split[w], seed, w, sampler, on_violation, batch)
            for w in range(workers) if split[w]]
    if workers == 1:
        parts = [_run_chunk(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, *zip(*args)))
    tot = dict(nerve={}, pair={}, shortcut={}, covered=0, covered_all=0, accepted=0,
               violations=0, drawn=0, rips_mismatch=0)
    for part in parts:
        for key in ("nerve", "pair", "shortcut"):
            _merge(tot[key], part[key].keys(), part[key].values())
        for key in ("covered", "covered_all", "accepted", "violations", "drawn",
                    "rips_mismatch"):
            tot[key] += part[key]
    if tot["violations"] > MAX_REJECTION_RATE * tot["drawn"]:
        raise ConfigurationError(
            f"{tot['violations']} of {tot['drawn']} samples violate the pair good-cover "
            "condition; eps is too large for this graph")
    if tot["rips_mismatch"]:
        raise NumericalConsistencyError(
            f"{tot['rips_mismatch']} nerves differ from the Rips complex below girth/6")
    return McResult(X, n, eps, trials, seed, workers, sampler.name, on_violation,
                    tot["accepted"], tot["violations"], tot["drawn"], tot["covered"],
                    tot["covered_all"], dict(sorted(tot["nerve"].items())),
                    dict(sorted(tot["pair"].items())), dict(sorted(tot["shortcut"].items())),
                    tot["rips_mismatch"], good)


def timed(fn, *a, **kw):
    t = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t
