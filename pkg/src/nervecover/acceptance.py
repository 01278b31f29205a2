"""The acceptance suite, shared by ``pytest`` and ``nervecover selftest``.

Each check returns a CriterionResult; nothing here is tuned to pass, the
tolerances are the ones the package promises.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coeffs import (CHI, CHI_REL, FACE_COUNT, c_bruteforce, c_chi, c_chi_rel,
                     c_face_count)
from .coverage import (PairDistributionVector, azuma_bound, chi_distribution,
                       coverage_probability_closed, mc_estimate, relative_chi_distribution,
                       shifted_mean)
from .metric_graph import circle, euler_char_graph, interval, theta
from .moments import (IntegerRange, distribution_from_moments, inverse_vandermonde,
                      moments_of, vandermonde)
from .nerve import (build_nerve, build_rips, complement_components, covers_fully,
                    random_realization)
from .simplicial import enumerate_bruteforce, enumerate_subcomplexes, euler_char
from .stevens import gap_moments, stevens_coverage, stevens_gap_dist, three_arc_p_vector

ALPHA_GRID = (0.10, 0.20, 0.30, 0.35, 0.40, 0.45)
MC_SAMPLES = 10 ** 6


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number, name, limit=None):
    def deco(fn):
        def run(**kw):
            t = time.perf_counter()
            ok, detail = fn(**kw)
            dt = time.perf_counter() - t
            if limit is not None and dt > limit:
                ok = False
                detail += f"; over the {limit:g}s budget"
            return CriterionResult(number, name, ok, detail, dt)
        run.number = number
        run.title = name
        return run
    return deco


@_timed(1, "three-arc coverage exactness", limit=1.0)
def criterion_1():
    worst = 0.0
    for a in ALPHA_GRID:
        rep = coverage_probability_closed(three_arc_p_vector(a), circle())
        want = (3 * a - 1) ** 2 if a > 1 / 3 else 0.0
        worst = max(worst, abs(rep.probability - want))
    return worst <= 1e-10, f"max |P(cover) - closed form| = {worst:.2e}"


@_timed(2, "three-arc moment regression", limit=1.0)
def criterion_2():
    worst = 0.0
    for a in (0.2, 0.35, 0.4, 0.45):
        cd = chi_distribution(three_arc_p_vector(a), IntegerRange(0, 3))
        for k in (1, 2, 3):
            worst = max(worst, abs(cd.moments[k] - gap_moments(a, k)))
    return worst <= 1e-10, f"max moment error = {worst:.2e}"


def _tv(p, q):
    return 0.5 * sum(abs(float(a) - float(b)) for a, b in zip(p, q))


@_timed(3, "gap-count law", limit=120.0)
def criterion_3(samples=MC_SAMPLES):
    worst = 0.0
    for a in ALPHA_GRID:
        cd = chi_distribution(three_arc_p_vector(a), IntegerRange(0, 3))
        worst = max(worst, max(abs(x - y) for x, y in zip(cd.moment_path, stevens_gap_dist(3, a))))
    tvs = []
    for n in (4, 5):
        alpha = 0.15
        res = mc_estimate(circle(), n, alpha / 2, samples, seed=11 + n, workers=1)
        cd = res.chi_distribution()
        tvs.append(_tv(cd.moment_path, stevens_gap_dist(n, alpha)))
    ok = worst <= 1e-10 and max(tvs) < 0.01
    return ok, f"n=3 max error {worst:.2e}; MC total variation n=4,5: " + \
        ", ".join(f"{t:.4f}" for t in tvs)


@_timed(4, "circle oracle triangulation", limit=180.0)
def criterion_4(samples=MC_SAMPLES):
    parts, ok = [], True
    for n, a in ((3, 0.4), (4, 0.3), (5, 0.25)):
        res = mc_estimate(circle(), n, a / 2, samples, seed=100 + n, workers=1)
        pipe, orac = res.pipeline_report(), res.oracle_report()
        ref = stevens_coverage(n, a)
        se = math.hypot(pipe.stderr, orac.stderr)
        gaps = (abs(float(pipe.probability) - float(orac.probability)),
                abs(float(pipe.probability) - ref), abs(float(orac.probability) - ref))
        ok &= max(gaps) <= 3 * se
        parts.append(f"n={n}: pipe={float(pipe.probability):.5f} oracle="
                     f"{float(orac.probability):.5f} closed={ref:.5f} "
                     f"({max(gaps) / se:.2f} se)")
    return ok, "; ".join(parts)


# reference three-arc coefficients, keyed by a canonical complex shape
def _three_arc_reference(k):
    return {
        "x": 1,
        "xy": 2 ** k - 2,
        "xyz": 3 - 3 * 2 ** k + 3 ** k,
        "axy": 1 - 2 ** k,
        "axyz": -1 + 2 ** (k + 1) - 3 ** k,
        "abxyz": 1 - 2 ** (k + 1) + 3 ** k,
        "abcxyz": -3 + 3 * 2 ** k - 3 ** k,
        "F": 1,
    }


_SHAPES = {
    "x": "1", "xy": "1+2", "xyz": "1+2+3", "axy": "12", "axyz": "3+12",
    "abxyz": "12+13", "abcxyz": "12+13+23", "F": "123",
}

# coefficient sums after setting every vertex label to 1, grouped by
# (vertex-only, one edge, two edges, three edges, with 2-face)
_GROUPED = {1: (3, -1, 0, 0, 1), 2: (9, -5, 2, 0, 1), 3: (27, -19, 12, -6, 1)}


def _grouped_sums(k):
    from .stevens import EDGE_MASKS, TRIANGLE
    fam = enumerate_subcomplexes(3)
    out = [0] * 5
    edge_a = EDGE_MASKS[0]
    for s in fam:
        if s.bits <= 1:
            continue
        edges = [m for m in EDGE_MASKS if m in s]
        if TRIANGLE in s:
            out[4] += c_chi(s, k)
        elif not edges:
            out[0] += c_chi(s, k)
        elif len(edges) == 1 and edges[0] == edge_a:
            out[1] += c_chi(s, k)
        elif len(edges) == 2 and edge_a in edges and EDGE_MASKS[1] in edges:
            out[2] += c_chi(s, k)
        elif len(edges) == 3:
            out[3] += c_chi(s, k)
    return tuple(out)


@_timed(5, "coefficient oracle equivalence", limit=60.0)
def criterion_5():
    from .simplicial import parse
    bad = 0
    f4, f3 = enumerate_subcomplexes(4), enumerate_subcomplexes(3)
    for k in range(7):
        bad += sum(c_chi(s, k) != c_bruteforce(CHI, s, k) for s in f4)
    for d in range(3):
        for k in range(5):
            bad += sum(c_face_count(s, d, k) != c_bruteforce(FACE_COUNT(d), s, k) for s in f4)
    for k in range(6):
        for s in f3:
            for r in f3:
                bad += c_chi_rel(s, r, k) != c_bruteforce(CHI_REL, s, k, r)
    ref = 0
    for k in range(1, 8):
        for shape, want in _three_arc_reference(k).items():
            ref += c_chi(parse(_SHAPES[shape], 3), k) != want
    for k, want in _GROUPED.items():
        ref += _grouped_sums(k) != want
    return bad == 0 and ref == 0, \
        f"{bad} oracle mismatches, {ref} mismatches against reference coefficients"


@_timed(6, "moment machinery exactness")
def criterion_6():
    worst = Fraction(0)
    for N in range(13):
        for lo in range(-12, 13):
            rng = IntegerRange(lo, lo + N)
            V = vandermonde(rng)
            W = inverse_vandermonde(rng, exact=True).v
            for i in range(N + 1):
                for j in range(N + 1):
                    e = sum(V[i][k] * W[k][j] for k in range(N + 1)) - (i == j)
                    worst = max(worst, abs(e))
    gen = np.random.default_rng(2024)
    rt = 0.0
    for _ in range(100):
        N = int(gen.integers(0, 11))
        lo = int(gen.integers(-6, 3))
        q = gen.dirichlet(np.ones(N + 1))
        q = [Fraction(float(x)) for x in q]
        rng = IntegerRange(lo, lo + N)
        p, _ = distribution_from_moments(moments_of(q, rng))
        rt = max(rt, max(abs(float(a - b)) for a, b in zip(p, q)))
    ok = worst <= 1e-10 and rt <= 1e-8
    return ok, f"max |V V^-1 - I| = {float(worst):.1e} (exact mode); roundtrip error {rt:.1e}"


@_timed(7, "subcomplex family sizes")
def criterion_7():
    sizes = tuple(len(enumerate_subcomplexes(n)) for n in range(1, 6))
    brute = all(tuple(enumerate_bruteforce(n)) == enumerate_subcomplexes(n).bits
                for n in range(1, 5))
    return sizes == (3, 6, 20, 168, 7581) and brute, f"sizes {sizes}; filter cross-check {brute}"


@_timed(8, "nerve lemma regime properties")
def criterion_8(samples=10 ** 4):
    gen = np.random.default_rng(8)
    bad_rips = bad_range = bad_gap = 0
    for X in (circle(), theta()):
        lo = euler_char_graph(X)
        for t in range(samples):
            n = 1 + t % 6
            eps = float(gen.uniform(0.01, 0.999) * X.girth / 6)
            r = random_realization(X, n, eps, gen)
            s = build_nerve(r, check_rips=False).complex
            bad_rips += s.bits != build_rips(r).bits
            chi = euler_char(s)
            bad_range += not lo <= chi <= n
            if X.name == "circle":
                want = 0 if covers_fully(r) else complement_components(r)
                bad_gap += chi != want
    ok = bad_rips == bad_range == bad_gap == 0
    return ok, (f"{2 * samples} realizations: {bad_rips} Rips mismatches, {bad_range} out of "
                f"range, {bad_gap} gap-count mismatches")


@_timed(9, "relative pipeline on the interval")
def criterion_9(samples=MC_SAMPLES):
    # three balls of radius 0.15 span 0.9 < 1, so both sides are 0 here;
    # a four-ball run at the same radius checks a nonzero probability too
    agree, parts = True, []
    for n, T in ((3, samples), (4, samples // 10)):
        res = mc_estimate(interval(), n, 0.15, T, seed=9 + n, workers=1)
        pipe, orac = res.pipeline_report(), res.oracle_report()
        se = math.hypot(pipe.stderr, orac.stderr)
        gap = abs(float(pipe.probability) - float(orac.probability))
        agree &= gap <= 3 * se or pipe.probability == orac.probability
        parts.append(f"n={n}: pipeline {float(pipe.probability):.6f} vs oracle "
                     f"{float(orac.probability):.6f}")
    # empty boundary: the pair pipeline must equal the absolute one exactly
    circ = mc_estimate(circle(), 3, 0.2, samples // 10, seed=90, workers=1)
    absolute = circ.chi_distribution()
    rel = relative_chi_distribution(PairDistributionVector.from_single(circ.atomic()),
                                    IntegerRange(0, 3))
    rel2 = circ.relative_chi_distribution()
    same = absolute.moment_path == rel.moment_path == rel2.moment_path
    return agree and same, "; ".join(parts) + f"; empty-boundary reduction exact: {same}"


@_timed(10, "concentration bound dominance")
def criterion_10():
    X = circle()
    dom = True
    for a in ALPHA_GRID:
        rep = coverage_probability_closed(three_arc_p_vector(a), X)
        mu0 = shifted_mean(rep.diagnostics["chi_distribution"])
        dom &= azuma_bound(mu0, 3, X) >= rep.probability - 1e-12
    cd = chi_distribution(three_arc_p_vector(0.2), IntegerRange(0, 3))
    b = azuma_bound(shifted_mean(cd), 3, X)
    err = abs(b - math.exp(-1.92 ** 2 / 24))
    return dom and err <= 1e-10, f"dominance on grid {dom}; bound at alpha=0.2 = {b:.12f} (err {err:.1e})"


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(out=print):
    results = []
    for c in CRITERIA:
        r = c()
        out(r.line())
        results.append(r)
    return results
