import numpy as np
import pytest

from nervecover._kernels import down_array, process_batch
from nervecover.coverage import UniformSampler
from nervecover.errors import ConfigurationError
from nervecover.metric_graph import Edge, GraphPoint, MetricGraph, circle, interval, theta, ytree
from nervecover.nerve import (BallCoverRealization, ball_intervals, boundary_indicators,
                              boundary_nerve, build_nerve, build_rips, complement_components,
                              covered_betti, covers_fully, pair_good_cover_check,
                              random_realization, realization_rows)
from nervecover.simplicial import Subcomplex, euler_char, face_from_vertices as F


def lollipop():
    return MetricGraph(("o", "x"), (Edge("loop", "o", "o", 1.0), Edge("stick", "o", "x", 0.5)))


def cover(X, eps, offsets, edge=0):
    return BallCoverRealization(X, eps, [X.point(edge, t) for t in offsets])


def cx(*faces, n=3):
    return Subcomplex.from_faces([F(f) for f in faces], n, close=True)


def test_ball_intervals():
    X = circle()
    assert ball_intervals(X, X.point(0, 0.5), 0.2) == [[pytest.approx((0.3, 0.7))]]
    assert ball_intervals(X, X.point(0, 0.5), 0.6) == [[(0.0, 1.0)]]
    Y = interval()
    assert ball_intervals(Y, Y.point(0, 0.0), 0.25) == [[(0.0, 0.25)]]


def test_nerve_examples():
    X = circle()
    r = cover(X, 0.05, (0.0, 0.3, 0.6))
    assert build_nerve(r).complex == cx((1,), (2,), (3,))
    assert euler_char(build_nerve(r).complex) == 3
    r = cover(X, 0.2, (0.0, 0.25, 0.5))
    path = cx((1, 2), (2, 3))
    assert build_nerve(r, check_rips=False).complex == path
    assert build_rips(r) == path
    r = cover(X, 0.2, (0.0, 0.1, 0.2))
    assert build_nerve(r, check_rips=False).complex == cx((1, 2, 3))


def test_rips_fills_cliques_nerve_does_not():
    # three balls pairwise meeting around a circle with no common point
    r = cover(circle(), 0.17, (0.0, 1 / 3, 2 / 3))
    assert build_rips(r) == cx((1, 2, 3))
    nerve = build_nerve(r, check_rips=False)
    assert nerve.complex == cx((1, 2), (1, 3), (2, 3))
    assert nerve.is_good_guaranteed and not nerve.is_rips_valid


def test_boundary_indicators():
    assert boundary_indicators(cover(circle(), 0.1, (0.2,))).shape == (1, 0)
    r = cover(interval(), 0.2, (0.1,))
    assert boundary_indicators(r).tolist() == [[True, False]]
    assert boundary_nerve(r) == cx((1,), n=1)


def test_pair_good_cover():
    assert pair_good_cover_check(cover(interval(0.3), 0.2, (0.15,))).violations == (0,)
    assert pair_good_cover_check(cover(interval(), 0.2, (0.5,))).ok
    assert cover(circle(), 0.2, (0.1,)).is_good_guaranteed
    assert not cover(circle(), 0.3, (0.1,)).is_good_guaranteed


def test_coverage_examples():
    X = circle()
    r = cover(X, 0.2, (0.0, 1 / 3, 2 / 3))
    assert covers_fully(r) and complement_components(r) == 0
    r = cover(X, 0.2, (0.0, 0.0, 0.0))
    assert not covers_fully(r) and complement_components(r) == 1
    r = BallCoverRealization(X, 0.2, ())
    assert not covers_fully(r) and complement_components(r) == 1
    assert build_nerve(r).complex.bits == 0


def test_complement_on_tree():
    X = ytree()
    r = BallCoverRealization(X, 0.3, [X.vertex_point("o")])
    assert complement_components(r) == 3
    assert covered_betti(r) == (1, 0)


def test_too_many_balls():
    with pytest.raises(ConfigurationError):
        cover(circle(), 0.1, [0.1] * 7)


def test_rows():
    rows = list(realization_rows(cover(circle(), 0.1, (0.0,))))
    assert [(b, e) for b, e, _, _ in rows] == [(1, "loop"), (1, "loop")]


GRAPHS = [circle(), theta(), interval(), ytree(1, 0.5, 2), lollipop()]


@pytest.mark.parametrize("X", GRAPHS, ids=lambda g: g.name or "lollipop")
@pytest.mark.parametrize("n", [1, 3, 4])
def test_kernel_matches_reference(X, n):
    rng = np.random.default_rng(17 + n)
    u, v, L = X.edge_arrays
    iso = np.zeros(len(X.vertices), dtype=bool)
    bidx = X.boundary_indices
    for eps in (0.05, 0.15, 0.4):
        ce, ct = UniformSampler().draw(X, rng, 150, n)
        nb, bb, rb, cov, comps, nbc, bad = process_batch(
            u, v, L, X.vertex_distances, bidx, iso, ce, ct, eps, X.tol, down_array(n))
        for t in range(len(ce)):
            r = BallCoverRealization(X, eps, [GraphPoint(int(k), float(o))
                                              for k, o in zip(ce[t], ct[t])])
            assert int(nb[t]) == build_nerve(r, check_rips=False).complex.bits
            assert int(rb[t]) == build_rips(r).bits
            assert int(bb[t]) == boundary_nerve(r).bits
            assert bool(cov[t]) == covers_fully(r)
            assert int(comps[t]) == complement_components(r)
            assert int(nbc[t]) == int(boundary_indicators(r).any(axis=0).sum())
            assert bool(bad[t]) == (not pair_good_cover_check(r).ok)


@pytest.mark.parametrize("X", GRAPHS, ids=lambda g: g.name or "lollipop")
def test_nerve_lemma(X):
    # for good covers the nerve has the Euler characteristic of the union
    rng = np.random.default_rng(5)
    eps = 0.24 * min(X.girth, 4.0)
    for _ in range(300):
        r = random_realization(X, int(rng.integers(1, 6)), eps * rng.random() + 1e-3, rng)
        if not r.is_good_guaranteed:
            continue
        b0, b1 = covered_betti(r)
        assert euler_char(build_nerve(r).complex) == b0 - b1


@pytest.mark.parametrize("X", GRAPHS[:2], ids=lambda g: g.name)
def test_rips_agrees_below_threshold(X):
    rng = np.random.default_rng(9)
    for _ in range(300):
        r = random_realization(X, 4, X.girth / 6 * rng.random() * 0.99 + 1e-3, rng)
        assert build_nerve(r, check_rips=False).complex == build_rips(r)
