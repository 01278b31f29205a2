import math

import pytest

from nervecover.cli import parse_graph_file
from nervecover.errors import ConfigurationError, InputOutputError
from nervecover.metric_graph import (Edge, MetricGraph, chi_rel_graph, circle, euler_char_graph,
                                     graph_to_text, intrinsic_distance, interval, load_graph,
                                     parse_graph, shortest_cycle_length, theta, ytree)


def test_distances():
    X = circle()
    p = X.point(0, 0.1)
    assert intrinsic_distance(X, p, p) == 0
    assert intrinsic_distance(X, p, X.point(0, 0.9)) == pytest.approx(0.2)
    Y = interval()
    assert intrinsic_distance(Y, Y.point(0, 0.2), Y.point(0, 0.7)) == pytest.approx(0.5)
    T = theta()
    # through a vertex: from the middle of a to the middle of c
    assert intrinsic_distance(T, T.point("a", 0.5), T.point("c", 1.0)) == pytest.approx(1.5)


def test_metric_axioms():
    X = ytree(1, 2, 3)
    pts = [X.point(k, t) for k in range(3) for t in (0.0, 0.3, 0.9)]
    for p in pts:
        for q in pts:
            d = intrinsic_distance(X, p, q)
            assert d == pytest.approx(intrinsic_distance(X, q, p))
            for r in pts:
                assert d <= intrinsic_distance(X, p, r) + intrinsic_distance(X, r, q) + 1e-12


def test_girth():
    assert shortest_cycle_length(circle()) == 1
    assert shortest_cycle_length(theta(1, 1, 2)) == 2
    assert shortest_cycle_length(interval(0.7)) == pytest.approx(0.7)
    assert shortest_cycle_length(ytree(1, 2, 3)) == pytest.approx(3)
    X = MetricGraph(("u", "v"), (Edge("e", "u", "v", 1.0),), boundary=())
    assert math.isinf(shortest_cycle_length(X))


def test_euler_characteristics():
    assert euler_char_graph(circle()) == 0
    assert euler_char_graph(theta()) == -1
    assert euler_char_graph(interval()) == 1
    assert chi_rel_graph(interval()) == -1
    assert chi_rel_graph(circle()) == 0
    assert chi_rel_graph(ytree()) == -2


def test_boundary_defaults_to_leaves():
    assert set(ytree().boundary) == {"x", "y", "z"}
    assert not circle().boundary
    with pytest.raises(ConfigurationError):
        MetricGraph(("u", "v"), (Edge("e", "u", "v", 1.0),), boundary=("w",))


def test_validation():
    with pytest.raises(ConfigurationError):
        MetricGraph(("u",), (Edge("e", "u", "w", 1.0),))
    with pytest.raises(ConfigurationError):
        MetricGraph(("u", "v"), (Edge("e", "u", "v", 0.0),))
    with pytest.raises(ConfigurationError):
        circle().point(0, 1.5)


def test_fixtures(fixtures):
    X = parse_graph_file(fixtures / "circle.graph")
    assert euler_char_graph(X) == 0 and X.girth == 1
    assert euler_char_graph(parse_graph_file(fixtures / "theta.graph")) == -1
    assert chi_rel_graph(parse_graph_file(fixtures / "ytree.graph")) == -2


def test_parse_errors(fixtures):
    with pytest.raises(ConfigurationError, match="line 3"):
        parse_graph_file(fixtures / "bad_length.graph")
    with pytest.raises(ConfigurationError, match="line 1"):
        parse_graph("vertices u v\n")
    with pytest.raises(ConfigurationError, match="disconnected"):
        parse_graph("vertex u\nvertex v\nvertex w\nedge e u v 1\n")
    with pytest.raises(InputOutputError):
        parse_graph_file(fixtures / "missing.graph")
    with pytest.raises(InputOutputError):
        load_graph("no/such/file.graph")


def test_text_roundtrip():
    X = theta(0.5, 1.25, 3)
    Y = parse_graph(graph_to_text(X))
    assert Y.edges == X.edges and Y.vertices == X.vertices
