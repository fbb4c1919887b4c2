import numpy as np
import pytest

from plap import build_graph, graph_summary, validate_graph
from plap.errors import (
    Disconnected,
    DuplicateVertex,
    EmptySet,
    NonPositiveWeight,
    OverlappingSets,
    SelfLoop,
    UnknownEndpoint,
    UnknownVertex,
)
from plap.graphs import Graph

from conftest import make_path_graph, make_triangle_pendant_graph, random_graph


def test_triangle_pendant_summary():
    g = make_triangle_pendant_graph(a=1.0)
    s = graph_summary(g)
    assert (s.n_interior, s.n_boundary, s.n_vertices) == (3, 3, 6)
    assert s.max_weight == 1.0
    assert s.degrees["x1"] == 3
    assert s.degrees["x4"] == 1


def test_path_summary():
    s = graph_summary(make_path_graph())
    assert (s.n_interior, s.n_boundary, s.n_vertices) == (1, 2, 3)
    assert s.max_weight == 1.0
    assert s.degrees["v1"] == 2


def test_summary_max_weight_scales():
    assert graph_summary(make_triangle_pendant_graph(a=2.5)).max_weight == 2.5


def test_negative_weight_rejected():
    with pytest.raises(NonPositiveWeight):
        build_graph(["x1", "x2"], ["x3"],
                    [("x1", "x2", -0.5), ("x2", "x3", 1.0)])


def test_zero_weight_rejected():
    with pytest.raises(NonPositiveWeight):
        build_graph(["x1"], ["x2"], [("x1", "x2", 0.0)])


def test_self_loop_rejected():
    with pytest.raises(SelfLoop):
        build_graph(["a"], ["b"], [("a", "a", 1.0), ("a", "b", 1.0)])


def test_unknown_endpoint_rejected():
    with pytest.raises(UnknownEndpoint):
        build_graph(["a"], ["b"], [("a", "zz", 1.0)])


def test_duplicate_vertex_rejected():
    with pytest.raises(DuplicateVertex):
        build_graph(["a", "a"], ["b"], [("a", "b", 1.0)])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateVertex):
        build_graph(["a"], ["b"], [("a", "b", 1.0), ("b", "a", 2.0)])


def test_overlapping_sets_rejected():
    with pytest.raises(OverlappingSets):
        build_graph(["a"], ["a", "b"], [("a", "b", 1.0)])


def test_empty_set_rejected():
    with pytest.raises(EmptySet):
        build_graph([], ["a", "b"], [("a", "b", 1.0)])


def test_disconnected_rejected():
    with pytest.raises(Disconnected):
        build_graph(["a", "b"], ["c", "d"], [("a", "c", 1.0), ("b", "d", 1.0)])


def test_unknown_vertex_lookup():
    g = make_path_graph()
    with pytest.raises(UnknownVertex):
        g.index_of("nope")


def test_validation_passes_after_build():
    rng = np.random.default_rng(0)
    for _ in range(25):
        g = random_graph(rng)
        report = validate_graph(g)
        assert report.passed, report.failures()
        assert g.n_vertices == g.n_interior + g.n_boundary


def test_validation_flags_injected_asymmetry():
    w = np.array([[0.0, 1.0, 1.0], [0.5, 0.0, 0.0], [1.0, 0.0, 0.0]])
    g = Graph(("v1",), ("v0", "v2"), w)
    report = validate_graph(g)
    assert not report.passed
    assert any(c.name == "symmetry" for c in report.failures())


def test_validation_flags_isolated_vertex():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1.0
    g = Graph(("a",), ("b", "c"), w)
    report = validate_graph(g)
    assert any(c.name == "connected" for c in report.failures())


def test_weight_matrix_is_symmetric_with_zero_diagonal():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = random_graph(rng)
        assert np.array_equal(g.weights, g.weights.T)
        assert np.all(np.diag(g.weights) == 0.0)
        assert np.all(g.weights >= 0.0)


def test_vertex_order_is_insertion_order():
    g = build_graph(["b", "a"], ["z", "y"],
                    [("b", "z", 1.0), ("a", "y", 1.0), ("a", "b", 1.0)])
    assert g.vertices == ("b", "a", "z", "y")
