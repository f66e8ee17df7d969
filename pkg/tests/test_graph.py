import pytest
from hypothesis import given, settings, strategies as st

from evograph.graph import (NONE, EdgeKind, GraphError, GrowingGraph, Mode, complete_graph,
                            export_edge_list, from_edges, read_edge_list)


def test_ids_are_dense_and_birth_ordered():
    g = GrowingGraph()
    assert [g.add_vertex(t) for t in range(3)] == [0, 1, 2]
    assert g.add_edge(EdgeKind.PROPER, 2, 0, 5) == 0
    assert g.add_edge(EdgeKind.LOOP, 1, 1, 6) == 1
    assert g.endpoints(0) == (0, 2)  # undirected edges stored low-high
    assert g.deg == [1, 2, 1]
    assert g.num_edges == 2


def test_undirected_rejects_dummy_edges():
    g = from_edges([(0, 1)])
    with pytest.raises(GraphError):
        g.add_edge(EdgeKind.HEADLESS, 0, None)


def test_generalized_dummy_edges_and_pools():
    g = from_edges([(0, 1), (None, 1), (0, None)], mode=Mode.GENERALIZED)
    assert g.kind(1) is EdgeKind.TAILLESS and g.kind(2) is EdgeKind.HEADLESS
    assert sorted(g.headed) == [0, 1] and sorted(g.tailed) == [0, 2]
    assert g.outdeg == [2, 0] and g.indeg == [0, 2]
    assert g.neighbours(0) == [1]


def test_retire_keeps_ids_queryable():
    g = complete_graph(4)
    new = g.replace_edge(0, EdgeKind.PROPER, 0, 1)
    assert g.is_retired(0) and not g.is_retired(new)
    assert g.num_edges == 6 and g.num_edge_ids == 7
    assert 0 not in g.pool
    g.check_degrees()
    with pytest.raises(GraphError):
        g.retire_edge(0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=25),
       st.sampled_from([Mode.UNDIRECTED, Mode.DIRECTED]))
def test_degree_sum_and_roundtrip(pairs, mode):
    g = from_edges(pairs, n=7, mode=mode)
    g.check_degrees()
    total = sum(g.degree(v) for v in range(g.num_vertices))
    assert total == 2 * g.num_edges
    h = read_edge_list(export_edge_list(g))
    assert export_edge_list(h) == export_edge_list(g)
    assert list(h.edges()) == list(g.edges())


def test_dot_export_mentions_every_edge():
    g = from_edges([(0, 1), (None, 1)], mode=Mode.GENERALIZED)
    dot = export_edge_list(g, "dot").decode()
    assert dot.startswith("digraph") and "0 -> 1" in dot and "style=dashed" in dot


def test_read_rejects_bad_header():
    with pytest.raises(ValueError):
        read_edge_list("0\t1\tproper\t0\n")


def test_copy_preserves_retirements():
    g = complete_graph(4)
    g.retire_edge(2)
    h = g.copy()
    assert h.is_retired(2) and h.num_edges == g.num_edges
    assert NONE == -1
