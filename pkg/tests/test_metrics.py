import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evograph import metrics
from evograph.graph import Mode, from_edges
from evograph.harness import grow
from evograph.models import MODELS, default_config
from evograph.validation import fixture_graphs

nx = pytest.importorskip("networkx")


def _nx(view):
    G = nx.Graph()
    G.add_nodes_from(range(view.n))
    for v in range(view.n):
        for w in view.indices[view.indptr[v]:view.indptr[v + 1]]:
            G.add_edge(v, int(w))
    return G


@pytest.mark.parametrize("name,view,want", fixture_graphs(), ids=lambda x: x if isinstance(x, str) else "")
def test_fixture_diameters(name, view, want):
    assert metrics.diameter_exact(view) == want
    if view.n > 1:
        assert nx.diameter(_nx(view)) == want


connected = st.integers(2, 40).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.integers(0, 10 ** 6), min_size=n - 1, max_size=n - 1),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n)))


def _random_connected(n, parents, extra):
    # vertex i attaches to a random earlier vertex, then extra edges on top
    edges = [(parents[i - 1] % i, i) for i in range(1, n)] + extra
    return metrics.DistanceView.from_pairs(n, [a for a, _ in edges], [b for _, b in edges])


@settings(max_examples=150, deadline=None)
@given(connected)
def test_diameter_matches_networkx(sample):
    view = _random_connected(*sample)
    G = _nx(view)
    assert metrics.diameter_exact(view) == nx.diameter(G) == metrics.diameter_oracle(view)
    ecc = nx.eccentricity(G)
    srcs = np.arange(view.n)
    assert metrics.eccentricities(view, srcs).tolist() == [ecc[v] for v in range(view.n)]


@settings(max_examples=100, deadline=None)
@given(connected, st.integers(0, 39))
def test_bfs_levels_match_networkx(sample, src):
    view = _random_connected(*sample)
    src = src % view.n
    want = nx.single_source_shortest_path_length(_nx(view), src)
    assert metrics.bfs_levels(view, src).tolist() == [want[v] for v in range(view.n)]


@settings(max_examples=60, deadline=None)
@given(connected, st.lists(st.integers(0, 39), min_size=1, max_size=5))
def test_loops_and_parallel_edges_do_not_change_distances(sample, dup):
    n, parents, extra = sample
    base = [(parents[i - 1] % i, i) for i in range(1, n)] + extra
    g1 = from_edges(base, n=n)
    mutated = base + [base[d % len(base)] for d in dup] + [(d % n, d % n) for d in dup]
    g2 = from_edges(mutated, n=n)
    assert metrics.diameter_exact(g1) == metrics.diameter_exact(g2)
    assert np.array_equal(metrics.bfs_depths(g1), metrics.bfs_depths(g2))


def test_directions_and_dummies_are_ignored():
    g = from_edges([(0, 1), (2, 1), (None, 2), (3, None), (3, 2)], mode=Mode.GENERALIZED)
    assert metrics.bfs_depths(g).tolist() == [0, 1, 2, 3]
    assert metrics.diameter_exact(g) == 3


def test_disconnected_inputs():
    g = from_edges([(0, 1), (2, 3)], n=4)
    assert not metrics.is_connected(g)
    with pytest.raises(metrics.ConnectivityError):
        metrics.bfs_depths(g)
    with pytest.raises(metrics.ConnectivityError):
        metrics.diameter_oracle(g)


def test_multi_source_depths():
    g = from_edges([(i, i + 1) for i in range(6)])
    assert metrics.bfs_depths(g, [0, 6]).tolist() == [0, 1, 2, 3, 2, 1, 0]


def test_compiled_and_numpy_eccentricities_agree():
    g = grow(default_config("glp"), 800, seed=5).graph
    view = metrics.DistanceView.from_graph(g)
    batch = np.arange(0, view.n, 7, dtype=np.int64)[:100]
    words = (len(batch) + 63) // 64
    a = metrics._ms_ecc_numpy(view.indptr, view.indices, batch, words)
    b = metrics._ms_ecc(view.indptr, view.indices, batch, words)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("name", sorted(MODELS))
def test_model_graph_diameters(name):
    g = grow(default_config(name), 300, seed=9).graph
    assert metrics.diameter_exact(g) == metrics.diameter_oracle(g)
    h = metrics.height_from_root(g)
    assert h <= metrics.diameter_exact(g) <= 2 * h


def test_oracle_size_guard():
    g = from_edges([(i, i + 1) for i in range(metrics.ORACLE_MAX_N + 1)])
    with pytest.raises(ValueError):
        metrics.diameter_oracle(g)
