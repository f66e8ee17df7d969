from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from evograph.graph import export_edge_list
from evograph.harness import grow
from evograph.metrics import is_connected
from evograph.models import (MODELS, ModelError, SequenceBoundError, SequenceSpec,
                             StepTrace, Strategy, config_from_json, default_config, init)
from evograph.sampling import RngStream
from evograph.validation import reduction_distributions, rho_delta_exact, rho_dir_exact

ALL = sorted(MODELS)


@pytest.mark.parametrize("name", ALL)
def test_growth_is_reproducible(name):
    a = grow(default_config(name), 300, seed=11)
    b = grow(default_config(name), 300, seed=11)
    c = grow(default_config(name), 300, seed=12)
    assert export_edge_list(a.graph) == export_edge_list(b.graph)
    assert export_edge_list(a.graph) != export_edge_list(c.graph)


@pytest.mark.parametrize("name", ALL)
def test_replaying_traces_reproduces_the_graph(name):
    state = init(default_config(name))
    traces = []
    state.grow(200, RngStream(4), lambda tr: traces.append(tr.to_json()))
    fresh = init(default_config(name))
    for line in traces:
        fresh.replay(StepTrace.from_json(line))
    assert export_edge_list(fresh.graph) == export_edge_list(state.graph)


@pytest.mark.parametrize("name", ALL)
def test_debug_invariants_and_connectivity(name):
    state = grow(default_config(name, debug=True), 400, seed=3)
    assert state.t == 400
    assert is_connected(state.graph)


def test_default_seeds():
    assert init("pref").graph.num_edges == 1
    kt = init("ktree")
    assert kt.graph.num_vertices == 3 and kt.cliques == [(0, 1, 2)]
    cp = init("copying").graph
    assert cp.num_vertices == 3 and cp.outdeg == [2, 2, 2]
    assert init("pegging").graph.deg == [3, 3, 3, 3]
    assert init("acl_c").graph.num_edges == 2


def test_config_json_roundtrip():
    for name in ALL:
        cfg = default_config(name)
        assert config_from_json(cfg.to_json()).to_json() == cfg.to_json()


def test_config_errors():
    with pytest.raises(ModelError):
        default_config("hybrid", p_a=0.5, p_b=0.6, p_c=0.0)
    with pytest.raises(ModelError):
        default_config("cooper_frieze", p=(0, 0, 0.25, 0.25, 0.25, 0.25))
    with pytest.raises(ModelError):
        init({"model": "pref", "seed_graph": {"n": 3, "edges": [[0, 1]]}})
    with pytest.raises(ModelError):
        init({"model": "pegging", "seed_graph": {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]}})
    with pytest.raises(ModelError):
        init("nosuchmodel")


def test_copying_seed_follows_d():
    # the default seed is the complete digraph on d+1 vertices
    assert init({"model": "copying", "d": 3}).graph.outdeg == [3] * 4
    bad = {"n": 2, "edges": [[0, 1], [1, 0]]}
    with pytest.raises(ModelError):
        init({"model": "copying", "d": 2, "seed_graph": bad})


# ---------------------------------------------------------- per-model laws

def test_forest_fire_p_zero_burns_the_reachable_set():
    state = init({"model": "forest_fire", "p": 0.0, "q": 0.0})
    rng = RngStream(8)
    for _ in range(40):
        before = state.graph.num_vertices
        tr = state.step(rng)
        # weakly connected graph and unlimited burning: everything burns
        assert sorted(tr.samples["burned"]) == list(range(before))


def test_forest_fire_p_one_burns_only_the_ambassador():
    state = init({"model": "forest_fire", "p": 1.0, "q": 1.0})
    rng = RngStream(8)
    for _ in range(50):
        tr = state.step(rng)
        assert tr.samples["burned"] == [tr.samples["ambassador"]]
    assert all(d == 1 for d in state.graph.outdeg[2:])


def test_copying_extremes():
    state = init({"model": "copying", "p": 0.0})
    rng = RngStream(1)
    g = state.graph
    for _ in range(30):
        amb_heads = None
        tr = state.step(rng)
        a = tr.samples["ambassador"]
        amb_heads = [g.heads[e] for e in g.out_edges[a]]
        assert tr.samples["heads"] == amb_heads and all(tr.samples["copied"])


def test_hybrid_uniform_mode_has_zero_length_walks():
    state = grow(default_config("hybrid", p_a=1.0, p_b=0.0, p_c=0.0), 50, seed=2)
    assert set(state.graph.outdeg) == {2}


def test_pref_edge_counts():
    cfg = default_config("pref", A={"kind": "uniform", "lo": 1, "hi": 3},
                         B={"kind": "uniform", "lo": 0, "hi": 2})
    state = init(cfg)
    rng = RngStream(5)
    m = state.graph.num_edges
    for _ in range(200):
        tr = state.step(rng)
        m += tr.samples["A"] + tr.samples["B"]
    assert state.graph.num_edges == m


def test_pref_new_vertex_strategy_creates_loops():
    cfg = default_config("pref", A=3, strategy=Strategy(target="new_vertex"))
    state = grow(cfg, 20, seed=0)
    assert state.graph.num_edges == 1 + 20 * 3
    loops = sum(1 for _, k, t, h in state.graph.edges() if t == h)
    assert loops == 40


def test_acl_d_counts():
    cfg = default_config("acl_d", X={"kind": "uniform", "lo": 1, "hi": 2}, Y=1, Z=1)
    state = init(cfg)
    rng = RngStream(6)
    m = state.graph.num_edges
    for _ in range(100):
        tr = state.step(rng)
        m += tr.samples["X"] + tr.samples["Y"] + tr.samples["Z"]
    assert state.graph.num_edges == m


def test_glp_operations():
    state = init(default_config("glp", p=0.5))
    rng = RngStream(7)
    for _ in range(200):
        n, m = state.graph.num_vertices, state.graph.num_edges
        tr = state.step(rng)
        assert state.graph.num_edges == m + tr.samples["X"]
        assert state.graph.num_vertices == n + (tr.op == "a")


def test_parid_strict_and_lenient():
    cfg = default_config("parid", X={"kind": "pmf", "pmf": [[1, 0.5], [5, 0.5]]}, u=3)
    with pytest.raises(SequenceBoundError):
        grow(cfg, 200, seed=0)
    state = grow(cfg.replace(strict=False), 200, seed=0)
    assert max(state.graph.deg[2:]) >= 1
    with pytest.raises(ModelError):
        default_config("parid", delta=0)


def test_dsf_and_cf_edge_counts():
    for name in ("directed_scale_free", "cooper_frieze"):
        state = init(default_config(name))
        rng = RngStream(9)
        m = state.graph.num_edges
        for _ in range(300):
            m += state.step(rng).samples["X"]
        assert state.graph.num_edges == m


def test_pegging_step_shape():
    state = init("pegging")
    rng = RngStream(1)
    for _ in range(100):
        n, m = state.graph.num_vertices, state.graph.num_edges
        tr = state.step(rng)
        assert tr.samples["e"] != tr.samples["f"]
        assert state.graph.num_vertices == n + 2 and state.graph.num_edges == m + 3
    assert set(state.graph.deg) == {3}


def test_clique_counts():
    kt, ap = grow(default_config("ktree"), 100, seed=1), grow(default_config("apollonian"), 100, seed=1)
    assert len(kt.eligible) == 1 + 100 * 3
    assert len(ap.eligible) == 1 + 100 * 2
    assert set(kt.graph.deg[3:]) >= {3}


def test_apollonian_never_rechooses_a_clique():
    state = init("apollonian")
    rng = RngStream(2)
    seen = set()
    for _ in range(500):
        cid = state.step(rng).samples["clique"]
        assert cid not in seen
        seen.add(cid)


def test_sequence_spec_bounds():
    s = SequenceSpec("uniform", lo=1, hi=3, upper=2)
    rng = RngStream(0)
    with pytest.raises(SequenceBoundError):
        for _ in range(200):
            s.emit(rng, 1)
    assert SequenceSpec("geometric", p=0.5).support() == (1, None)
    with pytest.raises(ModelError):
        SequenceSpec("pmf", pmf=((1, 0.5),))


# ----------------------------------------------------- reduction equivalence

small_graph = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=n - 1, max_size=6)))


def _connect(n, edges):
    # chain the vertices so every sample is a connected graph
    return [(i, i + 1) for i in range(n - 1)] + [e for e in edges if e[0] != e[1]]


@settings(max_examples=25, deadline=None)
@given(small_graph, st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(2)]))
def test_glp_native_equals_reduction(ng, delta):
    n, edges = ng
    edges = _connect(n, edges)
    native, reduction = reduction_distributions("glp", edges, n, "both", delta=str(delta))
    assert native == reduction == rho_delta_exact(n, edges, delta)


@settings(max_examples=25, deadline=None)
@given(small_graph)
def test_acl_d_native_equals_reduction(ng):
    n, edges = ng
    edges = _connect(n, edges)
    native, reduction = reduction_distributions("acl_d", edges, n, "both")
    assert native == reduction == rho_delta_exact(n, edges, 0)


@settings(max_examples=25, deadline=None)
@given(small_graph, st.sampled_from(["in", "out"]))
def test_acl_c_native_equals_reduction(ng, side):
    n, edges = ng
    edges = _connect(n, edges)
    native, reduction = reduction_distributions("acl_c", edges, n, side)
    assert native == reduction == rho_dir_exact(n, edges, 0, side)


@settings(max_examples=25, deadline=None)
@given(small_graph, st.sampled_from(["in", "out"]),
       st.sampled_from(["1/2", "1", "1/3"]), st.sampled_from(["1/2", "2", "0"]))
def test_dsf_native_equals_reduction(ng, side, alpha, beta):
    n, edges = ng
    edges = _connect(n, edges)
    native, reduction = reduction_distributions("directed_scale_free", edges, n, side,
                                                alpha=alpha, beta=beta)
    delta = Fraction(alpha) if side == "in" else Fraction(beta)
    assert native == reduction == rho_dir_exact(n, edges, delta, side)


def test_forest_fire_traces_are_consistent_burns():
    seed = {"n": 4, "edges": [[1, 0], [2, 1], [3, 1], [0, 3]]}
    state = init({"model": "forest_fire", "p": 0.5, "q": 0.5, "seed_graph": seed})
    g, rng = state.graph, RngStream(42)
    for _ in range(60):
        outs = [sorted(g.heads[e] for e in g.out_edges[x]) for x in range(g.num_vertices)]
        ins = [sorted(g.tails[e] for e in g.in_edges[x]) for x in range(g.num_vertices)]
        tr = state.step(rng)
        burned = tr.samples["burned"]
        assert burned[0] == tr.samples["ambassador"] and len(set(burned)) == len(burned)
        for i, y in enumerate(burned[1:], 1):
            assert any(y in outs[x] or y in ins[x] for x in burned[:i])
        v = tr.new_vertices[0]
        assert [(g.tails[e], g.heads[e]) for e in tr.new_edges] == [(v, b) for b in burned]
