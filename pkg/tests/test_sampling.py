import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from evograph.graph import Mode, from_edges
from evograph.sampling import (RngStream, SamplingError, WeightIndex, geo_sample,
                               pagerank_power_iteration, rho0_sample, rho_dir_sample,
                               shifted_geo_tail, transition_matrix, walk_length_tail)
from evograph.validation import (ScriptedRng, enumerate_outcomes, hat_dir_distribution,
                                 rho_delta_exact, rho_dir_exact, index_distribution,
                                 hat_distribution)


def test_streams_are_reproducible_and_distinct():
    a = [RngStream(5, 0).below(10 ** 9) for _ in range(3)]
    b = [RngStream(5, 0).below(10 ** 9) for _ in range(3)]
    c = RngStream(5, 1).below(10 ** 9)
    assert a == b and c != a[0]


def test_below_is_uniform_chi_square():
    rng = RngStream(1)
    counts = np.bincount([rng.below(7) for _ in range(70_000)], minlength=7)
    assert stats.chisquare(counts).pvalue > 1e-3


def test_geometric_convention_mean_and_pmf():
    # Geo(p) has P(k) = (1-p)^k p, so the mean is (1-p)/p
    for p in (0.2, 0.5, 0.9):
        rng = RngStream(2)
        xs = np.array([geo_sample(rng, p) for _ in range(50_000)])
        mean = (1 - p) / p
        sd = math.sqrt((1 - p) / p ** 2 / len(xs))
        assert abs(xs.mean() - mean) < 5 * sd
        assert abs((xs == 0).mean() - p) < 0.01
    assert geo_sample(RngStream(0), 1.0) == 0
    with pytest.raises(ValueError):
        geo_sample(RngStream(0), 0.0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=40), st.data())
def test_weight_index_find_matches_linear_scan(weights, data):
    if sum(weights) == 0:
        weights[0] = 1
    idx = WeightIndex()
    for w in weights:
        idx.append(w)
    bumps = data.draw(st.lists(st.tuples(st.integers(0, len(weights) - 1), st.integers(0, 5)),
                               max_size=10))
    for i, dw in bumps:
        idx.add(i, dw)
        weights[i] += dw
    assert idx.total == sum(weights)
    for x in range(idx.total):
        acc, want = 0, None
        for i, w in enumerate(weights):
            acc += w
            if acc > x:
                want = i
                break
        assert idx.find(x) == want


def test_weight_index_exact_distribution():
    dist = enumerate_outcomes(WeightIndex([3, 0, 1, 4]).sample)
    assert dist == {0: Fraction(3, 8), 2: Fraction(1, 8), 3: Fraction(1, 2)}


def test_scripted_rng_enumerates_products():
    def two(rng):
        return rng.below(2), rng.below(3)
    dist = enumerate_outcomes(two)
    assert len(dist) == 6 and all(p == Fraction(1, 6) for p in dist.values())
    with pytest.raises(TypeError):
        ScriptedRng().random()


def test_rho0_is_degree_proportional():
    g = from_edges([(0, 1), (1, 2), (1, 3), (3, 3)], n=4)
    dist = enumerate_outcomes(lambda rng: rho0_sample(rng, g))
    assert dist == {0: Fraction(1, 8), 1: Fraction(3, 8), 2: Fraction(1, 8), 3: Fraction(3, 8)}


@pytest.mark.parametrize("delta", [0, Fraction(1, 2), 1, 2, Fraction(3, 4)])
def test_hat_and_index_match_rho_delta(delta):
    edges = [(0, 1), (1, 2), (2, 0), (2, 3)]
    exact = rho_delta_exact(4, edges, delta)
    assert hat_distribution(4, edges, delta) == exact
    assert index_distribution(4, edges, delta) == exact


@pytest.mark.parametrize("side", ["in", "out"])
@pytest.mark.parametrize("delta", [0, Fraction(1, 2), 1, Fraction(5, 3)])
def test_directed_hat_matches_rho_dir(side, delta):
    edges = [(0, 1), (1, 2), (2, 0), (0, 2), (3, 0)]
    assert hat_dir_distribution(4, edges, delta, side) == rho_dir_exact(4, edges, delta, side)


def test_rho_dir_sample_on_the_fly_index():
    g = from_edges([(0, 1), (0, 2), (1, 2)], mode=Mode.DIRECTED)
    dist = enumerate_outcomes(lambda rng: rho_dir_sample(rng, g, "in", Fraction(1)))
    assert dist == {0: Fraction(1, 6), 1: Fraction(1, 3), 2: Fraction(1, 2)}


def test_empty_populations_raise():
    g = from_edges([], n=2)
    with pytest.raises(SamplingError):
        rho0_sample(RngStream(0), g)
    with pytest.raises(SamplingError):
        WeightIndex([0, 0]).sample(RngStream(0))


def test_pagerank_matches_dense_solve():
    g = from_edges([(0, 1), (1, 2), (2, 0), (2, 1), (1, 0), (0, 2)], mode=Mode.DIRECTED)
    q = 0.7
    P = transition_matrix(g).toarray()
    n = g.num_vertices
    pi = np.linalg.solve(np.eye(n) - q * P.T, np.full(n, (1 - q) / n))
    assert np.allclose(pagerank_power_iteration(g, q), pi, atol=1e-11)
    assert np.allclose(P.sum(axis=1), 1)


def test_pagerank_needs_out_edges():
    g = from_edges([(0, 1)], mode=Mode.DIRECTED)
    with pytest.raises(SamplingError):
        pagerank_power_iteration(g, 0.5)


@settings(max_examples=100, deadline=None)
@given(st.fractions(0, 1), st.fractions(0, 1), st.fractions(0, Fraction(99, 100)),
       st.integers(0, 64))
def test_walk_tail_dominated_by_shifted_geometric(a, b, q, k):
    c = 1 - a - b
    if c < 0:
        return
    assert walk_length_tail(k, a, b, c, q) <= shifted_geo_tail(k, q)


def test_walk_tail_values():
    # P(L > 0) = p_b + p_c q and P(L > 2) = p_c q^3
    assert walk_length_tail(0, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)) \
        == Fraction(1, 4) + Fraction(1, 8)
    assert walk_length_tail(2, 0, 0, 1, Fraction(1, 2)) == Fraction(1, 8)
    assert Counter(shifted_geo_tail(k, Fraction(1, 3)) for k in (0, 1)) == Counter([1, Fraction(1, 3)])
