"""Exact and statistical self-checks of the samplers and the diameter engine.

Exact checks run a sampler against :class:`ScriptedRng`, which walks every
sequence of ``below`` outcomes in turn, and so produce the sampler's output
distribution as exact fractions.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

import numpy as np

from . import metrics
from .graph import Mode, from_edges
from .models import init
from .models.hat import HatMirror
from .sampling import (PAGERANK, WeightIndex, as_fraction, pagerank_power_iteration,
                       pagerank_walk_sample, rho0_sample, RngStream, shifted_geo_tail,
                       walk_length_tail)

DELTAS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


class ScriptedRng:
    """Answers ``below`` calls from a fixed prefix of choices, then zeros."""

    def __init__(self, prefix=()):
        self.prefix = list(prefix)
        self.choices: list[int] = []
        self.sizes: list[int] = []

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below needs n >= 1")
        i = len(self.choices)
        c = self.prefix[i] if i < len(self.prefix) else 0
        self.choices.append(c)
        self.sizes.append(n)
        return c

    def random(self):
        raise TypeError("continuous draws cannot be enumerated")


def enumerate_outcomes(sampler, max_paths: int = 10 ** 6) -> dict:
    """Exact output distribution of ``sampler(rng)`` over all choice paths."""
    dist: dict = defaultdict(Fraction)
    prefix: list[int] = []
    for _ in range(max_paths):
        rng = ScriptedRng(prefix)
        out = sampler(rng)
        p = Fraction(1)
        for n in rng.sizes:
            p /= n
        dist[out] += p
        ch, sz = rng.choices, rng.sizes
        i = len(ch) - 1
        while i >= 0 and ch[i] + 1 >= sz[i]:
            i -= 1
        if i < 0:
            return dict(dist)
        prefix = ch[:i] + [ch[i] + 1]
    raise RuntimeError(f"more than {max_paths} choice paths")


def connected_graphs(max_vertices: int = 5, max_edges: int = 6, min_vertices: int = 2):
    """Every connected labelled simple graph in the size window, as edge lists."""
    for n in range(min_vertices, max_vertices + 1):
        slots = list(itertools.combinations(range(n), 2))
        for m in range(n - 1, min(max_edges, len(slots)) + 1):
            for edges in itertools.combinations(slots, m):
                view = metrics.DistanceView.from_pairs(
                    n, [a for a, _ in edges], [b for _, b in edges])
                if metrics.is_connected(view):
                    yield n, list(edges)


def rho_delta_exact(n, edges, delta) -> dict:
    """``(deg(v)+delta) / sum_u (deg(u)+delta)`` as fractions."""
    delta = as_fraction(delta)
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    total = 2 * len(edges) + n * delta
    return {v: (deg[v] + delta) / total for v in range(n) if deg[v] + delta}


def rho_dir_exact(n, edges, delta, side) -> dict:
    """Directed version on the tail (``out``) or head (``in``) side."""
    delta = as_fraction(delta)
    deg = [0] * n
    for a, b in edges:
        deg[a if side == "out" else b] += 1
    total = len(edges) + n * delta
    return {v: (deg[v] + delta) / total for v in range(n) if deg[v] + delta}


def hat_distribution(n, edges, delta) -> dict:
    delta = as_fraction(delta)
    r, s = delta.numerator, delta.denominator
    hat = HatMirror(from_edges(edges, n=n), copies=2 * s, loops=r)
    return enumerate_outcomes(lambda rng: hat.sample_endpoint(rng)[1])


def hat_dir_distribution(n, edges, delta, side) -> dict:
    delta = as_fraction(delta)
    r, s = delta.numerator, delta.denominator
    g = from_edges(edges, n=n, mode=Mode.GENERALIZED)
    extra = {"tailless": r} if side == "in" else {"headless": r}
    hat = HatMirror(g, copies=s, **extra)
    draw = hat.sample_in if side == "in" else hat.sample_out
    return enumerate_outcomes(lambda rng: draw(rng)[1])


def index_distribution(n, edges, delta) -> dict:
    delta = as_fraction(delta)
    r, s = delta.numerator, delta.denominator
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    idx = WeightIndex([s * d + r for d in deg])
    return enumerate_outcomes(idx.sample)


def check_sampler_exactness(max_vertices=5, max_edges=6, deltas=DELTAS) -> dict:
    """Compare ``rho_delta`` with the hat-graph and Fenwick samplers on every
    small connected graph. Returns counts and the first mismatch, if any."""
    checked, mismatch = 0, None
    for n, edges in connected_graphs(max_vertices, max_edges):
        for delta in deltas:
            exact = rho_delta_exact(n, edges, delta)
            got = {"hat": hat_distribution(n, edges, delta),
                   "index": index_distribution(n, edges, delta)}
            if delta == 0:
                g = from_edges(edges, n=n)
                got["rho0"] = enumerate_outcomes(lambda rng: rho0_sample(rng, g))
            checked += 1
            for name, dist in got.items():
                if dist != exact and mismatch is None:
                    mismatch = (n, edges, str(delta), name)
    return {"checked": checked, "mismatch": mismatch, "ok": mismatch is None}


def reduction_distributions(model: str, edges, n: int, side: str = "both", **cfg):
    """Target distribution of one draw under the native and the reduction
    sampler of ``model`` started from the seed graph ``edges``."""
    seed = {"n": n, "edges": [list(e) for e in edges]}
    out = []
    for sampler in ("native", "reduction"):
        state = init({"model": model, "seed_graph": seed, "sampler": sampler, **cfg})
        out.append(enumerate_outcomes(lambda rng: state._draw(rng, side)[1]))
    return tuple(out)


# ---------------------------------------------------------------- PageRank

def fixed_out_regular_digraph(n: int = 20, d: int = 3, seed: int = 0):
    """Strongly connected digraph: a directed cycle plus ``d-1`` random
    out-edges per vertex."""
    rng = RngStream(seed, stream=1)
    edges = []
    for v in range(n):
        edges.append((v, (v + 1) % n))
        for _ in range(d - 1):
            edges.append((v, rng.below(n)))
    return from_edges(edges, n=n, mode=Mode.DIRECTED)


def pagerank_tv(samples: int = 10 ** 6, q: float = 0.8, seed: int = 0, g=None) -> float:
    """Total variation between walk endpoints and the stationary vector."""
    g = fixed_out_regular_digraph() if g is None else g
    pi = pagerank_power_iteration(g, q, tol=1e-12)
    rng = RngStream(seed, stream=2)
    counts = np.zeros(g.num_vertices)
    for _ in range(samples):
        counts[pagerank_walk_sample(rng, g, q, PAGERANK)[0]] += 1
    return 0.5 * float(np.abs(counts / samples - pi).sum())


def tail_dominance_failures(kmax: int = 64, weights=(Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)),
                            qs=(Fraction(1, 5), Fraction(1, 2), Fraction(4, 5))) -> list:
    """Grid points where ``P(L > k) > P(1 + Geo(1-q) > k)``; ``(p_a, p_b, p_c)``
    is each weight triple normalized to sum to 1."""
    bad = []
    for wa, wb, wc in itertools.product(weights, repeat=3):
        tot = wa + wb + wc
        pa, pb, pc = wa / tot, wb / tot, wc / tot
        for q in qs:
            for k in range(kmax + 1):
                if walk_length_tail(k, pa, pb, pc, q) > shifted_geo_tail(k, q):
                    bad.append((pa, pb, pc, q, k))
    return bad


# --------------------------------------------------------------- diameters

def fixture_graphs():
    """``(name, view, diameter)`` for paths, cycles, stars and cliques."""
    out = []
    for n in (1, 2, 3, 7, 50):
        out.append((f"path{n}", _view(n, [(i, i + 1) for i in range(n - 1)]), n - 1))
        out.append((f"star{n}", _view(n, [(0, i) for i in range(1, n)]), min(n - 1, 2)))
        out.append((f"clique{n}", _view(n, list(itertools.combinations(range(n), 2))),
                    min(n - 1, 1)))
    for n in (3, 4, 9, 40):
        out.append((f"cycle{n}", _view(n, [(i, (i + 1) % n) for i in range(n)]), n // 2))
    return out


def _view(n, edges):
    return metrics.DistanceView.from_pairs(n, [a for a, _ in edges], [b for _, b in edges])


def random_instances(count: int = 200, max_n: int = 500, seed: int = 0):
    """Graphs grown by every model family, cycled, with sizes up to ``max_n``."""
    from .harness import grow
    from .models import MODELS, default_config

    names = sorted(MODELS)
    rng = RngStream(seed, stream=3)
    for i in range(count):
        name = names[i % len(names)]
        state = init(default_config(name))
        # pegging adds two vertices a step
        per_step = 2 if name == "pegging" else 1
        steps = rng.below((max_n - state.g0_vertices) // per_step) + 1
        state = grow(default_config(name), steps, seed=i)
        yield name, state.graph


def check_diameters(count: int = 200, max_n: int = 500) -> dict:
    mismatches = []
    for name, view, want in fixture_graphs():
        if metrics.diameter_exact(view) != want or metrics.diameter_oracle(view) != want:
            mismatches.append(name)
    n_random = 0
    for name, g in random_instances(count, max_n):
        n_random += 1
        if metrics.diameter_exact(g) != metrics.diameter_oracle(g):
            mismatches.append(f"{name}@{g.num_vertices}")
    return {"random": n_random, "mismatches": mismatches, "ok": not mismatches}


def run_all(quick: bool = False) -> list[tuple[str, bool, str]]:
    """The batteries behind ``evograph validate``."""
    results = []
    r = check_sampler_exactness(4 if quick else 5, 5 if quick else 6)
    results.append(("sampler-exactness", r["ok"], f"{r['checked']} graph/delta pairs"))
    tv = pagerank_tv(20_000 if quick else 10 ** 6)
    limit = 0.05 if quick else 0.01
    results.append(("pagerank-tv", tv < limit, f"tv={tv:.5f} limit={limit}"))
    bad = tail_dominance_failures()
    results.append(("walk-tail-dominance", not bad, f"{len(bad)} failures"))
    d = check_diameters(28 if quick else 200)
    results.append(("diameter-oracle", d["ok"], f"{d['random']} random, {len(d['mismatches'])} mismatches"))
    return results


__all__ = ["ScriptedRng", "enumerate_outcomes", "connected_graphs", "rho_delta_exact",
           "rho_dir_exact", "hat_distribution", "hat_dir_distribution",
           "index_distribution", "check_sampler_exactness", "reduction_distributions",
           "fixed_out_regular_digraph", "pagerank_tv", "tail_dominance_failures",
           "fixture_graphs", "random_instances", "check_diameters", "run_all"]
