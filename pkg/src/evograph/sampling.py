"""Seeded randomness and the vertex/edge selection rules used by the models.

All samplers draw from an :class:`RngStream`. Integer draws go through
``rng.below(n)``, which is exactly uniform on ``range(n)``; tests replace the
stream with a scripted one to enumerate every outcome of a sampler.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
from scipy import sparse

from .graph import NONE, GrowingGraph, Mode

ALL, HEADED, TAILED, PROPER_UNDIRECTED = "all", "headed", "tailed", "proper"
UNIFORM, UNIFORM_EDGE_HEAD, PAGERANK = "uniform", "edge_head", "pagerank"


class SamplingError(ValueError):
    """Raised when a sampler's population is empty or a contract is broken."""


class RngStream(random.Random):
    """Mersenne Twister stream keyed by ``(seed, stream)``.

    The state is derived through :class:`numpy.random.SeedSequence` with the
    stream id as spawn key, so distinct streams of one master seed are
    statistically independent and the pair fully determines the sequence.
    """

    def __new__(cls, *args, **kwargs):
        return super().__new__(cls)

    def __init__(self, seed: int = 0, stream: int = 0):
        self.master_seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream,))
        state = ss.generate_state(8, dtype=np.uint32)
        super().__init__(int.from_bytes(state.tobytes(), "little"))

    def below(self, n: int) -> int:
        """Uniform integer in ``range(n)``."""
        return self._randbelow(n)

    def spawn(self, stream: int) -> "RngStream":
        return RngStream(self.master_seed, stream)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 6)
    return Fraction(x)


# ---------------------------------------------------------------- geometric

def geo_sample(rng, p: float) -> int:
    """Draw ``Geo(p)`` with ``P(k) = (1-p)^k p`` on ``k = 0, 1, ...``."""
    if not 0 < p <= 1:
        raise ValueError(f"geometric parameter must lie in (0, 1], got {p}")
    if p == 1:
        return 0
    u = rng.random()
    if p > 0.5:
        # short CDF walk; the log form loses precision as p -> 1
        k, mass = 0, p
        cdf = p
        while u >= cdf and mass > 0.0:
            k += 1
            mass *= 1 - p
            cdf += mass
        return k
    return int(math.log1p(-u) / math.log1p(-p))


def geo_pmf(p, k: int):
    return (1 - p) ** k * p


# ------------------------------------------------------------- weight index

class WeightIndex:
    """Fenwick tree over nonnegative integer weights.

    ``find(x)`` returns the smallest index whose inclusive prefix sum exceeds
    ``x``, so drawing ``x`` uniformly from ``range(total)`` selects index ``i``
    with probability exactly ``weight(i) / total``.
    """

    def __init__(self, weights=()):
        self._w: list[int] = []
        self._cap = 1
        self._tree = [0, 0]
        self.total = 0
        self.extend(weights)

    def __len__(self):
        return len(self._w)

    def _rebuild(self, cap):
        tree = [0] * (cap + 1)
        tree[1:len(self._w) + 1] = self._w
        for i in range(1, cap + 1):
            j = i + (i & -i)
            if j <= cap:
                tree[j] += tree[i]
        self._tree, self._cap = tree, cap

    def extend(self, weights):
        weights = list(weights)
        if not weights:
            return
        self._w.extend(weights)
        self.total += sum(weights)
        cap = self._cap
        while cap < len(self._w):
            cap *= 2
        self._rebuild(cap)

    def append(self, w: int) -> int:
        i = len(self._w)
        if i >= self._cap:
            self._w.append(w)
            self.total += w
            self._rebuild(self._cap * 2)
            return i
        self._w.append(0)
        self.add(i, w)
        return i

    def add(self, i: int, dw: int) -> None:
        self._w[i] += dw
        self.total += dw
        tree, cap = self._tree, self._cap
        j = i + 1
        while j <= cap:
            tree[j] += dw
            j += j & -j

    def weight(self, i: int) -> int:
        return self._w[i]

    def find(self, x: int) -> int:
        tree = self._tree
        pos, step = 0, self._cap
        while step:
            nxt = pos + step
            if tree[nxt] <= x:
                pos = nxt
                x -= tree[nxt]
            step >>= 1
        return pos

    def sample(self, rng) -> int:
        if self.total <= 0:
            raise SamplingError("weight index has nonpositive total")
        return self.find(rng.below(self.total))

    def probability(self, i: int) -> Fraction:
        return Fraction(self._w[i], self.total)


def degree_weight_index(g: GrowingGraph, delta=0, side: str = "both") -> WeightIndex:
    """Index with weights ``s*deg(v) + r`` for ``delta = r/s``.

    ``side`` selects the degree: ``both`` (total degree), ``out`` or ``in``.
    """
    delta = as_fraction(delta)
    r, s = delta.numerator, delta.denominator
    if side == "both":
        degs = [g.degree(v) for v in range(g.num_vertices)]
    elif side == "out":
        degs = g.outdeg if g.directed else g.deg
    elif side == "in":
        degs = g.indeg if g.directed else g.deg
    else:
        raise ValueError(f"unknown side {side!r}")
    weights = [s * d + r for d in degs]
    if any(w < 0 for w in weights):
        raise SamplingError("negative vertex weight; need deg(v) + delta >= 0")
    return WeightIndex(weights)


# ----------------------------------------------------------- basic samplers

def uniform_vertex(rng, g: GrowingGraph) -> int:
    n = g.num_vertices
    if n == 0:
        raise SamplingError("graph has no vertices")
    return rng.below(n)


def _edge_population(g: GrowingGraph, which: str):
    if which == ALL:
        return g.pool
    if which == HEADED:
        return g.headed if g.directed else g.pool
    if which == TAILED:
        return g.tailed if g.directed else g.pool
    if which == PROPER_UNDIRECTED:
        return [e for e in g.pool if g.tails[e] != NONE and g.heads[e] != NONE]
    raise ValueError(f"unknown edge filter {which!r}")


def uniform_edge(rng, g: GrowingGraph, which: str = ALL) -> int:
    pop = _edge_population(g, which)
    if not pop:
        raise SamplingError(f"no {which} edges to sample from")
    return pop[rng.below(len(pop))]


def rho0_sample_edge(rng, g: GrowingGraph) -> tuple[int, int]:
    """Uniform edge, then uniform endpoint; returns ``(edge, vertex)``."""
    pool = g.pool
    if not pool:
        raise SamplingError("rho_0 is undefined on an edgeless graph")
    e = pool[rng.below(len(pool))]
    return e, (g.heads[e] if rng.below(2) else g.tails[e])


def rho0_sample(rng, g: GrowingGraph) -> int:
    """Vertex with probability ``deg(v) / 2m``."""
    return rho0_sample_edge(rng, g)[1]


def rho_delta_sample(rng, widx: WeightIndex) -> int:
    """Vertex with probability ``(deg(v)+delta) / sum(deg(u)+delta)``."""
    return widx.sample(rng)


def rho_dir_sample_edge(rng, g: GrowingGraph, side: str) -> tuple[int, int]:
    """``rho_0^out``: tail of a uniform tailed edge; ``rho_0^in``: head of a
    uniform headed edge. Returns ``(edge, vertex)``."""
    if side == "out":
        e = uniform_edge(rng, g, TAILED)
        return e, g.tails[e]
    if side == "in":
        e = uniform_edge(rng, g, HEADED)
        return e, g.heads[e]
    raise ValueError(f"side must be 'out' or 'in', got {side!r}")


def rho_dir_sample(rng, g: GrowingGraph, side: str, delta=0,
                   index: WeightIndex | None = None) -> int:
    """Sample from ``rho_delta^out`` or ``rho_delta^in``.

    With ``delta == 0`` and no index this is the edge-based sampler; otherwise
    a weight index over out- or in-degrees is used (built on the fly if not
    supplied).
    """
    delta = as_fraction(delta)
    if index is None and delta == 0:
        return rho_dir_sample_edge(rng, g, side)[1]
    if index is None:
        index = degree_weight_index(g, delta, side)
    return index.sample(rng)


# ---------------------------------------------------------------- PageRank

def walk_length(rng, q: float, mode: str) -> int:
    if mode == UNIFORM:
        return 0
    if mode == UNIFORM_EDGE_HEAD:
        return 1
    if mode == PAGERANK:
        if not 0 <= q < 1:
            raise ValueError("PageRank walk needs q in [0, 1)")
        return geo_sample(rng, 1 - q)
    raise ValueError(f"unknown walk mode {mode!r}")


def random_walk(rng, g: GrowingGraph, start: int, length: int) -> int:
    x = start
    out_edges, heads = g.out_edges, g.heads
    for _ in range(length):
        outs = out_edges[x]
        if not outs:
            raise SamplingError(f"random walk reached vertex {x} with out-degree 0")
        x = heads[outs[rng.below(len(outs))]]
    return x


def pagerank_walk_sample(rng, g: GrowingGraph, q: float, mode: str = PAGERANK):
    """Endpoint of a simple random walk from a uniform start.

    The walk length is 0, 1 or ``Geo(1-q)`` for the uniform, edge-head and
    PageRank modes. Returns ``(endpoint, walk_length, start)``.
    """
    if not g.directed:
        raise SamplingError("random walks follow out-edges of a directed graph")
    start = uniform_vertex(rng, g)
    length = walk_length(rng, q, mode)
    return random_walk(rng, g, start, length), length, start


def transition_matrix(g: GrowingGraph):
    """Row-stochastic matrix with entries ``#(uv) / outdeg(u)``."""
    n = g.num_vertices
    tails, heads, kinds, alive = g.arrays()
    mask = alive & (tails != NONE) & (heads != NONE)
    tails, heads = tails[mask], heads[mask]
    outdeg = np.bincount(tails, minlength=n)
    if np.any(outdeg == 0):
        raise SamplingError("PageRank needs every out-degree >= 1")
    data = 1.0 / outdeg[tails]
    return sparse.csr_matrix((data, (tails, heads)), shape=(n, n))


def pagerank_power_iteration(g: GrowingGraph, q: float, tol: float = 1e-12,
                             max_iter: int = 100_000) -> np.ndarray:
    """Solve ``pi = (1-q)/n + q P^T pi`` by fixed-point iteration."""
    if not 0 <= q < 1:
        raise ValueError("q must lie in [0, 1)")
    n = g.num_vertices
    pt = transition_matrix(g).T.tocsr()
    pi = np.full(n, 1.0 / n)
    base = (1 - q) / n
    for _ in range(max_iter):
        nxt = base + q * (pt @ pi)
        # the map contracts by q in l1, so this bounds the l1 error by q * tol
        if np.sum(np.abs(nxt - pi)) <= tol * (1 - q):
            return nxt
        pi = nxt
    raise RuntimeError(f"power iteration did not converge in {max_iter} iterations")


def walk_length_tail(k: int, p_a, p_b, p_c, q) -> Fraction:
    """``P(L > k)`` for the mixture of 0, 1 and ``Geo(1-q)``."""
    p_b, p_c, q = (as_fraction(x) for x in (p_b, p_c, q))
    tail = p_c * q ** (k + 1)
    if k < 1:
        tail += p_b
    return tail


def shifted_geo_tail(k: int, q) -> Fraction:
    """``P(1 + Geo(1-q) > k)``."""
    q = as_fraction(q)
    return Fraction(1) if k < 1 else q ** k
