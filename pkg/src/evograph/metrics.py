"""Distances on the undirected simple projection of a growing graph.

Directions are ignored, loops and dummy (headless/tailless) edges are
dropped and parallel edges collapse to one, none of which changes a
distance. BFS is level-synchronous over a CSR snapshot; the exact diameter
uses iFUB seeded by a double sweep, with the eccentricities of each fringe
computed 64 sources at a time by a bit-parallel BFS.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graph import NONE, GrowingGraph

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

ORACLE_MAX_N = 2000
ECC_BATCH_WORDS = 16


class ConnectivityError(RuntimeError):
    """A BFS left vertices unreached in a graph that must be connected."""


class DistanceView:
    """Immutable CSR adjacency of the simple undirected projection."""

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = n
        self.indptr = indptr
        self.indices = indices

    @classmethod
    def from_graph(cls, g: GrowingGraph) -> "DistanceView":
        tails, heads, kinds, alive = g.arrays()
        keep = alive & (tails != NONE) & (heads != NONE) & (tails != heads)
        return cls.from_pairs(g.num_vertices, tails[keep], heads[keep])

    @classmethod
    def from_pairs(cls, n: int, a, b) -> "DistanceView":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        keep = a != b
        a, b = a[keep], b[keep]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        key = np.unique(lo * max(n, 1) + hi)
        lo, hi = key // max(n, 1), key % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def to_csr(self):
        data = np.ones(len(self.indices), dtype=np.int8)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


def _as_view(g) -> DistanceView:
    return g if isinstance(g, DistanceView) else DistanceView.from_graph(g)


def bfs_levels(view: DistanceView, sources) -> np.ndarray:
    """Hop distances from a source set; unreachable vertices get -1."""
    indptr, indices = view.indptr, view.indices
    dist = np.full(view.n, -1, dtype=np.int64)
    frontier = np.unique(np.atleast_1d(np.asarray(sources, dtype=np.int64)))
    dist[frontier] = 0
    d = 0
    while frontier.size:
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if not total:
            break
        offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens) + np.arange(total)
        nbrs = indices[offsets]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        d += 1
        dist[nbrs] = d
        frontier = nbrs
    return dist


def bfs_depths(g, source=None) -> np.ndarray:
    """Depth of every vertex; ``source`` defaults to the graph's root and may
    be a list for a multi-source search. Raises if anything is unreachable."""
    view = _as_view(g)
    if source is None:
        source = g.root if isinstance(g, GrowingGraph) else 0
    dist = bfs_levels(view, source)
    if view.n and dist.min() < 0:
        missing = int(np.flatnonzero(dist < 0)[0])
        raise ConnectivityError(f"vertex {missing} unreachable from {source}")
    return dist


def is_connected(g) -> bool:
    view = _as_view(g)
    if view.n <= 1:
        return True
    return bool(bfs_levels(view, 0).min() >= 0)


def eccentricity(view: DistanceView, v: int) -> int:
    return int(bfs_depths(view, v).max())


def _ms_ecc_numpy(indptr, indices, batch, words):
    n = len(indptr) - 1
    k = len(batch)
    seen = np.zeros((n, words), dtype=np.uint64)
    j = np.arange(k)
    np.bitwise_or.at(seen, (batch, j // 64),
                     np.left_shift(np.uint64(1), (j % 64).astype(np.uint64)))
    front = seen.copy()
    ecc = np.zeros(64 * words, dtype=np.int64)
    level = 0
    while True:
        new = np.bitwise_or.reduceat(front[indices], indptr[:-1], axis=0) & ~seen
        bits = np.bitwise_or.reduce(new, axis=0)
        if not bits.any():
            break
        level += 1
        ecc[np.unpackbits(bits.view(np.uint8), bitorder="little").astype(bool)] = level
        seen |= new
        front = new
    return ecc[:k]


def _ms_ecc_compiled(indptr, indices, batch, words):
    n = len(indptr) - 1
    k = len(batch)
    seen = np.zeros((n, words), np.uint64)
    front = np.zeros((n, words), np.uint64)
    nxt = np.zeros((n, words), np.uint64)
    # a vertex is done once every source of the batch has reached it
    done = np.zeros(n, np.bool_)
    full = np.empty(words, np.uint64)
    for w in range(words):
        full[w] = ~np.uint64(0)
    if k % 64:
        full[words - 1] = (np.uint64(1) << np.uint64(k % 64)) - np.uint64(1)
    for j in range(k):
        bit = np.uint64(1) << np.uint64(j & 63)
        seen[batch[j], j >> 6] |= bit
        front[batch[j], j >> 6] |= bit
    ecc = np.zeros(k, np.int64)
    acc = np.zeros(words, np.uint64)
    level_bits = np.zeros(words, np.uint64)
    level = 0
    while True:
        grew = False
        for w in range(words):
            level_bits[w] = 0
        for v in range(n):
            if done[v]:
                for w in range(words):
                    nxt[v, w] = 0
                continue
            for w in range(words):
                acc[w] = 0
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                for w in range(words):
                    acc[w] |= front[u, w]
            sat = True
            for w in range(words):
                x = acc[w] & ~seen[v, w]
                nxt[v, w] = x
                if x:
                    grew = True
                    level_bits[w] |= x
                    seen[v, w] |= x
                if seen[v, w] != full[w]:
                    sat = False
            done[v] = sat
        if not grew:
            break
        level += 1
        for j in range(k):
            if (level_bits[j >> 6] >> np.uint64(j & 63)) & np.uint64(1):
                ecc[j] = level
        front, nxt = nxt, front
    return ecc


_ms_ecc = njit(cache=True)(_ms_ecc_compiled) if njit is not None else _ms_ecc_numpy


def eccentricities(g, sources) -> np.ndarray:
    """Eccentricity of each source (the graph must be connected)."""
    view = _as_view(g)
    sources = np.asarray(sources, dtype=np.int64)
    if view.n <= 1 or not sources.size:
        return np.zeros(len(sources), dtype=np.int64)
    step = 64 * ECC_BATCH_WORDS
    out = []
    for b in range(0, len(sources), step):
        batch = np.ascontiguousarray(sources[b:b + step])
        out.append(_ms_ecc(view.indptr, view.indices, batch, (len(batch) + 63) // 64))
    return np.concatenate(out)


def height_from_root(g, root=None) -> int:
    return int(bfs_depths(g, root).max())


def diameter_exact(g) -> int:
    """Exact diameter by iFUB (fringe upper bounds) from a double-sweep centre."""
    view = _as_view(g)
    n = view.n
    if n <= 1:
        return 0
    # double sweep from a maximum-degree vertex
    r = int(np.argmax(view.degree()))
    dr = bfs_depths(view, r)
    a = int(np.argmax(dr))
    da = bfs_depths(view, a)
    b = int(np.argmax(da))
    lb = int(da[b])
    db = bfs_depths(view, b)
    lb = max(lb, int(dr.max()))
    half = lb // 2
    mid = np.flatnonzero((da == half) & (da + db == lb))
    u = int(mid[0]) if mid.size else r
    du = bfs_depths(view, u)
    ecc_u = int(du.max())
    lb = max(lb, ecc_u)
    i, ub = ecc_u, 2 * ecc_u
    by_level = np.argsort(du, kind="stable")
    level_start = np.searchsorted(du[by_level], np.arange(ecc_u + 2))
    while ub > lb and i > 0:
        fringe = by_level[level_start[i]:level_start[i + 1]]
        bi = int(eccentricities(view, fringe).max())
        if max(lb, bi) > 2 * (i - 1):
            return max(lb, bi)
        lb = max(lb, bi)
        ub = 2 * (i - 1)
        i -= 1
    return lb


def diameter_oracle(g) -> int:
    """All-pairs maximum via scipy; for cross-checking on small graphs."""
    view = _as_view(g)
    if view.n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to {ORACLE_MAX_N} vertices, got {view.n}")
    if view.n <= 1:
        return 0
    dist = csgraph.shortest_path(view.to_csr(), method="D", directed=False, unweighted=True)
    if np.isinf(dist).any():
        raise ConnectivityError("graph is disconnected")
    return int(dist.max())
