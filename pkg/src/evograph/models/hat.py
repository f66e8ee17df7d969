"""Explicit hat graphs.

The hat graph of an undirected graph copies every edge ``2s`` times and
puts ``r`` loops at every vertex, so that a uniform endpoint of a uniform
hat edge is distributed as ``rho_delta`` with ``delta = r/s``. The directed
version keeps ``s`` copies of every edge and adds ``r`` tailless and ``q``
headless dummy edges at every vertex, realizing ``rho_alpha^in`` and
``rho_beta^out`` with ``alpha = r/s`` and ``beta = q/s``.

The mirror shares vertex ids with the real graph and is grown alongside it.
"""

from __future__ import annotations

from ..graph import EdgeKind, GrowingGraph, Mode
from ..sampling import rho0_sample_edge, rho_dir_sample_edge


class HatMirror:
    def __init__(self, base: GrowingGraph, copies: int, loops: int = 0,
                 tailless: int = 0, headless: int = 0):
        if copies < 1 or min(loops, tailless, headless) < 0:
            raise ValueError("hat graph needs copies >= 1 and nonnegative dummies")
        if base.mode is Mode.UNDIRECTED and (tailless or headless):
            raise ValueError("dummy edges need a directed base graph")
        self.copies = copies
        self.loops = loops
        self.tailless = tailless
        self.headless = headless
        mode = Mode.UNDIRECTED if base.mode is Mode.UNDIRECTED else Mode.GENERALIZED
        self.base = base
        self.graph = GrowingGraph(mode, base.root)
        self.copies_of: list[list[int]] = []
        self.extras_of: list[list[int]] = []
        for v in range(base.num_vertices):
            self.add_vertex(v, base.vertex_birth[v])
        for e in range(base.num_edge_ids):
            self.add_edge(e, base.edge_birth[e])

    def add_vertex(self, v: int, t: int) -> list[int]:
        h = self.graph
        if h.add_vertex(t) != v:
            raise ValueError("hat graph out of step with its base graph")
        ids = [h.add_edge(EdgeKind.LOOP, v, v, t) for _ in range(self.loops)]
        ids += [h.add_edge(EdgeKind.TAILLESS, None, v, t) for _ in range(self.tailless)]
        ids += [h.add_edge(EdgeKind.HEADLESS, v, None, t) for _ in range(self.headless)]
        self.extras_of.append(ids)
        return ids

    def add_edge(self, e: int, t: int) -> list[int]:
        base, h = self.base, self.graph
        if e != len(self.copies_of):
            raise ValueError("hat graph out of step with its base graph")
        kind, a, b = base.kinds[e], base.tails[e], base.heads[e]
        ids = [h.add_edge(kind, a, b, t) for _ in range(self.copies)]
        self.copies_of.append(ids)
        return ids

    # uniform endpoint of a uniform hat edge: rho_delta on the base graph
    def sample_endpoint(self, rng) -> tuple[int, int]:
        return rho0_sample_edge(rng, self.graph)

    # head of a uniform headed hat edge: rho_alpha^in on the base graph
    def sample_in(self, rng) -> tuple[int, int]:
        return rho_dir_sample_edge(rng, self.graph, "in")

    def sample_out(self, rng) -> tuple[int, int]:
        return rho_dir_sample_edge(rng, self.graph, "out")
