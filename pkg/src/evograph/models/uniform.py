"""Models whose new links land near a uniformly random vertex: forest fire,
copying, and hybrid (uniform / edge-head / PageRank) selection."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import ClassVar

from ..graph import GrowingGraph, Mode, from_edges
from ..sampling import (PAGERANK, UNIFORM, UNIFORM_EDGE_HEAD, geo_sample,
                        pagerank_walk_sample)
from .base import (PROPER, Model, ModelConfig, ModelError, check_probabilities,
                   choose_index)


def complete_digraph(k: int) -> GrowingGraph:
    """Every vertex has out-edges to all others, in increasing head order."""
    return from_edges([(u, w) for u in range(k) for w in range(k) if w != u],
                      n=k, mode=Mode.DIRECTED)


# ------------------------------------------------------------- forest fire

@dataclass
class ForestFireConfig(ModelConfig):
    """Burn sizes are ``Geo(p)`` forward and ``Geo(q)`` backward, with
    ``P(Geo(p) = k) = (1-p)^k p``. ``p = 0`` burns every available
    neighbour; ``p = q = 1`` never spreads."""

    model: ClassVar[str] = "forest_fire"
    p: float = 0.7
    q: float = 0.85

    def validate(self):
        if not (0 <= self.p <= 1 and 0 <= self.q <= 1):
            raise ModelError("forest fire needs p, q in [0, 1]")


class ForestFire(Model):
    name = "forest_fire"
    mode = Mode.DIRECTED
    config_cls = ForestFireConfig
    needs_edge = False

    def default_seed(self):
        return from_edges([(1, 0)], n=2, mode=Mode.DIRECTED)

    @staticmethod
    def _burn_size(rng, p):
        return math.inf if p == 0 else geo_sample(rng, p)

    def _plan(self, rng):
        g = self.graph
        v = g.num_vertices
        p, q = self.config.p, self.config.q
        heads, tails = g.heads, g.tails
        ambassador = rng.below(v)
        visited = {ambassador}
        burned = [ambassador]
        queue = deque(burned)
        while queue:
            x = queue.popleft()
            n_out = self._burn_size(rng, p)
            n_in = self._burn_size(rng, q)
            for count, nbrs in ((n_out, (heads[e] for e in g.out_edges[x])),
                                (n_in, (tails[e] for e in g.in_edges[x]))):
                if not count:
                    continue
                avail = sorted(set(nbrs) - visited)
                chosen = avail if count >= len(avail) else rng.sample(avail, count)
                visited.update(chosen)
                burned.extend(chosen)
                queue.extend(chosen)
        return self._trace("burn", born=1, edges=[(PROPER, v, b) for b in burned],
                           samples={"ambassador": ambassador, "burned": burned})


# ----------------------------------------------------------------- copying

@dataclass
class CopyingConfig(ModelConfig):
    model: ClassVar[str] = "copying"
    p: float = 0.5
    d: int = 2

    def validate(self):
        if not 0 <= self.p <= 1 or self.d < 1:
            raise ModelError("copying needs p in [0, 1] and d >= 1")


class _OutRegular(Model):
    """Directed models where every vertex has exactly ``d`` ordered out-edges."""

    mode = Mode.DIRECTED

    def default_seed(self):
        return complete_digraph(self.config.d + 1)

    def check_seed(self, g):
        if any(x != self.config.d for x in g.outdeg):
            raise ModelError(f"{self.name} needs every seed vertex to have out-degree "
                             f"{self.config.d}")

    def check_invariants(self):
        super().check_invariants()
        d = self.config.d
        if any(x != d for x in self.graph.outdeg):
            raise ModelError(f"out-degree law broken at step {self.t}")


class Copying(_OutRegular):
    name = "copying"
    config_cls = CopyingConfig

    def _plan(self, rng):
        g = self.graph
        n = g.num_vertices
        p = self.config.p
        ambassador = rng.below(n)
        outs = g.out_edges[ambassador]
        heads, copied = [], []
        for i in range(self.config.d):
            if rng.random() < p:
                heads.append(rng.below(n))
                copied.append(False)
            else:
                heads.append(g.heads[outs[i]])
                copied.append(True)
        return self._trace("copy", born=1, edges=[(PROPER, n, h) for h in heads],
                           samples={"ambassador": ambassador, "copied": copied,
                                    "heads": heads})


# -------------------------------------------------------- hybrid selection

@dataclass
class HybridSelectionConfig(ModelConfig):
    """Each head is uniform (``p_a``), the head of a uniform edge (``p_b``)
    or PageRank-distributed with damping ``q`` (``p_c``)."""

    model: ClassVar[str] = "hybrid"
    p_a: float = 0.4
    p_b: float = 0.3
    p_c: float = 0.3
    q: float = 0.8
    d: int = 2

    def validate(self):
        check_probabilities(self.p_a, self.p_b, self.p_c, names="p_a, p_b, p_c")
        if not 0 <= self.q < 1:
            raise ModelError("hybrid selection needs q in [0, 1)")
        if self.d < 1:
            raise ModelError("hybrid selection needs d >= 1")


WALK_MODES = (UNIFORM, UNIFORM_EDGE_HEAD, PAGERANK)


class HybridSelection(_OutRegular):
    name = "hybrid"
    config_cls = HybridSelectionConfig

    def _plan(self, rng):
        g = self.graph
        c = self.config
        probs = (c.p_a, c.p_b, c.p_c)
        modes, starts, lengths, heads = [], [], [], []
        for _ in range(c.d):
            mode = WALK_MODES[choose_index(rng, probs)]
            head, length, start = pagerank_walk_sample(rng, g, c.q, mode)
            modes.append(mode)
            starts.append(start)
            lengths.append(length)
            heads.append(head)
        v = g.num_vertices
        return self._trace("select", born=1, edges=[(PROPER, v, h) for h in heads],
                           samples={"modes": modes, "starts": starts,
                                    "lengths": lengths, "heads": heads})


forest_fire_step = ForestFire.step
copying_step = Copying.step
hybrid_selection_step = HybridSelection.step
