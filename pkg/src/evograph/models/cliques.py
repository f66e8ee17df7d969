"""Regular and clique-based growth: pegging, increasing k-trees and
k-Apollonian networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

from ..graph import complete_graph
from .base import PROPER, Model, ModelConfig, ModelError


# ---------------------------------------------------------------- pegging

@dataclass
class PeggingConfig(ModelConfig):
    """Pegging with ``d = 3``; the seed must be connected and 3-regular."""

    model: ClassVar[str] = "pegging"


class Pegging(Model):
    """Each step samples an ordered pair of distinct edges ``e = ab`` and
    ``f = cd``, deletes both and adds two vertices ``e'``, ``f'`` with edges
    ``ae', be', cf', df', e'f'``."""

    name = "pegging"
    config_cls = PeggingConfig
    degree = 3

    def default_seed(self):
        return complete_graph(4)

    def check_seed(self, g):
        if g.num_edges < 2 or any(d != self.degree for d in g.deg):
            raise ModelError("pegging needs a 3-regular seed with at least two edges")
        if any(g.tails[e] == g.heads[e] for e in g.pool):
            raise ModelError("pegging seed must be loopless")

    def _plan(self, rng):
        g = self.graph
        pool = g.pool
        m = len(pool)
        i = rng.below(m)
        j = rng.below(m - 1)
        if j >= i:
            j += 1
        e, f = pool[i], pool[j]
        a, b = g.tails[e], g.heads[e]
        c, d = g.tails[f], g.heads[f]
        ep, fp = g.num_vertices, g.num_vertices + 1
        edges = [(PROPER, a, ep), (PROPER, b, ep), (PROPER, c, fp), (PROPER, d, fp),
                 (PROPER, ep, fp)]
        return self._trace("peg", born=2, edges=edges, retire=[e, f],
                           samples={"e": e, "f": f, "ends": [a, b, c, d]})

    def check_invariants(self):
        super().check_invariants()
        if any(x != self.degree for x in self.graph.deg):
            raise ModelError(f"pegging lost 3-regularity at step {self.t}")


# ------------------------------------------------------ k-trees / Apollonian

@dataclass
class KTreeConfig(ModelConfig):
    model: ClassVar[str] = "ktree"
    k: int = 3

    def validate(self):
        if self.k < 2:
            raise ModelError("clique growth needs k >= 2")


@dataclass
class ApollonianConfig(KTreeConfig):
    model: ClassVar[str] = "apollonian"


class KTree(Model):
    """A uniformly chosen eligible k-clique gets a new vertex joined to all of
    its vertices, creating k new k-cliques (the new vertex with each
    (k-1)-subset). The seed is ``K_k`` unless overridden with a graph whose
    first ``k`` vertices form a clique; only that clique is initially
    eligible."""

    name = "ktree"
    config_cls = KTreeConfig
    retire_chosen: ClassVar[bool] = False

    def default_seed(self):
        return complete_graph(self.config.k)

    def check_seed(self, g):
        k = self.config.k
        if g.num_vertices < k:
            raise ModelError(f"seed needs at least k = {k} vertices")
        for u in range(k):
            nbrs = set(g.neighbours(u))
            if any(w not in nbrs for w in range(k) if w != u):
                raise ModelError("the first k seed vertices must form a clique")

    def _setup(self):
        self.cliques: list[tuple] = [tuple(range(self.config.k))]
        self.eligible: list[int] = [0]
        self._eligible_pos: dict[int, int] = {0: 0}

    @property
    def num_cliques(self) -> int:
        return len(self.cliques)

    def _plan(self, rng):
        cid = self.eligible[rng.below(len(self.eligible))]
        v = self.graph.num_vertices
        verts = self.cliques[cid]
        return self._trace("clique", born=1, edges=[(PROPER, v, w) for w in verts],
                           samples={"clique": cid, "vertices": list(verts)})

    def _after_realize(self, trace):
        cid = trace.samples["clique"]
        verts = self.cliques[cid]
        v = trace.new_vertices[0]
        if self.retire_chosen:
            pos = self._eligible_pos.pop(cid)
            last = self.eligible.pop()
            if last != cid:
                self.eligible[pos] = last
                self._eligible_pos[last] = pos
        first = len(self.cliques)
        for i in range(len(verts)):
            self.cliques.append(verts[:i] + verts[i + 1:] + (v,))
        for c in range(first, len(self.cliques)):
            self._eligible_pos[c] = len(self.eligible)
            self.eligible.append(c)
        trace.samples["new_cliques"] = list(range(first, len(self.cliques)))

    def check_invariants(self):
        super().check_invariants()
        k, t = self.config.k, self.t
        expect = 1 + t * (k - 1) if self.retire_chosen else 1 + t * k
        if len(self.eligible) != expect or len(self.cliques) != 1 + t * k:
            raise ModelError(f"clique counts off at step {t}")


class Apollonian(KTree):
    """k-tree growth where a chosen clique is never chosen again."""

    name = "apollonian"
    config_cls = ApollonianConfig
    retire_chosen = True


pegging_step = Pegging.step
ktree_step = KTree.step
apollonian_step = Apollonian.step
