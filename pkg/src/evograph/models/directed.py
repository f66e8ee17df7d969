"""Directed preferential models on generalized directed graphs.

Generalized directed graphs carry headless and tailless dummy edges next to
the proper ones. The generic model adds a vertex with ``A_t`` out-edges,
``B_t`` in-edges and ``C_t``/``D_t`` dummies, plus ``E_t`` edges hanging off
tails of uniform tailed edges. The scale-free model samples by
``rho_alpha^in``/``rho_beta^out`` and reduces to the generic one through a hat
graph with ``s`` copies of every edge, ``r`` tailless and ``q`` headless
dummies per vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from ..graph import Mode, from_edges
from .base import (HEADLESS, PROPER, TAILLESS, Model, ModelConfig, ModelError,
                   SequenceSpec, Strategy, check_probabilities, choose_index)
from .hat import HatMirror
from .preferential import NATIVE, REDUCTION, IndexedModel


# ------------------------------------------------------------ generic directed

@dataclass
class GenericDirectedConfig(ModelConfig):
    model: ClassVar[str] = "directed_generic"
    A: SequenceSpec = None
    B: SequenceSpec = 1
    C: SequenceSpec = None
    D: SequenceSpec = None
    E: SequenceSpec = None
    strategy: Strategy = None

    _sequences: ClassVar[tuple] = ("A", "B", "C", "D", "E")
    _strategies: ClassVar[tuple] = ("strategy",)

    def __post_init__(self):
        for name in ("A", "C", "D", "E"):
            if getattr(self, name) is None:
                setattr(self, name, SequenceSpec("uniform", lo=0, hi=1))
        super().__post_init__()


class GenericDirected(Model):
    name = "directed_generic"
    mode = Mode.GENERALIZED
    config_cls = GenericDirectedConfig

    def default_seed(self):
        return from_edges([(0, 1), (1, 0)], n=2, mode=Mode.GENERALIZED)

    def check_seed(self, g):
        if not g.headed or not g.tailed:
            raise ModelError("seed graph needs a headed and a tailed edge")

    def _plan(self, rng):
        g, c, t = self.graph, self.config, self.t
        a, b, cc, d, e = (s.emit(rng, t) for s in (c.A, c.B, c.C, c.D, c.E))
        strat = c.strategy
        n = g.num_vertices
        edges = []
        samples = {"A": a, "B": b, "C": cc, "D": d, "E": e, "case": 0, "e1": -1,
                   "edge_pivots": []}
        if a + b > 0:
            v = n
            if a > 0:
                e1 = g.headed[rng.below(len(g.headed))]
                edges.append((PROPER, v, g.heads[e1]))
                edges += [(PROPER, v, strat.choose_target(rng, self, n)) for _ in range(a - 1)]
                edges += [(PROPER, strat.choose_target(rng, self, n), v) for _ in range(b)]
                samples["case"] = 1
            else:
                e1 = g.tailed[rng.below(len(g.tailed))]
                edges.append((PROPER, g.tails[e1], v))
                edges += [(PROPER, strat.choose_target(rng, self, n), v) for _ in range(b - 1)]
                samples["case"] = 2
            samples["e1"] = e1
            edges += [(HEADLESS, v, -1)] * cc
            edges += [(TAILLESS, -1, v)] * d
        for _ in range(e):
            ej = g.tailed[rng.below(len(g.tailed))]
            edges.append((PROPER, g.tails[ej], strat.choose_target(rng, self, n)))
            samples["edge_pivots"].append(ej)
        op = "noop" if not edges else "vertex" if samples["case"] and not e else \
            "edge" if not samples["case"] else "both"
        return self._trace(op, born=int(a + b > 0), edges=edges, samples=samples)


# --------------------------------------------------------- directed scale-free

@dataclass
class DirectedScaleFreeConfig(ModelConfig):
    """(a) new vertex with ``X_t`` out-edges to ``rho_alpha^in`` heads,
    (b) new vertex with ``X_t`` in-edges from ``rho_beta^out`` tails,
    (c) ``X_t`` edges from ``rho_beta^out`` to ``rho_alpha^in`` vertices."""

    model: ClassVar[str] = "directed_scale_free"
    p_a: float = 0.4
    p_b: float = 0.3
    p_c: float = 0.3
    alpha: Fraction = Fraction(1, 2)
    beta: Fraction = Fraction(1, 2)
    X: SequenceSpec = 1
    sampler: str = NATIVE

    _sequences: ClassVar[tuple] = ("X",)
    _fractions: ClassVar[tuple] = ("alpha", "beta")

    def validate(self):
        check_probabilities(self.p_a, self.p_b, self.p_c, names="p_a, p_b, p_c")
        if self.alpha < 0 or self.beta < 0:
            raise ModelError("directed scale-free needs alpha, beta >= 0")
        if self.X.lower is None or self.X.lower < 1:
            raise ModelError("directed scale-free needs X_t >= 1")

    def common_denominator(self) -> tuple[int, int, int]:
        """``(r, q, s)`` with ``alpha = r/s`` and ``beta = q/s``."""
        a, b = self.alpha, self.beta
        s = math.lcm(a.denominator, b.denominator)
        return int(a * s), int(b * s), s


class DirectedScaleFree(IndexedModel):
    name = "directed_scale_free"
    mode = Mode.DIRECTED
    config_cls = DirectedScaleFreeConfig

    def default_seed(self):
        return from_edges([(0, 1), (1, 0)], n=2, mode=Mode.DIRECTED)

    def index_spec(self):
        r, q, s = self.config.common_denominator()
        return {"in": (s, r), "out": (s, q)}

    def _setup(self):
        super()._setup()
        if not self.native:
            r, q, s = self.config.common_denominator()
            self.hat = HatMirror(self.graph, copies=s, tailless=r, headless=q)

    def _plan(self, rng):
        c = self.config
        x = c.X.emit(rng, self.t)
        op = "abc"[choose_index(rng, (c.p_a, c.p_b, c.p_c))]
        v = self.graph.num_vertices
        if op == "a":
            pivots, heads = self._draws(rng, x, "in")
            edges, born = [(PROPER, v, h) for h in heads], 1
            samples = {"X": x, "heads": heads, "pivots": pivots}
        elif op == "b":
            pivots, tails = self._draws(rng, x, "out")
            edges, born = [(PROPER, w, v) for w in tails], 1
            samples = {"X": x, "tails": tails, "pivots": pivots}
        else:
            pivots, tails = self._draws(rng, x, "out")
            pivots2, heads = self._draws(rng, x, "in")
            edges, born = [(PROPER, tails[i], heads[i]) for i in range(x)], 0
            samples = {"X": x, "tails": tails, "heads": heads, "pivots": pivots,
                       "pivots_in": pivots2}
        return self._trace(op, born=born, edges=edges, samples=samples)


generic_directed_step = GenericDirected.step
directed_scale_free_step = DirectedScaleFree.step

__all__ = ["GenericDirected", "GenericDirectedConfig", "DirectedScaleFree",
           "DirectedScaleFreeConfig", "REDUCTION", "NATIVE"]
