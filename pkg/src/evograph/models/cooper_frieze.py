"""Mixed uniform / degree-proportional growth.

Six operations, chosen with probabilities ``p_a..p_f``. Vertices are
sampled either uniformly or by ``rho_0`` (endpoint of a uniform edge); all
samples are drawn independently, with replacement, so an operation may add
parallel edges or loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

from .base import LOOP, PROPER, ModelConfig, ModelError, SequenceSpec, \
    check_probabilities, choose_index
from .preferential import REDUCTION, IndexedModel, k2_seed

OPS = "abcdef"
# (new vertex?, first sample uniform?, rest uniform?)
OP_RULES = {
    "a": (True, True, True),
    "b": (True, False, False),
    "c": (False, True, True),
    "d": (False, True, False),
    "e": (False, False, True),
    "f": (False, False, False),
}


@dataclass
class CooperFriezeConfig(ModelConfig):
    model: ClassVar[str] = "cooper_frieze"
    p: tuple = (0.2, 0.2, 0.15, 0.15, 0.15, 0.15)
    X: SequenceSpec = None
    sampler: str = REDUCTION

    _sequences: ClassVar[tuple] = ("X",)

    def __post_init__(self):
        if self.X is None:
            self.X = SequenceSpec("uniform", lo=1, hi=2)
        self.p = tuple(float(x) for x in self.p)
        super().__post_init__()

    def validate(self):
        if len(self.p) != 6:
            raise ModelError("cooper_frieze needs six probabilities p_a..p_f")
        check_probabilities(*self.p, names="p_a..p_f")
        if self.p[0] + self.p[1] <= 0:
            raise ModelError("cooper_frieze needs p_a + p_b > 0")
        if self.X.lower is None or self.X.lower < 1:
            raise ModelError("cooper_frieze needs X_t >= 1")

    @property
    def q(self) -> float:
        return self.p[0] + self.p[1]


class CooperFrieze(IndexedModel):
    name = "cooper_frieze"
    config_cls = CooperFriezeConfig

    def default_seed(self):
        return k2_seed()

    def index_spec(self):
        return {"both": (1, 0)}

    def _sample(self, rng, uniform):
        """``(pivot edge or -1, vertex)``; uniform draws carry no edge."""
        if uniform:
            return -1, rng.below(self.graph.num_vertices)
        return self._draw(rng)

    def _plan(self, rng):
        c = self.config
        x = c.X.emit(rng, self.t)
        op = OPS[choose_index(rng, c.p)]
        new_vertex, first_uniform, rest_uniform = OP_RULES[op]
        pivots, verts = [], []
        if not new_vertex:
            e, w = self._sample(rng, first_uniform)
            pivots.append(e)
            verts.append(w)
        for _ in range(x):
            e, w = self._sample(rng, rest_uniform)
            pivots.append(e)
            verts.append(w)
        if new_vertex:
            v = self.graph.num_vertices
            edges = [(PROPER, v, w) for w in verts]
        else:
            w = verts[0]
            edges = [(LOOP if y == w else PROPER, w, y) for y in verts[1:]]
        return self._trace(op, born=int(new_vertex), edges=edges,
                           samples={"X": x, "vertices": verts, "pivots": pivots})


cooper_frieze_step = CooperFrieze.step
