"""Undirected and directed preferential-attachment models.

The generic model performs a vertex operation (``A_t`` edges, the first one
hanging off an endpoint of a uniform edge) and an edge operation (``B_t``
edges, each hanging off an endpoint of its own uniform edge). The remaining
models sample vertices by ``rho_delta`` (or its out/in versions) and come in
two flavours selected by ``sampler``:

``native``
    Fenwick-tree sampling straight from the degree-plus-delta weights.
``reduction``
    Sampling through uniform edges: for ``delta = 0`` of the graph itself,
    otherwise of an explicit hat graph. The sampled edge ids are recorded
    so the edge-tree coupling can attach to them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from ..graph import Mode, from_edges
from ..sampling import WeightIndex, rho0_sample_edge, rho_dir_sample_edge
from .base import (LOOP, PROPER, Model, ModelConfig, ModelError,
                   SequenceBoundError, SequenceSpec, Strategy)
from .hat import HatMirror

NATIVE, REDUCTION = "native", "reduction"


def k2_seed():
    return from_edges([(0, 1)], n=2)


def two_cycle_seed(mode=Mode.DIRECTED):
    return from_edges([(0, 1), (1, 0)], n=2, mode=mode)


class IndexedModel(Model):
    """Keeps Fenwick indices with weights ``s*deg + r`` in sync with growth.

    ``index_spec`` maps a side (``both``, ``out`` or ``in``) to ``(s, r)``.
    """

    sampler_default: ClassVar[str] = REDUCTION

    def index_spec(self) -> dict:
        return {}

    def _setup(self):
        self.indices = {}
        sampler = getattr(self.config, "sampler", REDUCTION)
        if sampler not in (NATIVE, REDUCTION):
            raise ModelError(f"unknown sampler {sampler!r}")
        self.native = sampler == NATIVE
        if self.native:
            g = self.graph
            for side, (s, r) in self.index_spec().items():
                degs = {"both": g.deg if not g.directed else
                        [g.degree(v) for v in range(g.num_vertices)],
                        "out": g.outdeg, "in": g.indeg}[side]
                w = [s * d + r for d in degs]
                if any(x < 0 for x in w):
                    raise ModelError("seed graph gives a negative sampling weight")
                self.indices[side] = (WeightIndex(w), s, r)

    def _vertex_added(self, v, trace):
        for idx, s, r in self.indices.values():
            idx.append(r)
        super()._vertex_added(v, trace)

    def _edge_added(self, e, trace):
        if self.indices:
            g = self.graph
            a, b = g.tails[e], g.heads[e]
            for side, (idx, s, r) in self.indices.items():
                if side == "both":
                    idx.add(a, s)
                    idx.add(b, s)
                elif side == "out":
                    if a >= 0:
                        idx.add(a, s)
                elif b >= 0:
                    idx.add(b, s)
        super()._edge_added(e, trace)

    def _draw(self, rng, side="both"):
        """One vertex from the side's distribution; ``(pivot edge or -1, v)``."""
        if self.native:
            return -1, self.indices[side][0].sample(rng)
        if self.hat is not None:
            if side == "both":
                return self.hat.sample_endpoint(rng)
            return self.hat.sample_in(rng) if side == "in" else self.hat.sample_out(rng)
        if side == "both":
            return rho0_sample_edge(rng, self.graph)
        return rho_dir_sample_edge(rng, self.graph, side)

    def _draws(self, rng, k, side="both"):
        pivots, verts = [], []
        for _ in range(k):
            e, v = self._draw(rng, side)
            pivots.append(e)
            verts.append(v)
        return pivots, verts


# -------------------------------------------------------- generic preferential

@dataclass
class GenericPrefConfig(ModelConfig):
    """Vertex operation with ``A_t`` edges and edge operation with ``B_t``
    edges per step; ``strategy`` resolves the arbitrary choices."""

    model: ClassVar[str] = "pref"
    A: SequenceSpec = 1
    B: SequenceSpec = 0
    strategy: Strategy = None

    _sequences: ClassVar[tuple] = ("A", "B")
    _strategies: ClassVar[tuple] = ("strategy",)


class GenericPref(Model):
    name = "pref"
    config_cls = GenericPrefConfig

    def default_seed(self):
        return k2_seed()

    def _plan(self, rng):
        g = self.graph
        c = self.config
        t = self.t
        a = c.A.emit(rng, t)
        b = c.B.emit(rng, t)
        strat = c.strategy
        pool = g.pool
        n = g.num_vertices
        edges = []
        samples = {"A": a, "B": b, "e1": -1, "edge_pivots": []}
        if a > 0:
            e1 = pool[rng.below(len(pool))]
            w1 = strat.choose_endpoint(rng, self, g, e1)
            edges.append((PROPER, n, w1))
            for _ in range(a - 1):
                x = strat.choose_target(rng, self, n, new_vertex=n)
                edges.append((LOOP if x == n else PROPER, n, x))
            samples["e1"] = e1
        for _ in range(b):
            e = pool[rng.below(len(pool))]
            w = strat.choose_endpoint(rng, self, g, e)
            x = strat.choose_target(rng, self, n)
            edges.append((LOOP if x == w else PROPER, w, x))
            samples["edge_pivots"].append(e)
        return self._trace("pref" if a or b else "noop", born=int(a > 0), edges=edges,
                           samples=samples)


# -------------------------------------------------------------- undirected ACL

@dataclass
class AclDConfig(ModelConfig):
    """Per step: ``X_t`` edges from a new vertex to ``rho_0`` vertices,
    ``Y_t`` loops at it, and ``Z_t`` edges between ``rho_0`` pairs."""

    model: ClassVar[str] = "acl_d"
    X: SequenceSpec = 1
    Y: SequenceSpec = 0
    Z: SequenceSpec = 0
    sampler: str = REDUCTION

    _sequences: ClassVar[tuple] = ("X", "Y", "Z")

    def validate(self):
        if self.X.lower is None or self.X.lower < 1:
            raise ModelError("acl_d needs X_t >= 1")


class AclD(IndexedModel):
    name = "acl_d"
    config_cls = AclDConfig

    def default_seed(self):
        return k2_seed()

    def index_spec(self):
        return {"both": (1, 0)}

    def _plan(self, rng):
        c, t = self.config, self.t
        x, y, z = c.X.emit(rng, t), c.Y.emit(rng, t), c.Z.emit(rng, t)
        n_edges, ns = self._draws(rng, x)
        w_edges, ws = [], []
        for _ in range(2 * z):
            e, w = self._draw(rng)
            w_edges.append(e)
            ws.append(w)
        v = self.graph.num_vertices
        edges = [(PROPER, ws[2 * j], ws[2 * j + 1]) for j in range(z)]
        edges += [(PROPER, v, u) for u in ns]
        edges += [(LOOP, v, v)] * y
        return self._trace("acl_d", born=1, edges=edges, samples={
            "X": x, "Y": y, "Z": z, "N": ns, "N_edges": n_edges,
            "W": ws, "W_edges": w_edges})


# ------------------------------------------------------------------------- GLP

@dataclass
class GLPConfig(ModelConfig):
    """Operation (a) with probability ``p``: new vertex joined to ``X_t``
    vertices drawn by ``rho_delta``; otherwise (b): ``X_t`` edges between
    ``rho_delta`` pairs. ``delta`` is a rational in (-1, inf)."""

    model: ClassVar[str] = "glp"
    p: float = 0.8
    delta: Fraction = Fraction(1, 2)
    X: SequenceSpec = 2
    sampler: str = NATIVE

    _sequences: ClassVar[tuple] = ("X",)
    _fractions: ClassVar[tuple] = ("delta",)

    def validate(self):
        if not 0 <= self.p <= 1:
            raise ModelError("glp needs p in [0, 1]")
        if self.delta <= -1:
            raise ModelError("glp needs delta > -1")
        if self.X.lower is None or self.X.lower < 1:
            raise ModelError("glp needs X_t >= 1")


class GLP(IndexedModel):
    name = "glp"
    config_cls = GLPConfig

    def default_seed(self):
        return k2_seed()

    def index_spec(self):
        d = self.config.delta
        return {"both": (d.denominator, d.numerator)}

    def _setup(self):
        super()._setup()
        if not self.native:
            d = self.config.delta
            if d < 0:
                raise ModelError("the hat-graph reduction needs delta >= 0")
            self.hat = HatMirror(self.graph, copies=2 * d.denominator, loops=d.numerator)

    def _op_a(self, rng, x, op="a", **extra):
        pivots, targets = self._draws(rng, x)
        v = self.graph.num_vertices
        return self._trace(op, born=1, edges=[(PROPER, v, u) for u in targets],
                           samples={"X": x, "targets": targets, "pivots": pivots, **extra})

    def _plan(self, rng):
        c = self.config
        x = c.X.emit(rng, self.t)
        if rng.random() < c.p:
            return self._op_a(rng, x)
        pivots, targets = self._draws(rng, 2 * x)
        edges = [(PROPER, targets[2 * i], targets[2 * i + 1]) for i in range(x)]
        return self._trace("b", edges=edges,
                           samples={"X": x, "targets": targets, "pivots": pivots})


# ----------------------------------------------------------------------- PARID

@dataclass
class ParidConfig(ModelConfig):
    """Initial degrees ``X_t`` iid; ``[ell, u]`` is the window the diameter
    bound assumes. ``strict`` aborts on a draw outside it, otherwise the draw
    is clamped and recorded."""

    model: ClassVar[str] = "parid"
    delta: Fraction = Fraction(1, 2)
    X: SequenceSpec = None
    ell: int = 1
    u: int = 3
    strict: bool = True
    sampler: str = NATIVE

    _sequences: ClassVar[tuple] = ("X",)
    _fractions: ClassVar[tuple] = ("delta",)

    def __post_init__(self):
        if self.X is None:
            self.X = SequenceSpec("pmf", pmf=((1, 0.5), (2, 0.3), (3, 0.2)))
        super().__post_init__()

    def validate(self):
        if self.delta <= 0:
            raise ModelError("parid needs delta > 0")
        if not 1 <= self.ell <= self.u:
            raise ModelError("parid needs 1 <= ell <= u")
        if self.X.kind in ("constant", "replay"):
            raise ModelError("parid draws X_t iid; use a uniform, pmf or geometric law")


class Parid(GLP):
    name = "parid"
    config_cls = ParidConfig

    def _plan(self, rng):
        c = self.config
        x = c.X.draw(rng, self.t)
        extra = {}
        if not c.ell <= x <= c.u:
            if c.strict:
                raise SequenceBoundError(
                    f"X_{self.t} = {x} outside [{c.ell}, {c.u}] (strict mode)")
            extra["violation"] = x
            x = min(max(x, c.ell), c.u)
        return self._op_a(rng, x, op="a", **extra)


# ---------------------------------------------------------------- directed ACL

@dataclass
class AclCConfig(ModelConfig):
    """Directed: ``X_t`` edges into the new vertex from ``rho_0^out`` tails,
    ``Y_t`` edges out of it to ``rho_0^in`` heads, ``Z_t`` edges between
    ``rho_0^out``/``rho_0^in`` pairs and ``Q_t`` loops at the new vertex."""

    model: ClassVar[str] = "acl_c"
    X: SequenceSpec = 1
    Y: SequenceSpec = None
    Z: SequenceSpec = None
    Q: SequenceSpec = 0
    sampler: str = REDUCTION

    _sequences: ClassVar[tuple] = ("X", "Y", "Z", "Q")

    def __post_init__(self):
        if self.Y is None:
            self.Y = SequenceSpec("uniform", lo=0, hi=1)
        if self.Z is None:
            self.Z = SequenceSpec("uniform", lo=0, hi=1)
        super().__post_init__()

    def validate(self):
        if (self.X.lower or 0) + (self.Y.lower or 0) < 1:
            raise ModelError("acl_c needs X_t + Y_t > 0 (declare lower bounds)")


class AclC(IndexedModel):
    name = "acl_c"
    mode = Mode.DIRECTED
    config_cls = AclCConfig

    def default_seed(self):
        return two_cycle_seed()

    def index_spec(self):
        return {"out": (1, 0), "in": (1, 0)}

    def _plan(self, rng):
        c, t = self.config, self.t
        x, y, z, q = (s.emit(rng, t) for s in (c.X, c.Y, c.Z, c.Q))
        x_edges, xs = self._draws(rng, x, "out")
        y_edges, ys = self._draws(rng, y, "in")
        w_edges, ws = self._draws(rng, z, "out")
        w2_edges, w2s = self._draws(rng, z, "in")
        v = self.graph.num_vertices
        edges = [(PROPER, ws[j], w2s[j]) for j in range(z)]
        edges += [(PROPER, a, v) for a in xs]
        edges += [(PROPER, v, b) for b in ys]
        edges += [(PROPER, v, v)] * q
        return self._trace("acl_c", born=1, edges=edges, samples={
            "X": x, "Y": y, "Z": z, "Q": q, "x": xs, "y": ys, "w": ws, "w2": w2s,
            "x_edges": x_edges, "y_edges": y_edges, "w_edges": w_edges,
            "w2_edges": w2_edges})


pref_step = GenericPref.step
acl_d_step = AclD.step
glp_step = GLP.step
parid_step = Parid.step
acl_c_step = AclC.step
