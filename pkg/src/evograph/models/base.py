"""Shared machinery for the growth engines.

Every model plans a step by reading the current graph only, records what it
sampled in a :class:`StepTrace`, then realizes the planned structure through
``_realize``. Replaying a trace calls ``_realize`` alone, so a recorded run
can be rebuilt without any randomness.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, ClassVar

from ..graph import NONE, EdgeKind, GraphError, GrowingGraph, Mode, from_edges
from ..sampling import as_fraction, geo_sample


class ModelError(ValueError):
    """Invalid model configuration or a broken model contract."""


class SequenceBoundError(ModelError):
    """A sequence emitted a value outside its declared bounds."""


# ---------------------------------------------------------------- sequences

@dataclass(frozen=True)
class SequenceSpec:
    """Generator for an integer sequence such as ``X_t`` or ``A_t``.

    Kinds: ``constant`` (``value``), ``uniform`` (iid on ``lo..hi``), ``pmf``
    (iid from ``pmf``, a tuple of ``(value, prob)``), ``geometric``
    (iid ``offset + Geo(p)``) and ``replay`` (``values[t-1]`` at step ``t``).
    ``lower``/``upper`` are the declared bounds checked at every emission;
    they default to the support when it is finite.
    """

    kind: str = "constant"
    value: int = 1
    lo: int = 0
    hi: int = 0
    pmf: tuple = ()
    p: float = 0.5
    offset: int = 1
    values: tuple = ()
    lower: int | None = None
    upper: int | None = None

    def __post_init__(self):
        pmf = tuple((int(v), float(w)) for v, w in self.pmf)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        lo, hi = self.support()
        if self.lower is None:
            object.__setattr__(self, "lower", lo)
        if self.upper is None:
            object.__setattr__(self, "upper", hi)
        if self.kind == "pmf" and abs(sum(w for _, w in pmf) - 1) > 1e-12:
            raise ModelError("pmf probabilities must sum to 1")
        if self.kind == "uniform" and self.lo > self.hi:
            raise ModelError("uniform sequence needs lo <= hi")

    def support(self) -> tuple[int, int | None]:
        if self.kind == "constant":
            return self.value, self.value
        if self.kind == "uniform":
            return self.lo, self.hi
        if self.kind == "pmf":
            vals = [v for v, w in self.pmf if w > 0]
            return min(vals), max(vals)
        if self.kind == "geometric":
            return self.offset, None
        if self.kind == "replay":
            return min(self.values), max(self.values)
        raise ModelError(f"unknown sequence kind {self.kind!r}")

    def draw(self, rng, t: int) -> int:
        """Draw without the bound check."""
        kind = self.kind
        if kind == "constant":
            return self.value
        if kind == "uniform":
            return self.lo + rng.below(self.hi - self.lo + 1)
        if kind == "pmf":
            u, acc = rng.random(), 0.0
            for v, w in self.pmf:
                acc += w
                if u < acc:
                    return v
            return [v for v, w in self.pmf if w > 0][-1]
        if kind == "geometric":
            return self.offset + geo_sample(rng, self.p)
        if kind == "replay":
            if t > len(self.values):
                raise ModelError(f"replayed sequence exhausted at step {t}")
            return self.values[t - 1]
        raise ModelError(f"unknown sequence kind {kind!r}")

    def emit(self, rng, t: int) -> int:
        x = self.draw(rng, t)
        if (self.lower is not None and x < self.lower) or \
                (self.upper is not None and x > self.upper):
            raise SequenceBoundError(
                f"sequence value {x} at step {t} outside [{self.lower}, {self.upper}]")
        return x

    @classmethod
    def coerce(cls, obj) -> "SequenceSpec":
        if isinstance(obj, SequenceSpec):
            return obj
        if isinstance(obj, int):
            return cls("constant", value=obj)
        if isinstance(obj, dict):
            return cls(**obj)
        raise ModelError(f"cannot build a sequence from {obj!r}")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        keys = {"constant": ["value"], "uniform": ["lo", "hi"], "pmf": ["pmf"],
                "geometric": ["p", "offset"], "replay": ["values"]}[self.kind]
        for k in keys:
            v = getattr(self, k)
            d[k] = [list(x) for x in v] if k == "pmf" else list(v) if k == "values" else v
        lo, hi = self.support()
        if self.lower != lo:
            d["lower"] = self.lower
        if self.upper != hi:
            d["upper"] = self.upper
        return d


def const(c: int) -> SequenceSpec:
    return SequenceSpec("constant", value=c)


def uniform_int(lo: int, hi: int) -> SequenceSpec:
    return SequenceSpec("uniform", lo=lo, hi=hi)


# --------------------------------------------------------------- strategies

UNIFORM_ENDPOINT, FIRST_ENDPOINT = "uniform_endpoint", "first_endpoint"
UNIFORM_VERTEX, NEW_VERTEX, ADVERSARY = "uniform_vertex", "new_vertex", "adversary"


@dataclass(frozen=True)
class Strategy:
    """Resolution of the choices the models leave arbitrary.

    ``endpoint`` picks which endpoint of a sampled edge is used;
    ``target`` picks the free endpoint of an added edge. With ``adversary``
    policies the callback ``adversary(state, point, options)`` decides, where
    ``point`` names the choice and ``options`` lists the admissible vertices
    (or is a ``range``).
    """

    endpoint: str = UNIFORM_ENDPOINT
    target: str = UNIFORM_VERTEX
    adversary: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.endpoint not in (UNIFORM_ENDPOINT, FIRST_ENDPOINT, ADVERSARY):
            raise ModelError(f"unknown endpoint policy {self.endpoint!r}")
        if self.target not in (UNIFORM_VERTEX, NEW_VERTEX, ADVERSARY):
            raise ModelError(f"unknown target policy {self.target!r}")
        if ADVERSARY in (self.endpoint, self.target) and self.adversary is None:
            raise ModelError("adversary policy needs a callback")

    def choose_endpoint(self, rng, state, g: GrowingGraph, e: int) -> int:
        a, b = g.tails[e], g.heads[e]
        if self.endpoint == UNIFORM_ENDPOINT:
            return b if rng.below(2) else a
        if self.endpoint == FIRST_ENDPOINT:
            return a
        return self._ask(state, "endpoint", (a, b))

    def choose_target(self, rng, state, n_existing: int, new_vertex: int | None = None) -> int:
        """Free endpoint among ``range(n_existing)``, or ``new_vertex`` when
        the policy asks for it and the model permits it."""
        if self.target == UNIFORM_VERTEX or (self.target == NEW_VERTEX and new_vertex is None):
            return rng.below(n_existing)
        if self.target == NEW_VERTEX:
            return new_vertex
        options = range(n_existing) if new_vertex is None else range(n_existing + 1)
        return self._ask(state, "target", options)

    def _ask(self, state, point, options):
        x = self.adversary(state, point, options)
        if x not in options:
            raise ModelError(f"adversary returned {x!r}, not among {options!r}")
        return x

    @classmethod
    def coerce(cls, obj) -> "Strategy":
        if isinstance(obj, Strategy):
            return obj
        if obj is None:
            return cls()
        if isinstance(obj, dict):
            return cls(**obj)
        raise ModelError(f"cannot build a strategy from {obj!r}")

    def to_dict(self) -> dict:
        if self.adversary is not None:
            raise ModelError("strategies with an adversary callback are not serializable")
        return {"endpoint": self.endpoint, "target": self.target}


# -------------------------------------------------------------------- trace

@dataclass
class StepTrace:
    """What one step sampled and what it created.

    ``edges`` lists the planned ``(kind, tail, head)`` triples; ``retire``
    the edge ids removed first (pegging only). ``samples`` holds the
    model-specific record of sampled entities in draw order, including the
    pivots the couplings attach to. ``new_vertices``, ``new_edges`` and
    ``hat_edges`` are filled in when the step is realized.
    """

    model: str
    t: int
    op: str
    born: int = 0
    edges: list = field(default_factory=list)
    retire: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)
    new_vertices: list = field(default_factory=list)
    new_edges: list = field(default_factory=list)
    hat_edges: list = field(default_factory=list)

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["edges"] = [[int(k), t, h] for k, t, h in self.edges]
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "StepTrace":
        d = json.loads(line)
        d["edges"] = [tuple(e) for e in d["edges"]]
        return cls(**d)


# ------------------------------------------------------------------- config

def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (SequenceSpec, Strategy)):
        return v.to_dict()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class ModelConfig:
    """Common configuration fields.

    ``seed_graph`` overrides the default G_0 with a dict
    ``{"n": ..., "edges": [[tail, head(, kind)], ...], "root": ...}``
    (``null`` for an absent endpoint). ``debug`` asserts the model's count
    laws after every step.
    """

    model: ClassVar[str] = ""
    seed_graph: dict | None = None
    debug: bool = False

    _sequences: ClassVar[tuple] = ()
    _fractions: ClassVar[tuple] = ()
    _strategies: ClassVar[tuple] = ()

    def __post_init__(self):
        for name in self._sequences:
            setattr(self, name, SequenceSpec.coerce(getattr(self, name)))
        for name in self._fractions:
            setattr(self, name, as_fraction(getattr(self, name)))
        for name in self._strategies:
            setattr(self, name, Strategy.coerce(getattr(self, name)))
        self.validate()

    def validate(self) -> None:
        pass

    def to_dict(self) -> dict:
        d = {"model": self.model}
        for f in dataclasses.fields(self):
            d[f.name] = _jsonable(getattr(self, f.name))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def replace(self, **changes) -> "ModelConfig":
        return dataclasses.replace(self, **changes)


def check_probabilities(*ps, names="probabilities"):
    if any(p < 0 for p in ps) or abs(sum(ps) - 1) > 1e-12:
        raise ModelError(f"{names} must be nonnegative and sum to 1, got {ps}")


def choose_index(rng, probs) -> int:
    """Index ``i`` with probability ``probs[i]``."""
    u, acc = rng.random(), 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return max(i for i, p in enumerate(probs) if p > 0)


# -------------------------------------------------------------------- model

class Model:
    """Base growth engine. Subclasses implement ``default_seed`` and ``_plan``."""

    name: ClassVar[str] = ""
    mode: ClassVar[Mode] = Mode.UNDIRECTED
    config_cls: ClassVar[type] = ModelConfig
    # edge-tree couplings need the graph to carry at least one edge
    needs_edge: ClassVar[bool] = True

    def __init__(self, config: ModelConfig | None = None):
        self.config = config if config is not None else self.config_cls()
        if not isinstance(self.config, self.config_cls):
            raise ModelError(f"{self.name} needs a {self.config_cls.__name__}")
        self.t = 0
        self.hat = None
        self.graph = self._build_seed()
        self.g0_vertices = self.graph.num_vertices
        self.g0_edges = self.graph.num_edges
        self._setup()

    # ------------------------------------------------------------ seed graph
    def default_seed(self) -> GrowingGraph:
        raise NotImplementedError

    def _build_seed(self) -> GrowingGraph:
        spec = self.config.seed_graph
        if spec is None:
            g = self.default_seed()
        else:
            edges = [tuple(e) for e in spec.get("edges", [])]
            g = from_edges(edges, n=spec.get("n"), mode=self.mode, root=spec.get("root", 0))
        if g.mode is not self.mode:
            raise ModelError(f"{self.name} needs a {self.mode.name.lower()} seed graph")
        if g.num_vertices == 0:
            raise ModelError("seed graph has no vertices")
        if self.needs_edge and g.num_edges == 0:
            raise ModelError(f"{self.name} needs a seed graph with at least one edge")
        from ..metrics import is_connected
        if not is_connected(g):
            raise ModelError("seed graph is not (weakly) connected")
        self.check_seed(g)
        return g

    def check_seed(self, g: GrowingGraph) -> None:
        """Model-specific seed constraints."""

    def _setup(self) -> None:
        """Initialize auxiliary indices from the seed graph."""

    # ---------------------------------------------------------------- growth
    def step(self, rng) -> StepTrace:
        self.t += 1
        trace = self._plan(rng)
        self._realize(trace)
        if self.config.debug:
            self.check_invariants()
        return trace

    def grow(self, n: int, rng, on_step: Callable | None = None) -> list | None:
        for _ in range(n):
            trace = self.step(rng)
            if on_step is not None:
                on_step(trace)

    def replay(self, trace: StepTrace) -> None:
        if trace.model != self.name or trace.t != self.t + 1:
            raise ModelError(f"trace {trace.model}@{trace.t} does not follow "
                             f"{self.name}@{self.t}")
        self.t = trace.t
        trace.new_vertices, trace.new_edges, trace.hat_edges = [], [], []
        self._realize(trace)

    def _plan(self, rng) -> StepTrace:
        raise NotImplementedError

    def _trace(self, op: str, **kw) -> StepTrace:
        return StepTrace(self.name, self.t, op, **kw)

    def _realize(self, trace: StepTrace) -> None:
        g, t = self.graph, trace.t
        for _ in range(trace.born):
            v = g.add_vertex(t)
            trace.new_vertices.append(v)
            self._vertex_added(v, trace)
        for e in trace.retire:
            self._edge_retired(e, trace)
        for kind, tail, head in trace.edges:
            e = g.add_edge(kind, None if tail == NONE else tail,
                           None if head == NONE else head, t)
            trace.new_edges.append(e)
            self._edge_added(e, trace)
        self._after_realize(trace)

    def _vertex_added(self, v: int, trace: StepTrace) -> None:
        if self.hat is not None:
            trace.hat_edges.extend(self.hat.add_vertex(v, trace.t))

    def _edge_added(self, e: int, trace: StepTrace) -> None:
        if self.hat is not None:
            trace.hat_edges.extend(self.hat.add_edge(e, trace.t))

    def _edge_retired(self, e: int, trace: StepTrace) -> None:
        self.graph.retire_edge(e)

    def _after_realize(self, trace: StepTrace) -> None:
        pass

    # ------------------------------------------------------------ invariants
    def check_invariants(self) -> None:
        """Assert the model's count laws; raises ``ModelError``."""
        try:
            self.graph.check_degrees()
        except GraphError as exc:
            raise ModelError(str(exc)) from exc

    @property
    def coupling_graph(self) -> GrowingGraph:
        """Graph whose entities the coupled tree tracks (the hat graph when
        one is maintained)."""
        return self.hat.graph if self.hat is not None else self.graph


PROPER, HEADLESS, TAILLESS, LOOP = (int(EdgeKind.PROPER), int(EdgeKind.HEADLESS),
                                    int(EdgeKind.TAILLESS), int(EdgeKind.LOOP))
