"""Experiment orchestration: grow, audit, measure, compare with the bounds.

Every row is a pure function of ``(config, seed, n)``: the cell's random
stream is ``RngStream(seed, stream=n)``, so rows never depend on which other
cells ran or on how many worker processes were used.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .coupling import NEEDS_REDUCTION, Coupler
from .models import Model, ModelConfig, init
from .sampling import RngStream

E = math.e

AUDIT_LEVELS = ("off", "checkpoints", "every-step")

CSV_COLUMNS = ("model", "config_digest", "seed", "n", "num_vertices", "num_edges",
               "diameter", "height", "tree_height", "weighted_height", "bound", "slack",
               "violations", "error")


# ------------------------------------------------------------------ bounds

@dataclass(frozen=True)
class BoundSpec:
    """``c1 * ln n + c2 + slack``; ``params`` records the bindings used."""

    model: str
    c1: float
    c2: float
    slack: float
    params: tuple = ()

    def evaluate(self, n: int) -> float:
        return evaluate_bound(self, n)


def evaluate_bound(spec: BoundSpec, n: int) -> float:
    if n < 2:
        raise ValueError("bounds are stated for n >= 2")
    return spec.c1 * math.log(n) + spec.c2 + spec.slack


def uniform_attachment_height_bound(n: int, ell: int = 1, u: int = 1, n0: int = 0) -> float:
    """Height bound for a tree where each step attaches at most ``u`` (and at
    least ``ell``) nodes to uniformly chosen nodes; ``n0 = |V(T_0)|``."""
    return (u / ell) * E * math.log(n) + 2 * u * E + n0


def leaf_attachment_height_bound(n: int, ell: int, u: int, n0: int = 0) -> float:
    """Same for attachment to uniformly chosen leaves (needs ``ell > 1``)."""
    if ell <= 1:
        raise ValueError("the leaf variant needs ell > 1")
    return u * E * math.log(n) / (ell - 1) + 2 * u * E + n0


def _window(*seqs):
    lo = sum(s.lower for s in seqs)
    hi = sum(s.upper for s in seqs) if all(s.upper is not None for s in seqs) else None
    return lo, hi


def bound_spec(config: ModelConfig, seed_vertices: int) -> BoundSpec | None:
    """Bound for ``config`` or ``None`` when its hypotheses are not met (an
    unbounded sequence or a zero lower window)."""
    name = config.model
    slack1 = seed_vertices + 10

    def pref_like(ell, u):
        if u is None or ell < 1:
            return None
        return BoundSpec(name, 4 * E * u / ell, 8 * E * u, slack1, (("ell", ell), ("u", u)))

    if name == "forest_fire":
        return BoundSpec(name, 2 * E, 0.0, slack1)
    if name == "copying":
        return BoundSpec(name, 4 * E, 0.0, slack1)
    if name == "hybrid":
        return BoundSpec(name, 18 / (1 - config.q), 0.0, 0.0, (("q", config.q),))
    if name == "pref":
        return pref_like(*_window(config.A, config.B))
    if name == "acl_d":
        return pref_like(*_window(config.X, config.Y, config.Z))
    if name == "acl_c":
        return pref_like(*_window(config.X, config.Y, config.Z, config.Q))
    if name == "directed_generic":
        ell = _window(config.A, config.B, config.E)[0]
        u = _window(config.A, config.B, config.C, config.D, config.E)[1]
        return pref_like(ell, u)
    if name in ("glp", "parid"):
        ell, u = (config.ell, config.u) if name == "parid" else _window(config.X)
        if u is None:
            return None
        d = float(config.delta)
        return BoundSpec(name, 4 * E * (u / ell + d / (2 * ell)), 0.0,
                         seed_vertices + 10 * u, (("ell", ell), ("u", u), ("delta", d)))
    if name == "directed_scale_free":
        ell, u = _window(config.X)
        if u is None:
            return None
        a, b = float(config.alpha), float(config.beta)
        return BoundSpec(name, 4 * E * (u + a + b) / ell, 0.0, seed_vertices + 10 * u,
                         (("ell", ell), ("u", u), ("alpha", a), ("beta", b)))
    if name == "cooper_frieze":
        ell, u = _window(config.X)
        if u is None:
            return None
        q = config.q
        return BoundSpec(name, 4 * E * (u / ell + 11 / q), 8 * E * u / ell, slack1,
                         (("ell", ell), ("u", u), ("q", q)))
    if name == "pegging":
        return BoundSpec(name, 4 * E, 0.0, slack1)
    if name == "ktree":
        return BoundSpec(name, 2 * E, 0.0, slack1, (("k", config.k),))
    if name == "apollonian":
        k = config.k
        return BoundSpec(name, 2 * E * k / (k - 1), 0.0, slack1, (("k", k),))
    return None


# ------------------------------------------------------------------ results

@dataclass
class ExperimentResult:
    model: str
    config_digest: str
    seed: int
    n: int
    num_vertices: int = 0
    num_edges: int = 0
    diameter: int = -1
    height: int = -1
    tree_height: int = -1
    weighted_height: int = -1
    bound: float | None = None
    slack: float | None = None
    violations: int = 0
    error: str = ""
    first_violation: str = ""
    wall_time: float = 0.0

    @property
    def within_bound(self) -> bool | None:
        if self.bound is None or self.error:
            return None
        return self.diameter <= self.bound

    def csv_row(self) -> list:
        row = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if col in ("bound", "slack"):
                v = "" if v is None else f"{v:.6f}"
            row.append(v)
        return row

    def to_json(self) -> str:
        d = {c: getattr(self, c) for c in CSV_COLUMNS}
        d["first_violation"] = self.first_violation
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def config_digest(config: ModelConfig) -> str:
    return hashlib.sha256(config.to_json().encode()).hexdigest()[:12]


def coupled_config(config: ModelConfig) -> ModelConfig:
    """Same model with the sampler its coupling needs."""
    if config.model in NEEDS_REDUCTION and getattr(config, "sampler", None) != "reduction":
        return config.replace(sampler="reduction")
    return config


def audit_steps(n: int, audit: str):
    """Steps at which the coupling is audited; the final step is always one."""
    if audit == "off" or n == 0:
        return set()
    if audit == "every-step" or n <= 1000:
        return set(range(1, n + 1))
    stride = math.ceil(n / 100)
    return set(range(stride, n + 1, stride)) | {n}


def grow(config: ModelConfig, n: int, seed: int, on_step=None) -> Model:
    state = init(config)
    state.grow(n, RngStream(seed, stream=n), on_step)
    return state


def run(config: ModelConfig, n: int, seed: int, audit: str = "off",
        with_tree: bool | None = None) -> ExperimentResult:
    """Grow ``n`` steps, audit the coupling at the chosen cadence, measure."""
    if audit not in AUDIT_LEVELS:
        raise ValueError(f"audit must be one of {AUDIT_LEVELS}")
    with_tree = audit != "off" if with_tree is None else with_tree
    if with_tree:
        config = coupled_config(config)
    start = time.perf_counter()
    res = ExperimentResult(config.model, config_digest(config), seed, n)
    state = init(config)
    coupler = Coupler(state) if with_tree else None
    rng = RngStream(seed, stream=n)
    checks = audit_steps(n, audit)
    next_spot = 1
    for t in range(1, n + 1):
        trace = state.step(rng)
        if coupler is not None:
            coupler.apply(trace)
        if t in checks:
            report = coupler.check()
            if not report.ok:
                res.violations += 1
                if not res.first_violation:
                    res.first_violation = report.summary()
        if t == next_spot:
            next_spot *= 2
            if not metrics.is_connected(state.graph):
                raise metrics.ConnectivityError(f"{config.model} disconnected at step {t}")
    g = state.graph
    view = metrics.DistanceView.from_graph(g)
    res.num_vertices, res.num_edges = g.num_vertices, g.num_edges
    res.diameter = metrics.diameter_exact(view)
    res.height = metrics.height_from_root(view, g.root)
    if not res.height <= res.diameter <= 2 * res.height:
        raise AssertionError(f"diameter {res.diameter} vs height {res.height}")
    if coupler is not None:
        res.tree_height = coupler.tree.height()
        res.weighted_height = coupler.tree.weighted_height()
    spec = bound_spec(config, state.g0_vertices)
    if spec is not None and n >= 2:
        res.bound = evaluate_bound(spec, n)
        res.slack = spec.slack
    res.wall_time = time.perf_counter() - start
    return res


def _run_cell(args):
    config, n, seed, audit = args
    try:
        return run(config, n, seed, audit)
    except Exception as exc:  # a failed cell must not sink the sweep
        return ExperimentResult(config.model, config_digest(config), seed, n,
                                error=f"{type(exc).__name__}: {exc}")


def default_parallelism() -> int:
    try:
        return max(1, int(os.environ.get("EVOGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def sweep(config: ModelConfig, n_list, seeds, parallelism: int | None = None,
          audit: str = "off") -> list[ExperimentResult]:
    """Every ``(n, seed)`` cell, sorted by ``(n, seed)``."""
    cells = [(config, int(n), int(s), audit) for n in n_list for s in seeds]
    workers = default_parallelism() if parallelism is None else max(1, parallelism)
    if workers == 1 or len(cells) <= 1:
        rows = [_run_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(cells))) as pool:
            rows = list(pool.map(_run_cell, cells))
    return sorted(rows, key=lambda r: (r.n, r.seed))


def write_csv(rows, fh=None) -> str:
    buf = io.StringIO() if fh is None else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_row())
    return buf.getvalue() if fh is None else ""


def write_jsonl(rows) -> str:
    return "".join(r.to_json() + "\n" for r in rows)


# --------------------------------------------------------------------- fits

@dataclass
class GrowthFit:
    slope: float
    intercept: float
    residual: float
    points: list = field(default_factory=list)


def fit_growth(rows) -> GrowthFit:
    """Least-squares line through mean diameter against ``ln n``."""
    by_n: dict[int, list] = {}
    for r in rows:
        if isinstance(r, ExperimentResult):
            if r.error:
                continue
            n, d = r.n, r.diameter
        else:
            n, d = r
        by_n.setdefault(int(n), []).append(float(d))
    ns = sorted(k for k in by_n if k >= 2)
    if len(ns) < 3:
        raise ValueError("fit_growth needs at least three distinct n >= 2")
    x = np.log(np.array(ns, dtype=float))
    y = np.array([np.mean(by_n[k]) for k in ns])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return GrowthFit(float(slope), float(intercept), resid, list(zip(ns, y.tolist())))


__all__ = ["BoundSpec", "evaluate_bound", "bound_spec", "uniform_attachment_height_bound",
           "leaf_attachment_height_bound", "ExperimentResult", "run", "sweep", "fit_growth",
           "write_csv", "write_jsonl", "config_digest", "audit_steps", "AUDIT_LEVELS",
           "CSV_COLUMNS", "GrowthFit", "coupled_config", "grow"]
