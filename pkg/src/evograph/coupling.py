"""Coupled trees built online from step traces, and their domination audits.

Every model comes with a growing tree whose (weighted) depths dominate
graph depths. The tree is driven only by the recorded samples of each step,
and :func:`check_domination` compares it against depths recomputed from
scratch by BFS, so the audit never trusts the structures it audits.

Node keys are ``root``, ``v<id>``, ``e<id>`` and ``c<id>``. Depth notions:

* vertex: BFS distance to the graph's root;
* edge: one plus the smaller depth of its present endpoints (headless and
  tailless edges have only one);
* clique: largest depth of its vertices, measured from the first ``k``
  vertices;
* forest fire: length of a shortest directed path into the seed vertices.
"""

from __future__ import annotations

import heapq
import io
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .graph import NONE, GrowingGraph

ROOT, VERTEX, EDGE, CLIQUE = 0, 1, 2, 3
KEY_PREFIX = {ROOT: "root", VERTEX: "v", EDGE: "e", CLIQUE: "c"}

VERTEX_TREE = "vertex"
WEIGHTED_VERTEX_TREE = "weighted_vertex"
EDGE_TREE = "edge"
GENERALIZED_EDGE_TREE = "generalized_edge"
MULTI_TYPED_TREE = "multi_typed"
CLIQUE_TREE = "clique"
PEGGING_TREE = "pegging"

TREE_KIND = {
    "forest_fire": VERTEX_TREE,
    "copying": VERTEX_TREE,
    "hybrid": WEIGHTED_VERTEX_TREE,
    "pref": EDGE_TREE,
    "acl_d": EDGE_TREE,
    "glp": EDGE_TREE,
    "parid": EDGE_TREE,
    "acl_c": EDGE_TREE,
    "directed_generic": GENERALIZED_EDGE_TREE,
    "directed_scale_free": GENERALIZED_EDGE_TREE,
    "cooper_frieze": MULTI_TYPED_TREE,
    "pegging": PEGGING_TREE,
    "ktree": CLIQUE_TREE,
    "apollonian": CLIQUE_TREE,
}

# graph depth <= FACTOR * tree depth
FACTOR = {"forest_fire": 1, "hybrid": 1, "ktree": 1, "apollonian": 1}

# models whose couplings need the sampled edge ids of the reduction sampler
NEEDS_REDUCTION = {"acl_d", "glp", "parid", "acl_c", "directed_scale_free", "cooper_frieze"}


class CouplingError(RuntimeError):
    """A trace does not fit the tree (wrong model or missing pivot)."""


# ------------------------------------------------------------------- tree

class CoupledTree:
    """Rooted tree over graph entities with cached (weighted) depths."""

    def __init__(self, kind: str):
        self.kind = kind
        self.node_type: list[int] = []
        self.entity: list[int] = []
        self.parent: list[int] = []
        self.depth: list[int] = []
        self.wdepth: list[int] = []
        self.weight: list[int] = []
        self.children: list[int] = []
        # entity id -> node index, dense per type (-1 when absent)
        self.vertex_node: list[int] = []
        self.edge_node: list[int] = []
        self.clique_node: list[int] = []
        self.root = -1

    def __len__(self):
        return len(self.parent)

    def _table(self, node_type):
        return {VERTEX: self.vertex_node, EDGE: self.edge_node,
                CLIQUE: self.clique_node}.get(node_type)

    def add_root(self, node_type: int = ROOT, entity: int = -1) -> int:
        if self.root >= 0:
            raise CouplingError("tree already has a root")
        self.root = self._new(node_type, entity, -1, 0, 0, 0)
        return self.root

    def add(self, node_type: int, entity: int, parent: int, weight: int = 1) -> int:
        if not 0 <= parent < len(self.parent):
            raise CouplingError(f"missing parent node {parent}")
        if weight < 0:
            raise CouplingError("tree weights are nonnegative")
        self.children[parent] += 1
        return self._new(node_type, entity, parent, self.depth[parent] + 1,
                         self.wdepth[parent] + weight, weight)

    def _new(self, node_type, entity, parent, depth, wdepth, weight):
        i = len(self.parent)
        table = self._table(node_type)
        if table is not None:
            while len(table) <= entity:
                table.append(-1)
            if table[entity] != -1:
                raise CouplingError(f"{KEY_PREFIX[node_type]}{entity} already has a node")
            table[entity] = i
        self.node_type.append(node_type)
        self.entity.append(entity)
        self.parent.append(parent)
        self.depth.append(depth)
        self.wdepth.append(wdepth)
        self.weight.append(weight)
        self.children.append(0)
        return i

    def node_of(self, node_type: int, entity: int) -> int:
        table = self._table(node_type)
        i = table[entity] if 0 <= entity < len(table) else -1
        if i < 0:
            raise CouplingError(f"no tree node for {KEY_PREFIX[node_type]}{entity}")
        return i

    def relabel(self, node: int, node_type: int, entity: int) -> None:
        """Move ``node`` onto a different entity, keeping its place and depth."""
        old = self._table(self.node_type[node])
        old[self.entity[node]] = -1
        table = self._table(node_type)
        while len(table) <= entity:
            table.append(-1)
        table[entity] = node
        self.node_type[node] = node_type
        self.entity[node] = entity

    def key(self, node: int) -> str:
        t = self.node_type[node]
        return "root" if t == ROOT else f"{KEY_PREFIX[t]}{self.entity[node]}"

    def height(self) -> int:
        return max(self.depth) if self.depth else 0

    def weighted_height(self) -> int:
        return max(self.wdepth) if self.wdepth else 0

    def depths(self) -> np.ndarray:
        return np.array(self.depth, dtype=np.int64)

    def wdepths(self) -> np.ndarray:
        return np.array(self.wdepth, dtype=np.int64)

    def check_structure(self) -> None:
        """Recompute depths from parent pointers and compare with the cache."""
        for i, p in enumerate(self.parent):
            if p < 0:
                if i != self.root or self.depth[i] != 0:
                    raise CouplingError(f"stray root at node {i}")
                continue
            if p >= i:
                raise CouplingError(f"node {i} has a younger parent {p}")
            if self.depth[i] != self.depth[p] + 1 or \
                    self.wdepth[i] != self.wdepth[p] + self.weight[i]:
                raise CouplingError(f"depth cache broken at node {i}")

    def export_tsv(self) -> bytes:
        out = io.StringIO()
        for i, p in enumerate(self.parent):
            out.write(f"{self.key(i)}\t{'-' if p < 0 else self.key(p)}\t{self.weight[i]}\n")
        return out.getvalue().encode()


def height(tree: CoupledTree) -> int:
    return tree.height()


def weighted_height(tree: CoupledTree) -> int:
    return tree.weighted_height()


# -------------------------------------------------------- seed constructions

def _incident(g: GrowingGraph, v: int):
    """``(edge, other endpoint)`` over alive proper edges at ``v``."""
    if not g.directed:
        for e in g.adj[v]:
            a, b = g.tails[e], g.heads[e]
            yield e, b if a == v else a
        return
    for e in g.out_edges[v]:
        if g.heads[e] != NONE:
            yield e, g.heads[e]
    for e in g.in_edges[v]:
        if g.tails[e] != NONE:
            yield e, g.tails[e]


def _bfs_tree(g: GrowingGraph, root: int):
    """Vertex order, depth and BFS parent (vertex and edge) from ``root``."""
    n = g.num_vertices
    depth = [-1] * n
    pvert = [-1] * n
    pedge = [-1] * n
    depth[root] = 0
    order = [root]
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for e, y in _incident(g, x):
            if depth[y] < 0:
                depth[y] = depth[x] + 1
                pvert[y], pedge[y] = x, e
                order.append(y)
                queue.append(y)
    if len(order) != n:
        raise CouplingError("seed graph is not connected")
    return order, depth, pvert, pedge


def _edge_seed_tree(g: GrowingGraph, kind: str) -> CoupledTree:
    """BFS tree of the line graph of G_0 plus a root edge: an edge whose
    shallower endpoint sits at depth ``d > 0`` hangs below the BFS edge into
    that endpoint, one at depth 0 hangs below the root."""
    tree = CoupledTree(kind)
    tree.add_root()
    _, depth, _, pedge = _bfs_tree(g, g.root)
    eids = [e for e in g.pool]

    def anchor(e):
        ends = [x for x in (g.tails[e], g.heads[e]) if x != NONE]
        return min(ends, key=lambda x: (depth[x], x))

    # parents are added before children: sort by edge depth
    for e in sorted(eids, key=lambda e: (depth[anchor(e)], pedge[anchor(e)] != e, e)):
        x = anchor(e)
        parent = tree.root if depth[x] == 0 else tree.node_of(EDGE, pedge[x])
        tree.add(EDGE, e, parent)
    return tree


def init_from_seed(g: GrowingGraph, kind: str, k: int | None = None) -> CoupledTree:
    """T_0 for the given tree kind over the seed graph ``g``."""
    if kind in (VERTEX_TREE, WEIGHTED_VERTEX_TREE, MULTI_TYPED_TREE):
        tree = CoupledTree(kind)
        order, depth, pvert, _ = _bfs_tree(g, g.root)
        tree.add_root(VERTEX, g.root)
        for v in order[1:]:
            tree.add(VERTEX, v, tree.node_of(VERTEX, pvert[v]))
        if kind == MULTI_TYPED_TREE:
            deepest = tree.node_of(VERTEX, order[-1])
            for e in g.pool:
                tree.add(EDGE, e, deepest)
        return tree
    if kind in (EDGE_TREE, GENERALIZED_EDGE_TREE, PEGGING_TREE):
        return _edge_seed_tree(g, kind)
    if kind == CLIQUE_TREE:
        tree = CoupledTree(kind)
        tree.add_root(CLIQUE, 0)
        return tree
    raise CouplingError(f"unknown tree kind {kind!r}")


# ---------------------------------------------------- incremental BFS depths

class DynamicDepths:
    """BFS depths from the root kept current under edge insertions and
    deletions of an undirected graph.

    Deletions find the vertices that lost every neighbour one level up,
    processed in depth order, and re-settle them from their unaffected
    neighbours; insertions relax outward.
    """

    INF = float("inf")

    def __init__(self, g: GrowingGraph):
        self.g = g
        self.depth: list = list(metrics.bfs_depths(g, g.root).tolist())

    def _nbrs(self, v):
        g = self.g
        for e in g.adj[v]:
            a, b = g.tails[e], g.heads[e]
            if a != b:
                yield b if a == v else a

    def add_vertex(self):
        self.depth.append(self.INF)

    def _relax_from(self, seeds):
        depth = self.depth
        heap = [(depth[v], v) for v in seeds if depth[v] < self.INF]
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if d > depth[v]:
                continue
            for w in self._nbrs(v):
                if d + 1 < depth[w]:
                    depth[w] = d + 1
                    heapq.heappush(heap, (d + 1, w))

    def edge_added(self, a: int, b: int):
        self._relax_from((a, b))

    def edges_removed(self, pairs):
        """Repair after the edges ``pairs`` were removed from the graph."""
        depth = self.depth
        root = self.g.root
        heap = []
        for a, b in pairs:
            for x, y in ((a, b), (b, a)):
                if depth[x] == depth[y] + 1:
                    heapq.heappush(heap, (depth[x], x))
        affected = set()
        seen = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in seen or x == root:
                continue
            seen.add(x)
            supported = any(depth[y] == d - 1 and y not in affected for y in self._nbrs(x))
            if supported:
                continue
            affected.add(x)
            for y in self._nbrs(x):
                if depth[y] == d + 1:
                    heapq.heappush(heap, (d + 1, y))
        if not affected:
            return
        for x in affected:
            depth[x] = self.INF
        for x in affected:
            best = min((depth[y] + 1 for y in self._nbrs(x) if y not in affected),
                       default=self.INF)
            depth[x] = best
        self._relax_from(affected)


# ---------------------------------------------------------------- coupler

class Coupler:
    """Keeps the coupled tree of one model state in step with its growth."""

    def __init__(self, state):
        name = state.name
        if name not in TREE_KIND:
            raise CouplingError(f"no coupling for model {name!r}")
        if name in NEEDS_REDUCTION and getattr(state, "native", False):
            raise CouplingError(f"{name} coupling needs sampler='reduction'")
        if state.t != 0:
            raise CouplingError("couplings start from the seed graph")
        self.state = state
        self.name = name
        self.kind = TREE_KIND[name]
        self.factor = FACTOR.get(name, 2)
        g = state.coupling_graph
        self.tree = init_from_seed(g, self.kind)
        self.seed_vertices = g.num_vertices
        self.dyn = DynamicDepths(g) if self.kind == PEGGING_TREE else None
        self._apply = getattr(self, "_apply_" + name)

    @property
    def graph(self) -> GrowingGraph:
        return self.state.coupling_graph

    def _node(self, node_type, entity):
        if entity is None or entity < 0:
            raise CouplingError(f"trace is missing a pivot ({KEY_PREFIX[node_type]})")
        return self.tree.node_of(node_type, entity)

    def _attach_edges(self, edges, parent, weight=1):
        for e in edges:
            self.tree.add(EDGE, e, parent, weight)

    def apply(self, trace) -> None:
        if trace.model != self.name:
            raise CouplingError(f"{trace.model} trace fed to a {self.name} coupling")
        self._apply(trace)

    # vertex trees
    def _apply_forest_fire(self, tr):
        self.tree.add(VERTEX, tr.new_vertices[0],
                      self._node(VERTEX, tr.samples["ambassador"]))

    def _apply_copying(self, tr):
        s = tr.samples
        pivot = s["ambassador"] if any(s["copied"]) else s["heads"][0]
        self.tree.add(VERTEX, tr.new_vertices[0], self._node(VERTEX, pivot))

    def _apply_hybrid(self, tr):
        s = tr.samples
        self.tree.add(VERTEX, tr.new_vertices[0], self._node(VERTEX, s["starts"][0]),
                      weight=s["lengths"][0] + 1)

    # edge trees
    def _apply_pref(self, tr):
        s = tr.samples
        a = s["A"]
        if a:
            self._attach_edges(tr.new_edges[:a], self._node(EDGE, s["e1"]))
        for j, e in enumerate(tr.new_edges[a:]):
            self.tree.add(EDGE, e, self._node(EDGE, s["edge_pivots"][j]))

    def _apply_acl_d(self, tr):
        s = tr.samples
        z = s["Z"]
        for j in range(z):
            self.tree.add(EDGE, tr.new_edges[j], self._node(EDGE, s["W_edges"][2 * j]))
        self._attach_edges(tr.new_edges[z:], self._node(EDGE, s["N_edges"][0]))

    def _apply_glp(self, tr):
        s, hat = tr.samples, self.state.hat
        if tr.op == "a":
            self._attach_edges(tr.hat_edges, self._node(EDGE, s["pivots"][0]))
            return
        for i, e in enumerate(tr.new_edges):
            self._attach_edges(hat.copies_of[e], self._node(EDGE, s["pivots"][2 * i]))

    _apply_parid = _apply_glp

    def _apply_acl_c(self, tr):
        s = tr.samples
        z = s["Z"]
        for j in range(z):
            self.tree.add(EDGE, tr.new_edges[j], self._node(EDGE, s["w_edges"][j]))
        pivot = s["x_edges"][0] if s["X"] else s["y_edges"][0]
        self._attach_edges(tr.new_edges[z:], self._node(EDGE, pivot))

    def _apply_directed_generic(self, tr):
        s = tr.samples
        k = 0
        if s["case"]:
            k = s["A"] + s["B"] + s["C"] + s["D"]
            self._attach_edges(tr.new_edges[:k], self._node(EDGE, s["e1"]))
        for j, e in enumerate(tr.new_edges[k:]):
            self.tree.add(EDGE, e, self._node(EDGE, s["edge_pivots"][j]))

    def _apply_directed_scale_free(self, tr):
        s, hat = tr.samples, self.state.hat
        if tr.op in ("a", "b"):
            self._attach_edges(tr.hat_edges, self._node(EDGE, s["pivots"][0]))
            return
        for i, e in enumerate(tr.new_edges):
            self._attach_edges(hat.copies_of[e], self._node(EDGE, s["pivots"][i]))

    # multi-typed tree
    def _apply_cooper_frieze(self, tr):
        s = tr.samples
        if tr.op in ("a", "c", "d"):
            parent = self._node(VERTEX, s["vertices"][0])
        else:
            parent = self._node(EDGE, s["pivots"][0])
        for v in tr.new_vertices:
            self.tree.add(VERTEX, v, parent)
        self._attach_edges(tr.new_edges, parent)

    # pegging
    def _apply_pegging(self, tr):
        s = tr.samples
        a, b, c, d = s["ends"]
        depth = self.dyn.depth
        # orientation from the depths of G_{t-1}
        e_low = 0 if depth[a] <= depth[b] else 1
        f_low = 2 if depth[c] <= depth[d] else 3
        new = tr.new_edges
        tree = self.tree
        ae = tree.node_of(EDGE, s["e"])
        tree.relabel(ae, EDGE, new[e_low])
        tree.relabel(tree.node_of(EDGE, s["f"]), EDGE, new[f_low])
        for i in (1 - e_low, 5 - f_low, 4):
            tree.add(EDGE, new[i], ae)
        # the new vertices start unreachable, so repairing the deletions
        # first sees the graph as if the new edges were absent
        dyn = self.dyn
        for _ in tr.new_vertices:
            dyn.add_vertex()
        dyn.edges_removed([(a, b), (c, d)])
        for e in new:
            dyn.edge_added(self.graph.tails[e], self.graph.heads[e])

    # clique trees
    def _apply_ktree(self, tr):
        parent = self._node(CLIQUE, tr.samples["clique"])
        if self.name == "apollonian" and self.tree.children[parent]:
            raise CouplingError("apollonian step chose a clique that already has children")
        for c in tr.samples["new_cliques"]:
            self.tree.add(CLIQUE, c, parent)

    _apply_apollonian = _apply_ktree

    # ---------------------------------------------------------------- audit
    def check(self) -> "DominationReport":
        return check_domination(self.state, self.tree, self.factor, coupler=self)


# ------------------------------------------------------------------ audit

@dataclass
class DominationReport:
    t: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return f"step {self.t}: {self.checked} entities dominated"
        v = self.violations[0]
        return (f"step {self.t}: {len(self.violations)} violation(s) among {self.checked}; "
                f"first {v['key']}: graph depth {v['graph_depth']} > "
                f"{v['factor']} x tree depth {v['tree_depth']}")


def _edge_depths(g: GrowingGraph, vdepth: np.ndarray):
    tails, heads, kinds, alive = g.arrays()
    ids = np.flatnonzero(alive)
    t, h = tails[ids], heads[ids]
    big = np.iinfo(np.int64).max // 2
    dt = np.where(t != NONE, vdepth[np.maximum(t, 0)], big)
    dh = np.where(h != NONE, vdepth[np.maximum(h, 0)], big)
    return ids, 1 + np.minimum(dt, dh)


def _collect(report, prefix, ids, graph_depth, tree_depth, factor, limit=20):
    """Record entities ``prefix + ids[i]`` whose graph depth exceeds the bound."""
    bad = np.flatnonzero(graph_depth > factor * tree_depth)
    report.checked += len(ids)
    for i in bad[:limit]:
        report.violations.append({"key": f"{prefix}{int(ids[i])}",
                                  "graph_depth": int(graph_depth[i]),
                                  "tree_depth": int(tree_depth[i]), "factor": factor})
    if len(bad) > limit:
        report.violations.append({"key": "...", "graph_depth": -1, "tree_depth": -1,
                                  "factor": factor, "more": int(len(bad) - limit)})


def _forest_fire_distances(g: GrowingGraph, seed_vertices: int) -> np.ndarray:
    """Directed hop count from each vertex into ``range(seed_vertices)``."""
    tails, heads, _, alive = g.arrays()
    keep = alive & (tails != NONE) & (heads != NONE)
    src, dst = heads[keep], tails[keep]
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    n = g.num_vertices
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    view = metrics.DistanceView(n, indptr, dst)
    return metrics.bfs_levels(view, np.arange(seed_vertices))


def check_domination(state, tree: CoupledTree, factor: int | None = None,
                     coupler: Coupler | None = None) -> DominationReport:
    """Compare freshly computed graph depths with ``factor`` times tree depths
    (weighted depths for the weighted vertex tree) over every entity."""
    name = state.name
    factor = FACTOR.get(name, 2) if factor is None else factor
    g = state.coupling_graph
    report = DominationReport(state.t)
    kind = tree.kind
    tdepth = tree.wdepths() if kind == WEIGHTED_VERTEX_TREE else tree.depths()
    n = g.num_vertices

    if kind == CLIQUE_TREE:
        k = state.config.k
        vdepth = metrics.bfs_depths(g, list(range(k)))
        cl = np.array(state.cliques, dtype=np.int64)
        cdepth = vdepth[cl].max(axis=1)
        nodes = np.array(tree.clique_node[:len(cl)], dtype=np.int64)
        if len(nodes) != len(cl) or (nodes < 0).any():
            raise CouplingError("clique without a tree node")
        _collect(report, "c", np.arange(len(cl)), cdepth, tdepth[nodes], factor)
        return report

    if name == "forest_fire":
        seed_n = coupler.seed_vertices if coupler is not None else state.g0_vertices
        gdepth = _forest_fire_distances(g, seed_n)
        gdepth = np.where(gdepth < 0, np.iinfo(np.int64).max // 4, gdepth)
    else:
        gdepth = metrics.bfs_depths(g, g.root)
    if coupler is not None and coupler.dyn is not None:
        if not np.array_equal(np.asarray(coupler.dyn.depth, dtype=np.float64), gdepth):
            raise CouplingError("incremental depths drifted from BFS depths")

    if kind in (VERTEX_TREE, WEIGHTED_VERTEX_TREE, MULTI_TYPED_TREE):
        nodes = np.array(tree.vertex_node[:n], dtype=np.int64)
        if len(nodes) != n or (nodes < 0).any():
            raise CouplingError("vertex without a tree node")
        _collect(report, "v", np.arange(n), gdepth, tdepth[nodes], factor)
        if kind != MULTI_TYPED_TREE:
            return report

    ids, edepth = _edge_depths(g, gdepth)
    table = np.array(tree.edge_node, dtype=np.int64)
    if len(table) < g.num_edge_ids:
        table = np.concatenate([table, np.full(g.num_edge_ids - len(table), -1)])
    nodes = table[ids]
    if (nodes < 0).any():
        missing = int(ids[np.flatnonzero(nodes < 0)[0]])
        raise CouplingError(f"edge {missing} has no tree node")
    _collect(report, "e", ids, edepth, tdepth[nodes], factor)
    return report
