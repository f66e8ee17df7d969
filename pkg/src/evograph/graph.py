"""Growing multigraph storage.

A :class:`GrowingGraph` holds vertices and edges with dense, stable integer
ids assigned in birth order. Three modes are supported: undirected,
directed and generalized directed (where edges may lack a head or a tail).
Parallel edges and loops are allowed. Nothing is ever deleted; the one
exception is :meth:`GrowingGraph.replace_edge`, which retires an edge id
(it stays queryable) and inserts a fresh one. Only the pegging process
uses it.
"""

from __future__ import annotations

import io
from array import array
from enum import Enum, IntEnum

import numpy as np

NONE = -1  # absent endpoint


class Mode(str, Enum):
    UNDIRECTED = "U"
    DIRECTED = "D"
    GENERALIZED = "G"


class EdgeKind(IntEnum):
    PROPER = 0
    HEADLESS = 1
    TAILLESS = 2
    LOOP = 3


KIND_NAMES = {
    EdgeKind.PROPER: "proper",
    EdgeKind.HEADLESS: "headless",
    EdgeKind.TAILLESS: "tailless",
    EdgeKind.LOOP: "loop",
}
KIND_BY_NAME = {v: k for k, v in KIND_NAMES.items()}


class GraphError(ValueError):
    """Raised for structurally invalid graph operations."""


class GrowingGraph:
    """Mutable multigraph with birth-ordered vertex and edge ids.

    Undirected edges store ``(lower id, higher id)`` as ``(tail, head)`` so
    iteration order is reproducible. In directed modes a loop is a proper
    edge with equal tail and head; the ``LOOP`` kind is reserved for
    undirected graphs.
    """

    def __init__(self, mode: Mode | str = Mode.UNDIRECTED, root: int = 0):
        self.mode = Mode(mode)
        self.root = root
        self.vertex_birth = array("q")
        self.tails = array("q")
        self.heads = array("q")
        self.kinds = array("b")
        self.edge_birth = array("q")
        self.alive = bytearray()
        # degree tables, dense by vertex id
        self.deg: list[int] = []
        self.outdeg: list[int] = []
        self.indeg: list[int] = []
        # incidence: undirected uses adj, directed modes use out/in lists
        self.adj: list[list[int]] = []
        self.out_edges: list[list[int]] = []
        self.in_edges: list[list[int]] = []
        # sampling pools of alive edge ids
        self.pool: list[int] = []
        self._pool_pos: dict[int, int] = {}
        self.headed: list[int] = []
        self.tailed: list[int] = []
        self.num_proper_edges = 0
        self.num_headless_edges = 0
        self.num_tailless_edges = 0
        self.num_retired = 0

    # ------------------------------------------------------------------ counts
    @property
    def num_vertices(self) -> int:
        return len(self.vertex_birth)

    @property
    def num_edges(self) -> int:
        """Number of alive edges."""
        return len(self.tails) - self.num_retired

    @property
    def num_edge_ids(self) -> int:
        return len(self.tails)

    @property
    def num_headed_edges(self) -> int:
        return self.num_proper_edges + self.num_tailless_edges

    @property
    def num_tailed_edges(self) -> int:
        return self.num_proper_edges + self.num_headless_edges

    @property
    def directed(self) -> bool:
        return self.mode is not Mode.UNDIRECTED

    def __repr__(self):
        return (f"GrowingGraph(mode={self.mode.value}, n={self.num_vertices}, "
                f"m={self.num_edges}, root={self.root})")

    # --------------------------------------------------------------- mutation
    def add_vertex(self, birth: int = 0) -> int:
        v = len(self.vertex_birth)
        self.vertex_birth.append(birth)
        if self.mode is Mode.UNDIRECTED:
            self.deg.append(0)
            self.adj.append([])
        else:
            self.outdeg.append(0)
            self.indeg.append(0)
            self.out_edges.append([])
            self.in_edges.append([])
        return v

    def add_edge(self, kind: EdgeKind | int, tail: int | None, head: int | None,
                 birth: int = 0) -> int:
        kind = EdgeKind(kind)
        tail = NONE if tail is None else tail
        head = NONE if head is None else head
        self._validate(kind, tail, head)
        e = len(self.tails)
        if self.mode is Mode.UNDIRECTED:
            if kind is EdgeKind.PROPER and tail > head:
                tail, head = head, tail
            if kind is EdgeKind.LOOP or tail == head:
                kind = EdgeKind.LOOP
                self.deg[tail] += 2
                self.adj[tail].append(e)
            else:
                self.deg[tail] += 1
                self.deg[head] += 1
                self.adj[tail].append(e)
                self.adj[head].append(e)
            self.num_proper_edges += 1
        else:
            if tail != NONE:
                self.outdeg[tail] += 1
                self.out_edges[tail].append(e)
                self.tailed.append(e)
            if head != NONE:
                self.indeg[head] += 1
                self.in_edges[head].append(e)
                self.headed.append(e)
            if kind is EdgeKind.PROPER:
                self.num_proper_edges += 1
            elif kind is EdgeKind.HEADLESS:
                self.num_headless_edges += 1
            else:
                self.num_tailless_edges += 1
        self.tails.append(tail)
        self.heads.append(head)
        self.kinds.append(kind)
        self.edge_birth.append(birth)
        self.alive.append(1)
        self._pool_pos[e] = len(self.pool)
        self.pool.append(e)
        return e

    def _validate(self, kind, tail, head):
        n = len(self.vertex_birth)
        for x in (tail, head):
            if x != NONE and not 0 <= x < n:
                raise GraphError(f"endpoint {x} does not exist (n={n})")
        if self.mode is Mode.UNDIRECTED:
            if kind in (EdgeKind.HEADLESS, EdgeKind.TAILLESS):
                raise GraphError(f"{KIND_NAMES[kind]} edges need a generalized directed graph")
            if tail == NONE or head == NONE:
                raise GraphError("undirected edges need two endpoints")
            if kind is EdgeKind.LOOP and tail != head:
                raise GraphError("a loop needs equal endpoints")
            return
        if kind is EdgeKind.LOOP:
            raise GraphError("loop kind is only used in undirected graphs")
        if kind is not EdgeKind.PROPER and self.mode is not Mode.GENERALIZED:
            raise GraphError(f"{KIND_NAMES[kind]} edges need a generalized directed graph")
        need_tail = kind in (EdgeKind.PROPER, EdgeKind.HEADLESS)
        need_head = kind in (EdgeKind.PROPER, EdgeKind.TAILLESS)
        if need_tail != (tail != NONE) or need_head != (head != NONE):
            raise GraphError(f"endpoint presence does not match kind {KIND_NAMES[kind]}")

    def retire_edge(self, e: int) -> None:
        if not self.alive[e]:
            raise GraphError(f"edge {e} already retired")
        if self.mode is not Mode.UNDIRECTED:
            raise GraphError("edge retirement is only supported for undirected graphs")
        self.alive[e] = 0
        self.num_retired += 1
        self.num_proper_edges -= 1
        a, b = self.tails[e], self.heads[e]
        if a == b:
            self.deg[a] -= 2
            self.adj[a].remove(e)
        else:
            self.deg[a] -= 1
            self.deg[b] -= 1
            self.adj[a].remove(e)
            self.adj[b].remove(e)
        # swap-remove from the sampling pool
        pos = self._pool_pos.pop(e)
        last = self.pool.pop()
        if last != e:
            self.pool[pos] = last
            self._pool_pos[last] = pos

    def replace_edge(self, old: int, kind: EdgeKind | int, tail: int | None,
                     head: int | None, birth: int = 0) -> int:
        """Retire ``old`` and insert a new edge; returns the new id."""
        self.retire_edge(old)
        return self.add_edge(kind, tail, head, birth)

    # ----------------------------------------------------------------- queries
    def degree(self, v: int) -> int:
        if self.mode is Mode.UNDIRECTED:
            return self.deg[v]
        return self.outdeg[v] + self.indeg[v]

    def out_degree(self, v: int) -> int:
        if self.mode is Mode.UNDIRECTED:
            return self.deg[v]
        return self.outdeg[v]

    def in_degree(self, v: int) -> int:
        if self.mode is Mode.UNDIRECTED:
            return self.deg[v]
        return self.indeg[v]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.tails[e], self.heads[e]

    def kind(self, e: int) -> EdgeKind:
        return EdgeKind(self.kinds[e])

    def is_retired(self, e: int) -> bool:
        return not self.alive[e]

    def edges(self):
        """Yield ``(id, kind, tail, head)`` for alive edges in id order."""
        tails, heads, kinds, alive = self.tails, self.heads, self.kinds, self.alive
        for e in range(len(tails)):
            if alive[e]:
                yield e, EdgeKind(kinds[e]), tails[e], heads[e]

    def neighbours(self, v: int) -> list[int]:
        """Distinct neighbours of ``v`` ignoring direction, dummy edges excluded."""
        out = set()
        if self.mode is Mode.UNDIRECTED:
            for e in self.adj[v]:
                a, b = self.tails[e], self.heads[e]
                out.add(b if a == v else a)
        else:
            for e in self.out_edges[v]:
                if self.heads[e] != NONE:
                    out.add(self.heads[e])
            for e in self.in_edges[v]:
                if self.tails[e] != NONE:
                    out.add(self.tails[e])
        out.discard(v)
        return sorted(out)

    def arrays(self):
        """Copies of ``(tails, heads, kinds, alive)`` as numpy arrays."""
        tails = np.array(self.tails, dtype=np.int64)
        heads = np.array(self.heads, dtype=np.int64)
        kinds = np.array(self.kinds, dtype=np.int8)
        alive = np.frombuffer(bytes(self.alive), dtype=np.uint8).astype(bool)
        return tails, heads, kinds, alive

    def copy(self) -> "GrowingGraph":
        g = GrowingGraph(self.mode, self.root)
        for b in self.vertex_birth:
            g.add_vertex(b)
        for e in range(len(self.tails)):
            t, h = self.tails[e], self.heads[e]
            g.add_edge(self.kinds[e], None if t == NONE else t, None if h == NONE else h,
                       self.edge_birth[e])
        for e in range(len(self.tails)):
            if not self.alive[e]:
                g.retire_edge(e)
        return g

    def check_degrees(self) -> None:
        """Recount degrees from the edge records; raise on any mismatch."""
        n = self.num_vertices
        if self.mode is Mode.UNDIRECTED:
            deg = [0] * n
            for _, kind, t, h in self.edges():
                deg[t] += 1
                deg[h] += 1
            if deg != self.deg or sum(deg) != 2 * self.num_edges:
                raise GraphError("degree table out of sync with edge records")
            return
        outdeg, indeg = [0] * n, [0] * n
        for _, kind, t, h in self.edges():
            if t != NONE:
                outdeg[t] += 1
            if h != NONE:
                indeg[h] += 1
        if outdeg != self.outdeg or indeg != self.indeg:
            raise GraphError("degree table out of sync with edge records")
        if sum(outdeg) != self.num_tailed_edges or sum(indeg) != self.num_headed_edges:
            raise GraphError("tailed/headed counts out of sync")


# ---------------------------------------------------------------- builders

def from_edges(edges, n: int | None = None, mode: Mode | str = Mode.UNDIRECTED,
               root: int = 0) -> GrowingGraph:
    """Build a graph from ``(tail, head)`` or ``(tail, head, kind)`` tuples.

    ``None`` marks an absent endpoint; the kind is inferred when omitted.
    """
    edges = [tuple(e) for e in edges]
    if n is None:
        ends = [x for e in edges for x in e[:2] if x is not None]
        n = max(ends) + 1 if ends else 1
    g = GrowingGraph(mode, root)
    for _ in range(n):
        g.add_vertex(0)
    for e in edges:
        t, h = e[0], e[1]
        if len(e) > 2:
            kind = KIND_BY_NAME[e[2]] if isinstance(e[2], str) else EdgeKind(e[2])
        elif t is None:
            kind = EdgeKind.TAILLESS
        elif h is None:
            kind = EdgeKind.HEADLESS
        elif t == h and g.mode is Mode.UNDIRECTED:
            kind = EdgeKind.LOOP
        else:
            kind = EdgeKind.PROPER
        g.add_edge(kind, t, h, 0)
    return g


def complete_graph(k: int) -> GrowingGraph:
    return from_edges([(i, j) for i in range(k) for j in range(i + 1, k)], n=k)


# ------------------------------------------------------------------ export

def export_edge_list(g: GrowingGraph, fmt: str = "tsv") -> bytes:
    """Serialize alive edges in id order as TSV or DOT."""
    if fmt == "tsv":
        return _export_tsv(g)
    if fmt == "dot":
        return _export_dot(g)
    raise ValueError(f"unknown format {fmt!r}")


def _export_tsv(g: GrowingGraph) -> bytes:
    buf = io.StringIO()
    buf.write(f"# evograph v1 mode={g.mode.value} n={g.num_vertices} "
              f"m={g.num_edges} root={g.root}\n")
    for e, kind, t, h in g.edges():
        ts = "-" if t == NONE else str(t)
        hs = "-" if h == NONE else str(h)
        buf.write(f"{ts}\t{hs}\t{KIND_NAMES[kind]}\t{g.edge_birth[e]}\n")
    return buf.getvalue().encode()


def _export_dot(g: GrowingGraph) -> bytes:
    if g.num_edges > 10 ** 4:
        raise ValueError("DOT export is limited to 10^4 edges")
    arrow = "--" if g.mode is Mode.UNDIRECTED else "->"
    lines = [("graph" if g.mode is Mode.UNDIRECTED else "digraph") + " G {"]
    for v in range(g.num_vertices):
        lines.append(f"  {v};")
    for e, kind, t, h in g.edges():
        if t == NONE:
            lines.append(f"  x{e} [shape=point]; x{e} {arrow} {h} [style=dashed];")
        elif h == NONE:
            lines.append(f"  x{e} [shape=point]; {t} {arrow} x{e} [style=dashed];")
        else:
            lines.append(f"  {t} {arrow} {h};")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def read_edge_list(data: bytes | str) -> GrowingGraph:
    """Parse the TSV format written by :func:`export_edge_list`."""
    if isinstance(data, bytes):
        data = data.decode()
    lines = data.splitlines()
    if not lines or not lines[0].startswith("# evograph v1"):
        raise ValueError("missing '# evograph v1' header")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[3:])
    g = GrowingGraph(Mode(fields["mode"]), int(fields["root"]))
    for _ in range(int(fields["n"])):
        g.add_vertex(0)
    for line in lines[1:]:
        if not line.strip() or line.startswith("#"):
            continue
        t, h, kind, birth = line.split("\t")
        g.add_edge(KIND_BY_NAME[kind], None if t == "-" else int(t),
                   None if h == "-" else int(h), int(birth))
    if g.num_edges != int(fields["m"]):
        raise ValueError("edge count does not match header")
    return g
