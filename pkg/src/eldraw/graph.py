"""Directed-graph substrate: storage, st-graph validation, super-source augmentation.

Vertices are dense integer ids 0..n-1.  Edges are ordered pairs with stable
integer ids 0..m-1; antiparallel pairs (u,v) and (v,u) are allowed, self-loops
and duplicate ordered pairs are not.  Iteration order is deterministic
everywhere so downstream outputs are reproducible byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    """Malformed graph input (self-loop, duplicate edge, bad reference)."""


class GraphFormatError(GraphError):
    """Parse error in the graph text format; carries a line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DirectedGraph:
    """A simple finite digraph with stable vertex/edge identities.

    `names` maps vertex ids back to the external names used by the text
    format; synthetic vertices (augmentations) get generated names.
    `aug_flags[e]` is True for edges added by an augmentation step, so the
    original edge set stays recoverable.
    """

    __slots__ = ("n", "edges", "names", "aug_flags", "_out", "_in", "_edge_set")

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, int]],
        names: Optional[Sequence[str]] = None,
        aug_flags: Optional[Sequence[bool]] = None,
    ) -> None:
        if names is None:
            names = [f"v{i}" for i in range(n)]
        if aug_flags is None:
            aug_flags = [False] * len(edges)
        if len(names) != n:
            raise GraphError(f"{len(names)} names for {n} vertices")
        if len(aug_flags) != len(edges):
            raise GraphError("aug_flags length mismatch")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple((u, v) for u, v in edges)
        self.names: tuple[str, ...] = tuple(names)
        self.aug_flags: tuple[bool, ...] = tuple(bool(b) for b in aug_flags)
        self._edge_set = seen
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            out[u].append(eid)
            inc[v].append(eid)
        self._out = tuple(tuple(es) for es in out)
        self._in = tuple(tuple(es) for es in inc)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_edges(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(self.edges[e][1] for e in self._out[v])

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(self.edges[e][0] for e in self._in[v])

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def degree(self, v: int) -> int:
        return len(self._out[v]) + len(self._in[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_set

    def edge_id(self, u: int, v: int) -> int:
        for e in self._out[u]:
            if self.edges[e][1] == v:
                return e
        raise GraphError(f"no edge ({u},{v})")

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v] + self._in[v]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DirectedGraph(n={self.n}, m={self.m})"

    # ------------------------------------------------------------------
    # Derived facts
    # ------------------------------------------------------------------

    def is_weakly_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for e in self._out[v] + self._in[v]:
                u, w = self.edges[e]
                o = w if u == v else u
                if not seen[o]:
                    seen[o] = True
                    count += 1
                    stack.append(o)
        return count == self.n

    def topological_order(self) -> Optional[list[int]]:
        """Kahn's algorithm with a min-heap for deterministic output.

        Returns None when the graph is cyclic.
        """
        import heapq

        indeg = [self.in_degree(v) for v in range(self.n)]
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order: list[int] = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for e in self._out[v]:
                w = self.edges[e][1]
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != self.n:
            return None
        return order

    def reachability_from(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for e in self._out[x]:
                w = self.edges[e][1]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen


# ----------------------------------------------------------------------
# st-graph validation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StReport:
    acyclic: bool
    source: Optional[int]
    sink: Optional[int]
    ok: bool


def validate_st_graph(g: DirectedGraph) -> StReport:
    """Check for acyclicity plus a unique source and a unique sink.

    The degenerate single-vertex graph counts as an st-graph with s = t.
    """
    if g.n == 0:
        return StReport(True, None, None, False)
    acyclic = g.topological_order() is not None
    sources = [v for v in range(g.n) if g.in_degree(v) == 0]
    sinks = [v for v in range(g.n) if g.out_degree(v) == 0]
    source = sources[0] if len(sources) == 1 else None
    sink = sinks[0] if len(sinks) == 1 else None
    ok = acyclic and source is not None and sink is not None
    return StReport(acyclic, source, sink, ok)


class EdgeStPresent(GraphError):
    pass


def add_super_source(g: DirectedGraph) -> DirectedGraph:
    """Augment an st-graph without the (s,t) edge by a new source s'.

    Adds s' with edges (s', s) and (s', t); the result is an st-graph with
    source s' that admits a bitonic (monotone) st-ordering iff g does.
    """
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("add_super_source requires an st-graph")
    s, t = rep.source, rep.sink
    assert s is not None and t is not None
    if g.has_edge(s, t):
        raise EdgeStPresent("edge (s,t) already present; augmentation unnecessary")
    sp = g.n
    edges = list(g.edges) + [(sp, s), (sp, t)]
    names = list(g.names) + ["__s'"]
    flags = list(g.aug_flags) + [True, True]
    return DirectedGraph(g.n + 1, edges, names, flags)


# ----------------------------------------------------------------------
# Graph text format
#
#   digraph <name>
#   u -> v
#   order <u>: v1 v2 ...      (optional; fixed left-to-right successor order)
# ----------------------------------------------------------------------


@dataclass
class GraphDocument:
    """A parsed graph file: the digraph plus optional fixed successor orders."""

    name: str
    graph: DirectedGraph
    successor_orders: dict[int, list[int]] = field(default_factory=dict)


def parse_graph_text(text: str) -> GraphDocument:
    lines = text.splitlines()
    name = None
    vertex_ids: dict[str, int] = {}
    names: list[str] = []
    edges: list[tuple[int, int]] = []
    edge_lines: dict[tuple[int, int], int] = {}
    order_lines: list[tuple[int, str, str]] = []

    def vid(token: str) -> int:
        if token not in vertex_ids:
            vertex_ids[token] = len(names)
            names.append(token)
        return vertex_ids[token]

    for idx, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "digraph":
                raise GraphFormatError(idx, "expected header 'digraph <name>'")
            name = parts[1]
            continue
        if line.startswith("order "):
            body = line[len("order "):]
            if ":" not in body:
                raise GraphFormatError(idx, "expected 'order <u>: v1 v2 ...'")
            head, rest = body.split(":", 1)
            order_lines.append((idx, head.strip(), rest.strip()))
            continue
        if "->" in line:
            parts = [p.strip() for p in line.split("->")]
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise GraphFormatError(idx, "expected 'u -> v'")
            u, v = vid(parts[0]), vid(parts[1])
            if u == v:
                raise GraphFormatError(idx, f"self-loop at '{parts[0]}'")
            if (u, v) in edge_lines:
                raise GraphFormatError(
                    idx, f"duplicate edge '{parts[0]} -> {parts[1]}' (first at line {edge_lines[(u, v)]})"
                )
            edge_lines[(u, v)] = idx
            edges.append((u, v))
            continue
        raise GraphFormatError(idx, f"unrecognized line: {line!r}")

    if name is None:
        raise GraphFormatError(1, "missing 'digraph <name>' header")
    g = DirectedGraph(len(names), edges, names)
    orders: dict[int, list[int]] = {}
    for idx, head, rest in order_lines:
        if head not in vertex_ids:
            raise GraphFormatError(idx, f"unknown vertex '{head}' in order line")
        u = vertex_ids[head]
        succs: list[int] = []
        for tok in rest.split():
            if tok not in vertex_ids:
                raise GraphFormatError(idx, f"unknown vertex '{tok}' in order line")
            succs.append(vertex_ids[tok])
        actual = sorted(g.out_neighbors(u))
        if sorted(succs) != actual:
            raise GraphFormatError(idx, f"order for '{head}' must list its successors exactly once each")
        if u in orders:
            raise GraphFormatError(idx, f"duplicate order line for '{head}'")
        orders[u] = succs
    return GraphDocument(name, g, orders)


def format_graph_text(doc: GraphDocument) -> str:
    out = [f"digraph {doc.name}"]
    for u, v in doc.graph.edges:
        out.append(f"{doc.graph.names[u]} -> {doc.graph.names[v]}")
    for u in sorted(doc.successor_orders):
        succs = " ".join(doc.graph.names[w] for w in doc.successor_orders[u])
        out.append(f"order {doc.graph.names[u]}: {succs}")
    return "\n".join(out) + "\n"


def induced_subgraph(g: DirectedGraph, vertices: Iterable[int]) -> tuple[DirectedGraph, dict[int, int]]:
    """Subgraph induced by `vertices`; returns (graph, old->new id map)."""
    vs = sorted(set(vertices))
    remap = {v: i for i, v in enumerate(vs)}
    edges = [(remap[u], remap[v]) for (u, v) in g.edges if u in remap and v in remap]
    names = [g.names[v] for v in vs]
    return DirectedGraph(len(vs), edges, names), remap
