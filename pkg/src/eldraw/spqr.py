"""SPQR-tree decomposition of biconnected st-graphs, rooted at an (s,t) edge.

The construction works on "components": virtual directed edges, each standing
for an already-decomposed st-subgraph with the component's endpoints as its
source and sink (every pertinent graph is an st-graph between its poles, so
components carry an orientation).  Series contractions at degree-2 vertices
and parallel merges run to a fixpoint, which fully decomposes series-parallel
inputs in near-linear time; a remaining kernel is split at separation pairs
found by brute force (quadratic-grade, only rigid structures pay for it) and
triconnected kernels become R nodes.  Adjacent S and P nodes are merged during
construction, so the tree is canonical.

Rooting: every non-root node has an implicit parent virtual edge between its
poles; the root instead carries the reference edge's Q node (`ref_child`),
so the pertinent graph of the root is all of G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import networkx as nx

from .embedding import PlaneEmbedding
from .graph import DirectedGraph, GraphError, validate_st_graph
from .planarity import planar_embed


class NotBiconnected(GraphError):
    pass


class ReferenceEdgeMissing(GraphError):
    pass


@dataclass
class SpqrNode:
    id: int
    kind: str  # 'S' | 'P' | 'Q' | 'R'
    poles: tuple[int, int]  # (pertinent source, pertinent sink), graph vertex ids
    parent: int = -1
    children: list[int] = field(default_factory=list)
    # Q only: the real graph edge
    edge_id: int = -1
    # S only: chain of skeleton vertices x0..xk with children[i] between x_i, x_{i+1}
    chain: list[int] = field(default_factory=list)
    # R only: skeleton edges (tail, head, child node id)
    skel: list[tuple[int, int, int]] = field(default_factory=list)


class SpqrTree:
    def __init__(self, graph: DirectedGraph, nodes: list[SpqrNode], root: int, ref_child: int) -> None:
        self.graph = graph
        self.nodes = nodes
        self.root = root
        self.ref_child = ref_child  # Q node of the reference edge, or -1 when the root is that edge

    # ------------------------------------------------------------------

    def node_children(self, nid: int) -> list[int]:
        """Tree children including the root's reference Q child."""
        node = self.nodes[nid]
        cs = list(node.children)
        if nid == self.root and self.ref_child >= 0 and self.ref_child not in node.children:
            cs.append(self.ref_child)
        return cs

    def pertinent_edge_ids(self, nid: int) -> list[int]:
        out: list[int] = []
        stack = [nid]
        while stack:
            x = stack.pop()
            node = self.nodes[x]
            if node.kind == "Q":
                out.append(node.edge_id)
            stack.extend(self.node_children(x))
        return sorted(out)

    def pertinent_graph(self, nid: int) -> DirectedGraph:
        eids = self.pertinent_edge_ids(nid)
        g = self.graph
        verts = sorted({v for e in eids for v in g.edges[e]})
        remap = {v: i for i, v in enumerate(verts)}
        edges = [(remap[g.edges[e][0]], remap[g.edges[e][1]]) for e in eids]
        names = [g.names[v] for v in verts]
        return DirectedGraph(len(verts), edges, names)

    def skeleton_edge_list(self, nid: int) -> tuple[list[tuple[int, int, int]], Optional[tuple[int, int]]]:
        """Skeleton as (tail, head, child-node-id) triples over graph vertex
        ids, plus the implicit parent edge's (tail, head) when present.

        Q children appear like any other child; the root's reference edge is
        one of them.  For a Q node the single real edge is reported with
        child id -2.
        """
        node = self.nodes[nid]
        raw: list[tuple[int, int, int]] = []
        if node.kind == "Q":
            u, v = self.graph.edges[node.edge_id]
            raw.append((u, v, -2))
        elif node.kind == "P":
            a, b = node.poles
            for c in node.children:
                raw.append((a, b, c))
        elif node.kind == "S":
            for i, c in enumerate(node.children):
                raw.append((node.chain[i], node.chain[i + 1], c))
            if nid == self.root and self.ref_child >= 0:
                raw.append((node.poles[0], node.poles[1], self.ref_child))
        else:
            raw.extend(node.skel)
        parent = None if nid == self.root else node.poles
        return raw, parent

    def sum_skeleton_sizes(self) -> int:
        total = 0
        for nid in range(len(self.nodes)):
            raw, parent = self.skeleton_edge_list(nid)
            total += len(raw) + (1 if parent is not None else 0)
        return total

    def format_debug(self) -> str:
        g = self.graph
        lines: list[str] = []

        def walk(nid: int, depth: int) -> None:
            node = self.nodes[nid]
            ind = "  " * depth
            s, t = node.poles
            extra = ""
            if node.kind == "Q":
                u, v = g.edges[node.edge_id]
                extra = f" edge {g.names[u]}->{g.names[v]}"
            elif node.kind == "S":
                extra = " chain " + "-".join(g.names[x] for x in node.chain)
            elif node.kind == "R":
                extra = " skel " + " ".join(
                    f"{g.names[a]}->{g.names[b]}@{c}" for (a, b, c) in node.skel
                )
            lines.append(f"{ind}{node.kind}{node.id} poles {g.names[s]}->{g.names[t]}{extra}")
            for c in sorted(self.node_children(nid)):
                walk(c, depth + 1)

        walk(self.root, 0)
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


class _Comp:
    __slots__ = ("s", "t", "node")

    def __init__(self, s: int, t: int, node: int) -> None:
        self.s = s
        self.t = t
        self.node = node


class _Builder:
    def __init__(self, g: DirectedGraph) -> None:
        self.g = g
        self.nodes: list[SpqrNode] = []

    def new_node(self, kind: str, poles: tuple[int, int]) -> SpqrNode:
        node = SpqrNode(len(self.nodes), kind, poles)
        self.nodes.append(node)
        return node

    # ------------------------------------------------------------------

    def build(self, comps: list[_Comp], a: int, b: int) -> int:
        """Decompose `comps` (which together with an implicit parent edge
        (a,b) form a biconnected graph) into a single tree node id."""
        inc: dict[int, set[_Comp]] = {}
        pair_groups: dict[frozenset, set[_Comp]] = {}

        def link(c: _Comp) -> None:
            inc.setdefault(c.s, set()).add(c)
            inc.setdefault(c.t, set()).add(c)
            pair_groups.setdefault(frozenset((c.s, c.t)), set()).add(c)

        def unlink(c: _Comp) -> None:
            inc[c.s].discard(c)
            inc[c.t].discard(c)
            pair_groups[frozenset((c.s, c.t))].discard(c)

        for c in comps:
            link(c)

        parallel_q: list[frozenset] = sorted(pair_groups, key=lambda k: tuple(sorted(k)))
        series_q: list[int] = sorted(v for v in inc if v not in (a, b))

        while True:
            progressed = False

            while parallel_q:
                key = parallel_q.pop()
                group = pair_groups.get(key)
                if not group or len(group) < 2:
                    continue
                members = sorted(group, key=lambda c: c.node)
                s, t = members[0].s, members[0].t
                if any((c.s, c.t) != (s, t) for c in members):
                    raise GraphError("parallel components with opposing orientation")
                p = self.new_node("P", (s, t))
                for c in members:
                    unlink(c)
                    child = self.nodes[c.node]
                    if child.kind == "P":
                        p.children.extend(child.children)
                    else:
                        p.children.append(child.id)
                link(_Comp(s, t, p.id))
                for v in (s, t):
                    if v not in (a, b):
                        series_q.append(v)
                progressed = True

            while series_q:
                v = series_q.pop()
                if v in (a, b) or len(inc.get(v, ())) != 2:
                    continue
                c1, c2 = sorted(inc[v], key=lambda c: c.node)
                cin = c1 if c1.t == v else c2
                cout = c2 if cin is c1 else c1
                if cin.t != v or cout.s != v:
                    raise GraphError(f"series contraction at vertex {v}: orientations do not chain")
                unlink(cin)
                unlink(cout)
                s_node = self.new_node("S", (cin.s, cout.t))
                chain: list[int] = [cin.s]
                for part in (cin, cout):
                    child = self.nodes[part.node]
                    if child.kind == "S":
                        chain.extend(child.chain[1:])
                        s_node.children.extend(child.children)
                    else:
                        chain.append(part.t)
                        s_node.children.append(child.id)
                s_node.chain = chain
                newc = _Comp(cin.s, cout.t, s_node.id)
                link(newc)
                pk = frozenset((newc.s, newc.t))
                if len(pair_groups[pk]) >= 2:
                    parallel_q.append(pk)
                for w in (cin.s, cout.t):
                    if w not in (a, b):
                        series_q.append(w)
                progressed = True
                if parallel_q:
                    break

            if progressed:
                continue

            live = sorted((c for g_ in pair_groups.values() for c in g_), key=lambda c: c.node)
            verts = sorted({v for c in live for v in (c.s, c.t)})
            if verts == sorted({a, b}) and len(live) == 1:
                return live[0].node
            if not live:
                raise GraphError("decomposition emptied unexpectedly")

            # A component directly between the poles is parallel to the
            # implicit parent edge: the canonical tree groups them in a P.
            direct = [c for c in live if frozenset((c.s, c.t)) == frozenset((a, b))]
            if direct and len(live) > 1:
                rest = [c for c in live if c not in direct]
                sub = _Comp(a, b, self.build(rest, a, b))
                return self.build(direct + [sub], a, b)

            pair = self._find_separation_pair(live, a, b)
            if pair is None:
                r = self.new_node("R", (a, b))
                for c in live:
                    r.skel.append((c.s, c.t, c.node))
                    r.children.append(c.node)
                return r.id

            x, y = pair
            stay, parts = self._split_parts(live, x, y, a, b)
            new_comps = list(stay)
            for part in parts:
                s, t = self._orient_part(part, x, y)
                sub = self.build(part, s, t)
                new_comps.append(_Comp(s, t, sub))
            return self.build(new_comps, a, b)

    # ------------------------------------------------------------------

    def _find_separation_pair(self, live: list[_Comp], a: int, b: int) -> Optional[tuple[int, int]]:
        verts = sorted({v for c in live for v in (c.s, c.t)})
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for c in live:
            adj[c.s].add(c.t)
            adj[c.t].add(c.s)
        adj[a].add(b)
        adj[b].add(a)  # implicit parent edge
        for i, x in enumerate(verts):
            for y in verts[i + 1:]:
                rest = [v for v in verts if v not in (x, y)]
                if not rest:
                    continue
                seen = {rest[0]}
                stack = [rest[0]]
                while stack:
                    u = stack.pop()
                    for w in adj[u]:
                        if w not in (x, y) and w not in seen:
                            seen.add(w)
                            stack.append(w)
                if len(seen) < len(rest):
                    return (x, y)
        return None

    def _split_parts(
        self, live: list[_Comp], x: int, y: int, a: int, b: int
    ) -> tuple[list[_Comp], list[list[_Comp]]]:
        """Partition at separation pair {x,y}: components staying at this
        level (the poles' part, joined through the implicit parent edge, and
        any direct (x,y) component) versus parts to be recursed."""
        verts = sorted({v for c in live for v in (c.s, c.t) if v not in (x, y)})
        parent: dict[int, int] = {v: v for v in verts}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        def union(u: int, w: int) -> None:
            ru, rw = find(u), find(w)
            if ru != rw:
                parent[ru] = rw

        for c in live:
            if c.s not in (x, y) and c.t not in (x, y):
                union(c.s, c.t)
        if a not in (x, y) and b not in (x, y):
            union(a, b)  # the outside joins the poles

        stay_roots = {find(p) for p in (a, b) if p not in (x, y)}
        stay: list[_Comp] = []
        groups: dict[int, list[_Comp]] = {}
        for c in live:
            interior = [v for v in (c.s, c.t) if v not in (x, y)]
            if not interior:
                stay.append(c)  # direct (x,y) component
                continue
            r = find(interior[0])
            if r in stay_roots:
                stay.append(c)
            else:
                groups.setdefault(r, []).append(c)
        parts = [groups[k] for k in sorted(groups, key=lambda r: min(c.node for c in groups[r]))]
        if not parts:
            raise GraphError("separation pair produced no splittable part")
        return stay, parts

    def _orient_part(self, part: list[_Comp], x: int, y: int) -> tuple[int, int]:
        adj: dict[int, list[int]] = {}
        for c in part:
            adj.setdefault(c.s, []).append(c.t)
        seen = {x}
        stack = [x]
        while stack:
            u = stack.pop()
            if u == y:
                return (x, y)
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return (y, x)


def build_spqr(g: DirectedGraph, ref: Optional[tuple[int, int]] = None) -> SpqrTree:
    """Canonical SPQR tree of a biconnected st-graph rooted at the (s,t) edge."""
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("build_spqr requires an st-graph")
    s, t = rep.source, rep.sink
    assert s is not None and t is not None
    if ref is None:
        ref = (s, t)
    if ref != (s, t):
        raise ReferenceEdgeMissing("reference edge must be (source, sink)")
    if not g.has_edge(*ref):
        raise ReferenceEdgeMissing(f"reference edge ({g.names[s]},{g.names[t]}) not in graph")
    ref_eid = g.edge_id(s, t)

    builder = _Builder(g)
    if g.m == 1:
        q = builder.new_node("Q", (s, t))
        q.edge_id = ref_eid
        return SpqrTree(g, builder.nodes, q.id, -1)

    und = nx.Graph((u, v) for (u, v) in g.edges)
    if g.n >= 3 and (not nx.is_connected(und) or list(nx.articulation_points(und))):
        raise NotBiconnected("build_spqr requires a biconnected graph")

    comps: list[_Comp] = []
    for eid, (u, v) in enumerate(g.edges):
        if eid == ref_eid:
            continue
        q = builder.new_node("Q", (u, v))
        q.edge_id = eid
        comps.append(_Comp(u, v, q.id))
    root = builder.build(comps, s, t)

    ref_q = builder.new_node("Q", (s, t))
    ref_q.edge_id = ref_eid
    root_node = builder.nodes[root]
    if root_node.kind == "P":
        root_node.children.append(ref_q.id)
    elif root_node.kind == "R":
        root_node.children.append(ref_q.id)
        root_node.skel.append((s, t, ref_q.id))
    # S root: the reference child closes the skeleton cycle; kept in ref_child

    tree = SpqrTree(g, builder.nodes, root, ref_q.id)
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        for c in tree.node_children(nid):
            tree.nodes[c].parent = nid
            stack.append(c)
    tree.nodes[tree.root].parent = -1
    return tree


# ----------------------------------------------------------------------
# Skeleton embeddings (spec iterator; the oracle uses its own expansion)
# ----------------------------------------------------------------------


def skeleton_embeddings(tree: SpqrTree, nid: int) -> Iterator[PlaneEmbedding]:
    """S and Q skeletons: the single embedding; R: the mirror pair; P: one
    embedding per choice of rightmost child (reflections collapsed).

    Parallel skeleton edges are subdivided so the result is a simple
    digraph; subdivision vertices are named m<i>.
    """
    node = tree.nodes[nid]
    raw, parent = tree.skeleton_edge_list(nid)
    edges = [(a, b) for (a, b, _) in raw]
    if parent is not None:
        edges.append(parent)
    if node.kind in ("Q", "S"):
        yield planar_embed(_subdivided(tree, edges))
        return
    if node.kind == "R":
        emb = planar_embed(_subdivided(tree, edges))
        yield emb
        yield emb.mirror()
        return
    # P node: all edges parallel (a,b); choose which one is rightmost
    k = len(edges)
    a, b = node.poles
    for last in range(k):
        order = [i for i in range(k) if i != last] + [last]
        n = 2 + k
        sub_edges = []
        for i in range(k):
            sub_edges.extend([(0, 2 + i), (2 + i, 1)])
        names = [tree.graph.names[a], tree.graph.names[b]] + [f"m{i}" for i in range(k)]
        gsub = DirectedGraph(n, sub_edges, names)
        rot: list[list[int]] = [[] for _ in range(n)]
        rot[0] = [2 * i for i in order]
        rot[1] = [2 * i + 1 for i in reversed(order)]
        for i in range(k):
            rot[2 + i] = [2 * i, 2 * i + 1]
        yield PlaneEmbedding(gsub, rot)


def _subdivided(tree: SpqrTree, edges: list[tuple[int, int]]) -> DirectedGraph:
    verts = sorted({v for e in edges for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    names = [tree.graph.names[v] for v in verts]
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    extra = 0
    for (u, v) in edges:
        uu, vv = remap[u], remap[v]
        if (uu, vv) in seen:
            mid = len(verts) + extra
            names.append(f"m{extra}")
            extra += 1
            out.extend([(uu, mid), (mid, vv)])
        else:
            seen.add((uu, vv))
            out.append((uu, vv))
    return DirectedGraph(len(verts) + extra, out, names)
