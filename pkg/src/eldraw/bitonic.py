"""Bitonic st-ordering decision procedures.

Two entry points:

* :func:`test_bitonic_fixed` decides, for a plane st-graph, whether a bitonic
  st-ordering exists for that embedding: between consecutive successors of
  every vertex the augmentation direction is constrained by reachability, so
  each vertex has a window of feasible apex positions; augmentation edges are
  then added and any topological order of the result is bitonic.

* :func:`test_bitonic_variable` / :func:`test_monotone_variable` decide the
  variable-embedding question by a bottom-up pass over the SPQR tree rooted
  at the (s,t) edge.  For each node the algorithm records whether the source
  pole's successor structure composes to a monotone path (Type M, preferred)
  or a strictly bitonic one (Type B), plus its first/last successors and the
  as-built orientation; chosen child orders and flips are replayed at the end
  to realize an embedding of the augmented graph, and any st-ordering of that
  graph restricted to G yields the pair.

Fan solving (R nodes and the root): a skeleton vertex's outgoing virtual
edges contribute successor "blocks" in left-to-right order; an apex position
splits them into an increasing prefix and a decreasing suffix, with chain
links joining consecutive blocks.  A position is valid when Type B blocks sit
exactly at the apex, no later chain part can reach back to an earlier
pole-edge head (that would close a directed cycle), and head-to-head edges
join path-comparable blocks; a per-node surrogate graph re-checks acyclicity
of all chains globally.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .embedding import (
    BitonicPair,
    MonotonePair,
    PlaneEmbedding,
    StOrdering,
    trace_faces,
)
from .graph import DirectedGraph, GraphError, add_super_source, validate_st_graph
from .oracle import build_skeleton_rotation_cache
from .planarity import NotPlanar, kuratowski_witness
from .spqr import SpqrTree, build_spqr

import networkx as nx


class NotStGraph(GraphError):
    pass


class NotPlaneStGraph(GraphError):
    pass


# ----------------------------------------------------------------------
# Results
# ----------------------------------------------------------------------


@dataclass
class AugmentationResult:
    node: int
    typ: str  # 'M' | 'B'
    firsts: tuple[int, ...]  # (first,) for M; (left_first, right_first) for B
    last: Optional[int]  # M only
    added_edges: list[tuple[int, int]] = field(default_factory=list)
    first_at_left: bool = True  # M: side of the first successor as built
    kind: str = "?"


@dataclass
class Reject:
    node: int
    reason: str  # TwoTypeB | TypeBWithStEdge | NoValidApex | MonotoneNeedsTypeB
    detail: str = ""


@dataclass
class VariableResult:
    pair: object  # BitonicPair | MonotonePair | None
    reject: Optional[Reject]
    trace: list[AugmentationResult]

    def __bool__(self) -> bool:
        return self.pair is not None


@dataclass
class FixedResult:
    pi: Optional[StOrdering]
    witness_vertex: Optional[int] = None
    added_edges: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.pi is not None


# ----------------------------------------------------------------------
# Blocks, links, plans
# ----------------------------------------------------------------------


@dataclass
class _Block:
    child: int
    head: int  # u_i, the child's sink pole
    pole_edge: bool  # (v, u_i) is a real edge inside the child
    typ: str
    first: int  # M: path entry; B: one of the two firsts (as built, left)
    last: int  # M: path top; B: the other first (as built, right)
    first_at_left: bool

    @property
    def singleton(self) -> bool:
        return self.typ == "M" and self.first == self.last


@dataclass
class _Link:
    tail: int
    head: int
    side: str  # 'L': rightward (increasing chain); 'R': leftward chain
    into_child: int = -1  # tree node of the block this link enters


@dataclass
class _FanPlan:
    vertex: int
    blocks: list[_Block]
    apex: int
    flips: list[bool]
    links: list[_Link]


class _NodePlan:
    __slots__ = ("mirror", "ref_last", "child_order", "rel_flip", "fans")

    def __init__(self) -> None:
        self.mirror = 0
        self.ref_last = True
        self.child_order: Optional[list[int]] = None
        self.rel_flip: dict[int, bool] = {}
        self.fans: list[_FanPlan] = []


def _path_before(a: int, i: int, j: int) -> bool:
    """Block i precedes block j along the bitonic path with apex block a."""
    return (i < j <= a) or (i > j >= a)


def _b_ends(b: _Block) -> tuple[int, int]:
    """(left, right) firsts of a Type B block after the orientation
    tie-break: the smaller vertex id attaches on the left."""
    return (b.first, b.last) if b.first <= b.last else (b.last, b.first)


# ----------------------------------------------------------------------
# The bottom-up solver
# ----------------------------------------------------------------------

_SEARCH_BUDGET = 1 << 16


class _Solver:
    def __init__(self, g: DirectedGraph, tree: SpqrTree, monotone: bool) -> None:
        self.g = g
        self.tree = tree
        self.monotone = monotone
        self.results: dict[int, AugmentationResult] = {}
        self.plans: dict[int, _NodePlan] = {}
        self.added: set[tuple[int, int]] = set()
        self.trace: list[AugmentationResult] = []
        self.skel_cache = build_skeleton_rotation_cache(tree)

    # ------------------------------------------------------------------

    def run(self):
        order: list[int] = []
        stack = [self.tree.root]
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(self.tree.node_children(nid))
        for nid in reversed(order):
            out = self.process(nid)
            if isinstance(out, Reject):
                return out
        return self.results[self.tree.root]

    def process(self, nid: int):
        node = self.tree.nodes[nid]
        if node.kind == "Q":
            out = self.process_q(nid)
        elif node.kind == "S":
            out = self.process_s(nid)
        elif node.kind == "P":
            out = self.process_p(nid)
        else:
            out = self.process_r(nid)
        if isinstance(out, AugmentationResult):
            out.kind = node.kind
            if self.monotone and out.typ == "B":
                return Reject(nid, "MonotoneNeedsTypeB", "strictly bitonic pole structure")
            self.results[nid] = out
            self.plans.setdefault(nid, _NodePlan())
            self.added.update(out.added_edges)
            self.trace.append(out)
        return out

    # ------------------------------------------------------------------

    def process_q(self, nid: int) -> AugmentationResult:
        t = self.tree.nodes[nid].poles[1]
        return AugmentationResult(nid, "M", (t,), t)

    def process_s(self, nid: int):
        node = self.tree.nodes[nid]
        if nid == self.tree.root:
            return self._process_root_s(nid)
        if self.monotone:
            for c in node.children:
                if self.results[c].typ == "B":
                    return Reject(nid, "MonotoneNeedsTypeB", f"child {c} is Type B")
        first = self.results[node.children[0]]
        return AugmentationResult(nid, first.typ, first.firsts, first.last, [], first.first_at_left)

    def process_p(self, nid: int):
        node = self.tree.nodes[nid]
        children = list(node.children)
        s_mu, t_mu = node.poles
        typeb = [c for c in children if self.results[c].typ == "B"]
        st_q = [
            c
            for c in children
            if self.tree.nodes[c].kind == "Q"
            and self.g.edges[self.tree.nodes[c].edge_id] == (s_mu, t_mu)
        ]
        if len(typeb) >= 2:
            return Reject(nid, "TwoTypeB", f"children {typeb[0]} and {typeb[1]}")
        if self.monotone and typeb:
            return Reject(nid, "MonotoneNeedsTypeB", f"child {typeb[0]} is Type B")
        if typeb and st_q:
            return Reject(nid, "TypeBWithStEdge", f"Type B child {typeb[0]} with pole edge present")

        special = typeb + st_q
        order = [c for c in children if c not in special]
        order.append(special[-1] if special else order.pop())

        blocks = [self._block_for(s_mu, c) for c in order]
        plan = self._plan_fan(s_mu, blocks, len(blocks) - 1, set())
        np_ = _NodePlan()
        np_.child_order = order
        np_.rel_flip = {c: f for c, f in zip(order, plan.flips)}
        np_.fans = [plan]
        self.plans[nid] = np_

        typ, firsts, last, fal = _fan_endpoints(blocks, len(blocks) - 1)
        return AugmentationResult(
            nid, typ, firsts, last, [(l.tail, l.head) for l in plan.links], fal
        )

    def _process_root_s(self, nid: int):
        node = self.tree.nodes[nid]
        if self.monotone:
            for c in node.children:
                if self.results[c].typ == "B":
                    return Reject(nid, "MonotoneNeedsTypeB", f"child {c} is Type B")
        s_mu, t_mu = node.poles
        idx = {x: i for i, x in enumerate(node.chain)}

        def reach(x: int, y: int) -> bool:
            return idx[x] < idx[y]

        blocks = [
            self._block_for(s_mu, node.children[0]),
            self._block_for(s_mu, self.tree.ref_child),
        ]
        skel_edges = [(node.chain[i], node.chain[i + 1]) for i in range(len(node.chain) - 1)]
        skel_edges.append((s_mu, t_mu))
        return self._solve_node_fans(nid, [(s_mu, blocks)], reach, skel_edges, 0, True)

    def process_r(self, nid: int):
        node = self.tree.nodes[nid]
        raw, parent = self.tree.skeleton_edge_list(nid)
        verts = sorted({v for (a, b, _) in raw for v in (a, b)})
        succ: dict[int, set[int]] = {v: set() for v in verts}
        for (a, b, _) in raw:
            succ[a].add(b)
        closure: dict[int, set[int]] = {}
        for v in reversed(_topo(verts, succ)):
            acc: set[int] = set()
            for w in succ[v]:
                acc.add(w)
                acc |= closure[w]
            closure[v] = acc

        def reach(x: int, y: int) -> bool:
            return y in closure[x]

        skel_edges = [(a, b) for (a, b, _) in raw]
        is_root = nid == self.tree.root
        configs = []
        for mirror in (0, 1):
            configs.extend([(mirror, True), (mirror, False)] if is_root else [(mirror, True)])

        best_reject: Optional[Reject] = None
        for m_only in (True, False):  # Type M arrangements always preferred
            for mirror, ref_last in configs:
                fans = self._r_fans(nid, raw, mirror, ref_last)
                out = self._solve_node_fans(
                    nid, fans, reach, skel_edges, mirror, ref_last, m_only=m_only
                )
                if isinstance(out, AugmentationResult):
                    return out
                if best_reject is None:
                    best_reject = out
        assert best_reject is not None
        return best_reject

    # ------------------------------------------------------------------

    def _block_for(self, v: int, child: int) -> _Block:
        res = self.results[child]
        node = self.tree.nodes[child]
        assert node.poles[0] == v, "fan child must exit the fan vertex"
        head = node.poles[1]
        pole_edge = self.g.has_edge(v, head)
        if res.typ == "B":
            fl, fr = res.firsts
            return _Block(child, head, pole_edge, "B", fl, fr, True)
        return _Block(child, head, pole_edge, "M", res.firsts[0], res.last, res.first_at_left)

    def _r_fans(self, nid: int, raw, mirror: int, ref_last: bool):
        node = self.tree.nodes[nid]
        is_root = nid == self.tree.root
        skel_rot = self.skel_cache[nid]
        fans = []
        for v in sorted(skel_rot):
            slots = list(skel_rot[v])
            if mirror:
                slots.reverse()
            out_flags = [s != -1 and raw[s][0] == v for s in slots]
            if not any(out_flags):
                continue
            if all(out_flags):
                # source pole: linearize at the parent slot (non-root) or
                # place the reference block at the requested end (root)
                lin = list(slots)
                if is_root:
                    ref_slot = next(i for i, (a, b, c) in enumerate(raw) if c == self.tree.ref_child)
                    k = lin.index(ref_slot)
                    lin = lin[k + 1:] + lin[:k]  # cyclic, reference removed
                    lin = lin + [ref_slot] if ref_last else [ref_slot] + lin
            elif -1 in slots:
                # source pole of a non-root node: every non-parent slot is
                # outgoing; linearize right after the parent position
                k = len(slots)
                pi = slots.index(-1)
                lin = [slots[(pi + j) % k] for j in range(1, k + 1) if slots[(pi + j) % k] != -1]
            else:
                lin = _extract_out_block(slots, out_flags)
            blocks = [self._block_for(v, raw[s][2]) for s in lin]
            fans.append((v, blocks))
        return fans

    # ------------------------------------------------------------------

    def _plan_fan(self, v: int, blocks: list[_Block], a: int, extra: set) -> _FanPlan:
        """Chain links and per-block flips for apex position a; `extra`
        collects pairs added by sibling fans of the same arrangement so one
        augmentation edge is never created twice."""
        k = len(blocks)
        flips: list[bool] = []
        for i, b in enumerate(blocks):
            if b.typ == "B":
                flips.append(_b_ends(b) != (b.first, b.last))
            elif b.singleton:
                flips.append(False)
            elif i <= a:
                flips.append(not b.first_at_left)  # increasing: first on the left
            else:
                flips.append(b.first_at_left)  # decreasing: first on the right
        links: list[_Link] = []

        def add(x: int, y: int, side: str, into: int) -> None:
            if x == y or self.g.has_edge(x, y) or (x, y) in self.added or (x, y) in extra:
                return
            extra.add((x, y))
            links.append(_Link(x, y, side, blocks[into].child))

        def entry_left(i: int) -> int:
            b = blocks[i]
            return _b_ends(b)[0] if b.typ == "B" else b.first

        for i in range(a):
            add(blocks[i].last, entry_left(i + 1), "L", i + 1)
        for j in range(k - 1, a, -1):
            if j - 1 > a:
                add(blocks[j].last, blocks[j - 1].first, "R", j - 1)
            else:
                b = blocks[a]
                target = b.last if b.typ == "M" else _b_ends(b)[1]
                add(blocks[j].last, target, "R", a)
        return _FanPlan(v, blocks, a, flips, links)

    def _fan_candidates(self, blocks: list[_Block], reach) -> list[int]:
        k = len(blocks)
        type_b = [i for i, b in enumerate(blocks) if b.typ == "B"]
        if len(type_b) > 1:
            return []
        apex_range = [type_b[0]] if type_b else list(range(k))
        cands: list[int] = []
        for a in apex_range:
            if self.monotone and (a != k - 1 or type_b):
                continue
            ok = True
            for i in range(k):
                if not ok:
                    break
                for j in range(k):
                    if i == j:
                        continue
                    if _path_before(a, i, j):
                        if blocks[i].pole_edge and reach(blocks[j].head, blocks[i].head):
                            ok = False
                            break
                    else:
                        bi, bj = blocks[i], blocks[j]
                        if (
                            not _path_before(a, j, i)
                            and bi.pole_edge
                            and bj.pole_edge
                            and self.g.has_edge(bi.head, bj.head)
                        ):
                            ok = False
                            break
            if ok:
                cands.append(a)
        return cands

    def _solve_node_fans(self, nid, fans, reach, skel_edges, mirror, ref_last, m_only=False):
        node = self.tree.nodes[nid]
        s_mu = node.poles[0]

        cand_lists: list[list[int]] = []
        pole_fan_idx: Optional[int] = None
        for fi, (v, blocks) in enumerate(fans):
            cands = self._fan_candidates(blocks, reach)
            if v == s_mu:
                pole_fan_idx = fi
                m_cands = [a for a in cands if _fan_endpoints(blocks, a)[0] == "M"]
                if m_only:
                    cands = m_cands
                else:
                    cands = m_cands + [a for a in cands if a not in m_cands]
            if not cands:
                return Reject(nid, "NoValidApex", f"vertex {self.g.names[v]}")
            cand_lists.append(cands)

        tried = 0
        for combo in itertools.product(*cand_lists):
            tried += 1
            if tried > _SEARCH_BUDGET:
                raise GraphError("fan arrangement search budget exceeded")
            extra: set = set()
            plans = [self._plan_fan(v, blocks, a, extra) for (v, blocks), a in zip(fans, combo)]
            if not _surrogate_acyclic(skel_edges, plans):
                continue
            np_ = _NodePlan()
            np_.mirror = mirror
            np_.ref_last = ref_last
            np_.fans = plans
            for plan in plans:
                for b, f in zip(plan.blocks, plan.flips):
                    np_.rel_flip[b.child] = f
            self.plans[nid] = np_
            all_links = [l for p in plans for l in p.links]
            if pole_fan_idx is not None:
                typ, firsts, last, fal = _fan_endpoints(fans[pole_fan_idx][1], combo[pole_fan_idx])
            else:
                typ, firsts, last, fal = "M", (node.poles[1],), node.poles[1], True
            return AugmentationResult(
                nid, typ, firsts, last, [(l.tail, l.head) for l in all_links], fal
            )
        return Reject(nid, "NoValidApex", "no chain arrangement is acyclic")


def _extract_out_block(slots: list[int], out_flags: list[bool]) -> list[int]:
    """The contiguous outgoing block of a cyclic clockwise rotation, read in
    clockwise (= left-to-right) order."""
    k = len(slots)
    start = None
    for i in range(k):
        if out_flags[i] and not out_flags[(i - 1) % k]:
            start = i
            break
    assert start is not None, "bimodal rotation expected"
    out: list[int] = []
    i = start
    while out_flags[i % k] and len(out) < k:
        out.append(slots[i % k])
        i += 1
    return out


def _fan_endpoints(blocks: list[_Block], a: int) -> tuple[str, tuple[int, ...], Optional[int], bool]:
    """Composed (type, firsts, last, first_at_left) of a fan arrangement.

    Fully increasing arrangements with a monotone apex block form one
    monotone path.  A leftmost apex yields a monotone (reversed) path only
    when the apex block is a single vertex: otherwise its own ascending
    path hangs as a second branch and the composition is strictly bitonic.
    """
    k = len(blocks)
    bapex = blocks[a]

    def bottom(i: int, left_side: bool) -> int:
        b = blocks[i]
        if b.typ == "B":
            lo, hi = _b_ends(b)
            return lo if left_side else hi
        return b.first

    if k == 1:
        if bapex.typ == "B":
            return "B", _b_ends(bapex), None, True
        return "M", (bapex.first,), bapex.last, bapex.first_at_left
    if a == k - 1 and bapex.typ == "M":
        return "M", (bottom(0, True),), bapex.last, True
    if a == 0 and bapex.typ == "M" and bapex.singleton:
        return "M", (bottom(k - 1, False),), bapex.last, False
    if a == 0 and bapex.typ == "M":
        return "B", (bapex.first, bottom(k - 1, False)), None, True
    return "B", (bottom(0, True), bottom(k - 1, False)), None, True


def _surrogate_acyclic(skel_edges, fans: list[_FanPlan]) -> bool:
    adj: dict[int, set[int]] = {}

    def add(x: int, y: int) -> None:
        if x != y:
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set())

    for (x, y) in skel_edges:
        add(x, y)
    for plan in fans:
        v = plan.vertex
        for b in plan.blocks:
            if b.typ == "B":
                lo, hi = _b_ends(b)
                add(v, lo)
                add(v, hi)
                add(lo, b.head)
                add(hi, b.head)
            else:
                add(v, b.first)
                add(b.first, b.last)
                add(b.last, b.head)
        for lk in plan.links:
            add(lk.tail, lk.head)
    indeg = {x: 0 for x in adj}
    for x, ys in adj.items():
        for y in ys:
            indeg[y] += 1
    queue = [x for x, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        x = queue.pop()
        seen += 1
        for y in adj[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen == len(adj)


def _topo(verts, succ) -> list[int]:
    indeg = {v: 0 for v in verts}
    for v in verts:
        for w in succ[v]:
            indeg[w] += 1
    heap = [v for v in verts if indeg[v] == 0]
    heapq.heapify(heap)
    out: list[int] = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in sorted(succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return out


# ----------------------------------------------------------------------
# Realization: replay recorded choices into an embedding of G*
# ----------------------------------------------------------------------


class _Realizer:
    def __init__(self, g: DirectedGraph, tree: SpqrTree, solver: _Solver, global_flip: bool) -> None:
        self.g = g
        self.tree = tree
        self.solver = solver
        links: list[tuple[int, int]] = []
        link_meta: list[tuple[int, str, int]] = []  # (node, side, link edge id)
        self.link_ids: dict[int, list[tuple[_Link, int]]] = {}
        edges = list(g.edges)
        flags = list(g.aug_flags)
        seen = set(g.edges)
        for nid, plan in solver.plans.items():
            per_node: list[tuple[_Link, int]] = []
            for fan in plan.fans:
                for lk in fan.links:
                    assert (lk.tail, lk.head) not in seen, "duplicate augmentation edge"
                    seen.add((lk.tail, lk.head))
                    eid = len(edges)
                    edges.append((lk.tail, lk.head))
                    flags.append(True)
                    per_node.append((lk, eid))
            if per_node:
                self.link_ids[nid] = per_node
        self.gstar = DirectedGraph(g.n, edges, g.names, flags)
        self.out_l2r: list[list[int]] = [[] for _ in range(g.n)]
        self.in_l2r: list[list[int]] = [[] for _ in range(g.n)]
        self.abs_flip: dict[int, bool] = {}
        self._compute_abs_flips(global_flip)

    def _compute_abs_flips(self, global_flip: bool) -> None:
        stack = [(self.tree.root, global_flip)]
        while stack:
            nid, f = stack.pop()
            self.abs_flip[nid] = f
            plan = self.solver.plans.get(nid, _NodePlan())
            for c in self.tree.node_children(nid):
                stack.append((c, f ^ plan.rel_flip.get(c, False)))

    # ------------------------------------------------------------------

    def realize(self) -> PlaneEmbedding:
        fans = self._compose()
        root = self.tree.root
        node = self.tree.nodes[root]
        s, t = node.poles
        rot = [self.out_l2r[v] + list(reversed(self.in_l2r[v])) for v in range(self.g.n)]
        # outer face: the corner at s adjacent to the reference edge on the
        # wrap side of the fan order
        ref_eid = self.tree.nodes[self.tree.ref_child].edge_id if self.tree.ref_child >= 0 else 0
        rs = rot[s]
        p = rs.index(ref_eid)
        f = self.abs_flip[root]
        if node.kind == "R":
            plan = self.solver.plans[root]
            after_ref = plan.ref_last ^ f
            corner = p if after_ref else (p - 1) % len(rs)
        else:
            corner = len(rs) - 1
        faces = trace_faces(self.gstar, rot)
        emb = PlaneEmbedding(self.gstar, rot, 0, faces)
        outer = emb.corner_face(s, corner)
        return PlaneEmbedding(self.gstar, rot, outer, faces)

    # ------------------------------------------------------------------

    def _compose(self) -> dict[int, tuple[list[int], list[int]]]:
        """Bottom-up fan composition; fills out/in lists for internalized
        vertices and returns (s_fan, t_fan) per node in left-to-right order."""
        tree = self.tree
        fans: dict[int, tuple[list[int], list[int]]] = {}
        order: list[int] = []
        stack = [tree.root]
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(tree.node_children(nid))
        for nid in reversed(order):
            node = tree.nodes[nid]
            f = self.abs_flip[nid]
            plan = self.solver.plans.get(nid, _NodePlan())
            if node.kind == "Q":
                fans[nid] = ([node.edge_id], [node.edge_id])
            elif node.kind == "S" and nid != tree.root:
                child_fans = [fans[c] for c in node.children]
                for i in range(len(node.children) - 1):
                    x = node.chain[i + 1]
                    self.out_l2r[x] = list(child_fans[i + 1][0])
                    self.in_l2r[x] = list(child_fans[i][1])
                fans[nid] = (list(child_fans[0][0]), list(child_fans[-1][1]))
            elif node.kind == "P":
                assert plan.child_order is not None
                disp = list(plan.child_order)
                if f:
                    disp.reverse()
                s_fan = [e for c in disp for e in fans[c][0]]
                t_fan = [e for c in disp for e in fans[c][1]]
                self._insert_links(nid, node, f, fans, t_fan=t_fan)
                fans[nid] = (s_fan, t_fan)
                if nid == tree.root:
                    self.out_l2r[node.poles[0]] = s_fan
                    self.in_l2r[node.poles[1]] = t_fan
            elif node.kind == "S":  # root S
                child_fans = [fans[c] for c in node.children]
                ref_fan = fans[tree.ref_child]
                for i in range(len(node.children) - 1):
                    x = node.chain[i + 1]
                    self.out_l2r[x] = list(child_fans[i + 1][0])
                    self.in_l2r[x] = list(child_fans[i][1])
                s, t = node.poles
                parts_s = [child_fans[0][0], ref_fan[0]]
                parts_t = [child_fans[-1][1], ref_fan[1]]
                if f:
                    parts_s.reverse()
                    parts_t.reverse()
                self.out_l2r[s] = [e for p in parts_s for e in p]
                self.in_l2r[t] = [e for p in parts_t for e in p]
                self._insert_links(nid, node, f, fans)
            else:
                self._compose_r(nid, node, f, plan, fans)
        return fans

    def _compose_r(self, nid, node, f, plan, fans) -> None:
        tree = self.tree
        raw, parent = tree.skeleton_edge_list(nid)
        slots_by_vertex = self.solver.skel_cache[nid]
        mir = plan.mirror ^ f
        s_mu, t_mu = node.poles
        is_root = nid == tree.root
        pole_fans: dict[int, tuple[list[int], list[int]]] = {}
        ref_slot = None
        if is_root:
            ref_slot = next(i for i, (_, _, c) in enumerate(raw) if c == tree.ref_child)
        for v in sorted(slots_by_vertex):
            slots = list(slots_by_vertex[v])
            if mir:
                slots.reverse()
            out_seq: list[int] = []
            in_seq: list[int] = []
            if not is_root and v in (s_mu, t_mu):
                k = len(slots)
                pi = slots.index(-1)
                lin = [slots[(pi + j) % k] for j in range(1, k + 1) if slots[(pi + j) % k] != -1]
                if v == t_mu:
                    # clockwise at a sink reads right-to-left; child fans are
                    # stored left-to-right, so reverse the slot order
                    lin.reverse()
                for slot in lin:
                    a, b, c = raw[slot]
                    sf, tf = fans[c]
                    if v == a:
                        out_seq.extend(sf)
                    else:
                        in_seq.extend(tf)
                pole_fans[v] = (out_seq, in_seq)
            else:
                out_flags = [s != -1 and raw[s][0] == v for s in slots]
                if is_root and v == s_mu:
                    # reproduce the processing fan order: cut at the
                    # reference slot, place it per ref_last, mirror per f
                    base = list(slots_by_vertex[v])
                    if plan.mirror:
                        base.reverse()
                    k = base.index(ref_slot)
                    lin = base[k + 1:] + base[:k]
                    lin = lin + [ref_slot] if plan.ref_last else [ref_slot] + lin
                    if f:
                        lin.reverse()
                elif not any(out_flags):
                    lin = []
                elif all(out_flags):
                    lin = list(slots)
                else:
                    lin = _extract_out_block(slots, out_flags)
                for slot in lin:
                    a, b, c = raw[slot]
                    out_seq.extend(fans[c][0])
                # incoming slots clockwise read right-to-left; reverse the
                # slot order so left-to-right child fans concatenate l2r
                for slot in reversed(_cyclic_complement(slots, lin)):
                    if slot == -1:
                        continue
                    a, b, c = raw[slot]
                    in_seq.extend(fans[c][1])
                self.out_l2r[v] = out_seq
                self.in_l2r[v] = in_seq
        self._insert_links(nid, node, f, fans, pole_fans)
        if not is_root:
            fans[nid] = (pole_fans[s_mu][0], pole_fans[t_mu][1])

    # ------------------------------------------------------------------

    def _insert_links(self, nid, node, f, fans, pole_fans=None, t_fan=None) -> None:
        """Splice this node's augmentation edges into the rotations.

        Tails extend the outgoing block on the chain side.  A head entering
        a block at that block's own sink pole sits immediately next to the
        entered child's incoming bundle; heads interior to the entered child
        go to the extreme end, nesting outside any deeper insertions.
        """
        for lk, eid in self.link_ids.get(nid, ()):
            side = lk.side if not f else ("R" if lk.side == "L" else "L")
            if side == "L":
                self.out_l2r[lk.tail].append(eid)
            else:
                self.out_l2r[lk.tail].insert(0, eid)
            if pole_fans is not None and lk.head in pole_fans:
                seq = pole_fans[lk.head][1]
            elif t_fan is not None and lk.head == node.poles[1]:
                seq = t_fan
            else:
                seq = self.in_l2r[lk.head]
            bundle = set(fans[lk.into_child][1]) if lk.into_child in fans else set()
            span = [i for i, e in enumerate(seq) if e in bundle]
            if span:
                seq.insert(span[0] if side == "L" else span[-1] + 1, eid)
            elif side == "L":
                seq.insert(0, eid)
            else:
                seq.append(eid)


def _cyclic_complement(slots: list[int], block: list[int]) -> list[int]:
    """The cyclic rotation minus a contiguous block, in clockwise order
    starting right after the block."""
    if not block:
        return list(slots)
    k = len(slots)
    end = slots.index(block[-1])
    out = []
    i = (end + 1) % k
    while len(out) < k - len(block):
        if slots[i] not in block:
            out.append(slots[i])
        i = (i + 1) % k
    return out


# ----------------------------------------------------------------------
# Public entry points (variable embedding)
# ----------------------------------------------------------------------


def _check_preconditions(g: DirectedGraph):
    rep = validate_st_graph(g)
    if not rep.ok:
        raise NotStGraph("input is not an st-graph (acyclic, one source, one sink)")
    und = nx.Graph()
    und.add_nodes_from(range(g.n))
    und.add_edges_from((u, v) for (u, v) in g.edges)
    if not nx.check_planarity(und)[0]:
        raise NotPlanar(kuratowski_witness(g))
    return rep


def _trivial_pair(g: DirectedGraph, monotone: bool):
    emb = PlaneEmbedding(g, [[] for _ in range(g.n)] if g.m == 0 else [[0], [0]],
                         0, None if g.m else [()], check_euler=bool(g.m))
    pi = StOrdering(tuple(range(1, g.n + 1)))
    return MonotonePair(emb, pi) if monotone else BitonicPair(emb, pi)


def _test_variable(g: DirectedGraph, monotone: bool, checked: bool = False) -> VariableResult:
    if not checked:
        rep = _check_preconditions(g)
    else:
        rep = validate_st_graph(g)
    if g.n <= 2:
        return VariableResult(_trivial_pair(g, monotone), None, [])
    s, t = rep.source, rep.sink
    assert s is not None and t is not None

    if not g.has_edge(s, t):
        gp = add_super_source(g)
        und = nx.Graph()
        und.add_nodes_from(range(gp.n))
        und.add_edges_from((u, v) for (u, v) in gp.edges)
        if not nx.check_planarity(und)[0]:
            # G is planar but admits no embedding with s and t on a common
            # face, so no upward embedding and hence no pair exists
            return VariableResult(None, Reject(-1, "NoUpwardEmbedding", ""), [])
        sub = _test_variable(gp, monotone, checked=True)
        if sub.pair is None:
            return sub
        pair = _strip_super_source(g, gp, sub.pair, monotone)
        return VariableResult(pair, None, sub.trace)

    tree = build_spqr(g)
    solver = _Solver(g, tree, monotone)
    try:
        out = solver.run()
    except NotPlanar:
        raise
    if isinstance(out, Reject):
        return VariableResult(None, out, solver.trace)

    realizer = _Realizer(g, tree, solver, global_flip=monotone)
    emb_star = realizer.realize()
    gstar = realizer.gstar
    topo = gstar.topological_order()
    assert topo is not None, "augmented graph must stay acyclic"
    pi = StOrdering.from_order(topo)

    rot = [[e for e in emb_star.rotation[v] if e < g.m] for v in range(g.n)]
    faces = trace_faces(g, rot)
    emb0 = PlaneEmbedding(g, rot, 0, faces)
    outer = _outer_face_for(emb0, s)
    emb = PlaneEmbedding(g, rot, outer, faces)
    pair = MonotonePair(emb, pi) if monotone else BitonicPair(emb, pi)
    assert pair.validate(), "realized pair failed validation"
    return VariableResult(pair, None, solver.trace)


def _outer_face_for(emb: PlaneEmbedding, s: int) -> int:
    """The face at the source's wrap corner (between its clockwise-last and
    clockwise-first outgoing edges): the region below the source."""
    deg = len(emb.rotation[s])
    return emb.corner_face(s, deg - 1)


def _strip_super_source(g: DirectedGraph, gp: DirectedGraph, pair, monotone: bool):
    sp = gp.n - 1
    emb_p: PlaneEmbedding = pair.embedding
    rot = [[e for e in emb_p.rotation[v] if e < g.m] for v in range(g.n)]
    faces = trace_faces(g, rot)
    emb0 = PlaneEmbedding(g, rot, 0, faces)
    rep = validate_st_graph(g)
    outer = _outer_face_for(emb0, rep.source)
    emb = PlaneEmbedding(g, rot, outer, faces)
    ranks = [(pair.pi.rank(v), v) for v in range(g.n)]
    order = [v for _, v in sorted(ranks)]
    pi = StOrdering.from_order(order)
    out = MonotonePair(emb, pi) if monotone else BitonicPair(emb, pi)
    assert out.validate(), "super-source stripping broke the pair"
    return out


def test_bitonic_variable(g: DirectedGraph) -> VariableResult:
    """Decide whether a planar st-graph admits a bitonic pair; on success the
    result carries the realized (embedding, ordering) pair."""
    return _test_variable(g, monotone=False)


def test_monotone_variable(g: DirectedGraph) -> VariableResult:
    """Decide whether a planar st-graph admits a monotonically decreasing
    pair; identical pipeline, rejecting whenever Type B would be needed."""
    return _test_variable(g, monotone=True)


# spec-shaped wrappers over the node processors -------------------------


def process_q(solver: _Solver, nid: int) -> AugmentationResult:
    return solver.process_q(nid)


def process_s(solver: _Solver, nid: int):
    return solver.process_s(nid)


def process_p(solver: _Solver, nid: int):
    return solver.process_p(nid)


def process_r(solver: _Solver, nid: int):
    return solver.process_r(nid)


# ----------------------------------------------------------------------
# Fixed embedding (Theorem-4 route)
# ----------------------------------------------------------------------


def test_bitonic_fixed(emb: PlaneEmbedding) -> FixedResult:
    """Bitonic st-ordering for a fixed upward-planar embedding.

    For each vertex, reachability between consecutive successors forces the
    augmentation direction of that pair; the feasible apex positions form a
    window, empty windows yield a witness vertex.  Augmentation edges are
    added vertex by vertex (windows recomputed against the growing graph)
    and any topological order of the result is returned.
    """
    from .embedding import successor_list as _succ

    g = emb.graph
    rep = validate_st_graph(g)
    if not rep.ok:
        raise NotStGraph("fixed test requires an st-graph")
    outer_verts = {v for (e, d) in emb.faces[emb.outer_face] for v in g.edges[e]}
    if g.n >= 2 and not (rep.source in outer_verts and rep.sink in outer_verts):
        raise NotPlaneStGraph("s and t must lie on the outer face")

    lists = {v: _succ(emb, v).succs for v in range(g.n)}

    def reach_matrix(edges: list[tuple[int, int]]) -> list[set[int]]:
        succ: list[list[int]] = [[] for _ in range(g.n)]
        for (u, v) in edges:
            succ[u].append(v)
        indeg = [0] * g.n
        for u in range(g.n):
            for v in succ[u]:
                indeg[v] += 1
        topo: list[int] = [v for v in range(g.n) if indeg[v] == 0]
        i = 0
        while i < len(topo):
            for w in succ[topo[i]]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    topo.append(w)
            i += 1
        reach: list[set[int]] = [set() for _ in range(g.n)]
        for v in reversed(topo):
            acc: set[int] = set()
            for w in succ[v]:
                acc.add(w)
                acc |= reach[w]
            reach[v] = acc
        return reach

    # feasibility from the input graph alone
    reach = reach_matrix(list(g.edges))
    for v in range(g.n):
        lst = lists[v]
        lo, hi = 0, len(lst) - 1
        for i in range(len(lst) - 1):
            x, y = lst[i], lst[i + 1]
            if y in reach[x]:
                lo = max(lo, i + 1)
            if x in reach[y]:
                hi = min(hi, i)
        if lo > hi:
            return FixedResult(None, witness_vertex=v)

    # construct the augmentation, updating reachability as edges are added
    edges = list(g.edges)
    added: list[tuple[int, int]] = []
    for v in range(g.n):
        lst = lists[v]
        if len(lst) < 2:
            continue
        reach = reach_matrix(edges)
        lo, hi = 0, len(lst) - 1
        for i in range(len(lst) - 1):
            x, y = lst[i], lst[i + 1]
            if y in reach[x]:
                lo = max(lo, i + 1)
            if x in reach[y]:
                hi = min(hi, i)
        assert lo <= hi, "window emptied during construction"
        h = lo
        for i in range(len(lst) - 1):
            x, y = (lst[i], lst[i + 1]) if i < h else (lst[i + 1], lst[i])
            if (x, y) not in set(edges):
                edges.append((x, y))
                added.append((x, y))

    gstar = DirectedGraph(g.n, edges, g.names, [False] * g.m + [True] * (len(edges) - g.m))
    topo = gstar.topological_order()
    assert topo is not None, "fixed augmentation created a cycle"
    pi = StOrdering.from_order(topo)
    return FixedResult(pi, added_edges=added)
