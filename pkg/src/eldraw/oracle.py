"""Exhaustive ground-truth baselines on small instances.

Everything here is deliberately independent of the fast algorithms it
certifies: st-orderings come from linear-extension search, embeddings from
either rotation-system filtering or SPQR choice expansion (the two are
cross-checked against each other), and the bitonic/monotone brute forces
scan embeddings times orderings.  Verdicts are per labeled graph;
deduplication by successor-list profile is a speed optimization only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import networkx as nx

from .embedding import (
    BitonicPair,
    MonotonePair,
    PlaneEmbedding,
    StOrdering,
    successor_list,
    trace_faces,
)
from .graph import DirectedGraph, GraphError, validate_st_graph
from .spqr import SpqrTree, build_spqr


class BudgetExceeded(GraphError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_vertices: int = 12
    max_edges: int = 40
    max_embeddings: int = 200_000

    def check_graph(self, g: DirectedGraph) -> None:
        if g.n > self.max_vertices:
            raise BudgetExceeded(f"{g.n} vertices exceeds budget {self.max_vertices}")
        if g.m > self.max_edges:
            raise BudgetExceeded(f"{g.m} edges exceeds budget {self.max_edges}")


DEFAULT_BUDGET = EnumerationBudget()


# ----------------------------------------------------------------------
# st-orderings
# ----------------------------------------------------------------------


def enumerate_st_orderings(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[StOrdering]:
    """All topological orders, lexicographically by vertex sequence."""
    budget.check_graph(g)
    if validate_st_graph(g).ok is False:
        raise GraphError("enumerate_st_orderings requires an st-graph")
    n = g.n
    indeg = [g.in_degree(v) for v in range(n)]
    order: list[int] = []

    def rec() -> Iterator[StOrdering]:
        if len(order) == n:
            yield StOrdering.from_order(order)
            return
        for v in range(n):
            if indeg[v] == 0 and v not in placed:
                placed.add(v)
                order.append(v)
                for e in g.out_edges(v):
                    indeg[g.edges[e][1]] -= 1
                yield from rec()
                for e in g.out_edges(v):
                    indeg[g.edges[e][1]] += 1
                order.pop()
                placed.discard(v)

    placed: set[int] = set()
    yield from rec()


def count_linear_extensions(g: DirectedGraph) -> int:
    """Downset dynamic program; independent of enumerate_st_orderings."""
    n = g.n
    if n > 20:
        raise BudgetExceeded("linear-extension counting capped at 20 vertices")
    pred_mask = [0] * n
    for (u, v) in g.edges:
        pred_mask[v] |= 1 << u
    counts = {0: 1}
    for mask in range(1 << n):
        c = counts.get(mask)
        if not c:
            continue
        for v in range(n):
            bit = 1 << v
            if mask & bit or (pred_mask[v] & mask) != pred_mask[v]:
                continue
            nm = mask | bit
            counts[nm] = counts.get(nm, 0) + c
    return counts.get((1 << n) - 1, 0)


# ----------------------------------------------------------------------
# Upward embeddings
# ----------------------------------------------------------------------


def _with_st_edge(g: DirectedGraph, s: int, t: int) -> tuple[DirectedGraph, Optional[int]]:
    if g.has_edge(s, t):
        return g, None
    h = DirectedGraph(g.n, list(g.edges) + [(s, t)], g.names, list(g.aug_flags) + [True])
    return h, g.m


def _compose_rotations(
    tree: SpqrTree, choices: dict[int, int], skel_cache: dict[int, dict[int, list[int]]]
) -> list[list[int]]:
    """Rotation system of the tree's graph under P-order/R-flip choices.

    choices[nid]: for R nodes 0/1 (mirror); for P nodes an index into the
    permutations of its skeleton edges.
    """
    g = tree.graph
    rot: list[list[int]] = [[] for _ in range(g.n)]

    # fans(nid) = (s_fan, t_fan): pert edge ids clockwise at each pole
    def fans(nid: int) -> tuple[list[int], list[int]]:
        node = tree.nodes[nid]
        if node.kind == "Q":
            return [node.edge_id], [node.edge_id]
        if node.kind == "S":
            child_fans = [fans(c) for c in node.children]
            for i in range(len(node.children) - 1):
                x = node.chain[i + 1]
                rot[x] = child_fans[i + 1][0] + child_fans[i][1]
            return child_fans[0][0], child_fans[-1][1]
        if node.kind == "P":
            perm = _nth_permutation(len(node.children), choices.get(nid, 0))
            ordered = [node.children[i] for i in perm]
            child_fans = [fans(c) for c in ordered]
            s_fan = [e for f in child_fans for e in f[0]]
            t_fan = [e for f in reversed(child_fans) for e in f[1]]
            return s_fan, t_fan
        # R node
        raw, parent = tree.skeleton_edge_list(nid)
        skel_rot = skel_cache[nid]
        if choices.get(nid, 0):
            skel_rot = {v: list(reversed(r)) for v, r in skel_rot.items()}
        child_fans_by_slot: dict[int, tuple[list[int], list[int]]] = {
            slot: fans(c) for slot, (_, _, c) in enumerate(raw)
        }

        def expand(v: int, slots: list[int]) -> list[int]:
            seq: list[int] = []
            for slot in slots:
                if slot == -1:
                    continue  # parent edge position
                a, b, _ = raw[slot]
                sf, tf = child_fans_by_slot[slot]
                seq.extend(sf if v == a else tf)
            return seq

        s_fan: list[int] = []
        t_fan: list[int] = []
        for v, slots in skel_rot.items():
            if nid != tree.root and v in node.poles:
                # linearize the cyclic slot order at the parent-edge cut
                k = len(slots)
                pi = slots.index(-1)
                lin = [slots[(pi + j) % k] for j in range(1, k + 1)]
                fan = expand(v, lin)
                if v == node.poles[0]:
                    s_fan = fan
                else:
                    t_fan = fan
            else:
                rot[v] = expand(v, slots)
        return s_fan, t_fan

    root_node = tree.nodes[tree.root]
    if root_node.kind == "Q":
        u, v = g.edges[root_node.edge_id]
        rot[u] = [root_node.edge_id]
        rot[v] = [root_node.edge_id]
        return rot
    if root_node.kind == "P":
        children = root_node.children
        perm = _nth_permutation(len(children), choices.get(tree.root, 0))
        ordered = [children[i] for i in perm]
        child_fans = [fans(c) for c in ordered]
        a, b = root_node.poles
        rot[a] = [e for f in child_fans for e in f[0]]
        rot[b] = [e for f in reversed(child_fans) for e in f[1]]
    elif root_node.kind == "S":
        child_fans = [fans(c) for c in root_node.children]
        ref_fan = fans(tree.ref_child)
        for i in range(len(root_node.children) - 1):
            x = root_node.chain[i + 1]
            rot[x] = child_fans[i + 1][0] + child_fans[i][1]
        a, b = root_node.poles
        rot[a] = child_fans[0][0] + ref_fan[0]
        rot[b] = ref_fan[1] + child_fans[-1][1]
    else:
        fans(tree.root)
    return rot


def build_skeleton_rotation_cache(tree: SpqrTree) -> dict[int, dict[int, list[int]]]:
    return {
        node.id: _skeleton_rotation(tree, node.id, *tree.skeleton_edge_list(node.id))
        for node in tree.nodes
        if node.kind == "R"
    }


def _skeleton_rotation(tree: SpqrTree, nid: int, raw, parent) -> dict[int, list[int]]:
    """Clockwise skeleton rotation per vertex; entries are slot indices into
    `raw`, with -1 for the implicit parent edge."""
    from .planarity import planar_embed

    edges = [(a, b) for (a, b, _) in raw]
    slots_of_pair: dict[tuple[int, int], list[int]] = {}
    for i, (a, b) in enumerate(edges):
        slots_of_pair.setdefault((a, b), []).append(i)
    if parent is not None:
        edges = edges + [parent]
        slots_of_pair.setdefault(parent, []).append(-1)
    verts = sorted({v for e in edges for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    names = [tree.graph.names[v] for v in verts]
    # build a simple digraph; R skeletons plus parent edge are simple except
    # for a possible (pole-edge child || parent) pair, which planar_embed's
    # digon expansion cannot represent here, so subdivide duplicates
    seen: set[tuple[int, int]] = set()
    simple_edges: list[tuple[int, int]] = []
    slot_of_simple: list[int] = []
    dup_slots: list[tuple[int, int, int]] = []
    for (a, b), slot_list in sorted(slots_of_pair.items()):
        for j, slot in enumerate(slot_list):
            if j == 0:
                simple_edges.append((remap[a], remap[b]))
                slot_of_simple.append(slot)
            else:
                dup_slots.append((remap[a], remap[b], slot))
    extra_names = []
    for idx, (ra, rb, slot) in enumerate(dup_slots):
        mid = len(verts) + len(extra_names)
        extra_names.append(f"__m{idx}")
        simple_edges.append((ra, mid))
        slot_of_simple.append(slot)
        simple_edges.append((mid, rb))
        slot_of_simple.append(-1000 - idx)
    gs = DirectedGraph(len(verts) + len(extra_names), simple_edges, names + extra_names)
    emb = planar_embed(gs)
    out: dict[int, list[int]] = {}
    for v in verts:
        rv = remap[v]
        slots: list[int] = []
        for e in emb.rotation[rv]:
            slot = slot_of_simple[e]
            if slot <= -1000:
                # second half of a subdivided duplicate; find its partner
                idx = -1000 - slot
                slot = dup_slots[idx][2]
            slots.append(slot)
        out[v] = slots
    return out


def _nth_permutation(k: int, idx: int) -> list[int]:
    items = list(range(k))
    perm = []
    import math

    for i in range(k, 0, -1):
        f = math.factorial(i - 1)
        j, idx = divmod(idx, f)
        perm.append(items.pop(j))
    return perm


def enumerate_upward_embeddings(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[PlaneEmbedding]:
    """All (rotation system, outer face) pairs with s and t on the outer face.

    Rotation systems are generated through the SPQR tree of G plus the (s,t)
    edge (P-node child orders x R-node flips), then the helper edge is
    removed and every face containing both s and t may serve as the outer
    face.  Results are deduplicated.
    """
    budget.check_graph(g)
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("enumerate_upward_embeddings requires an st-graph")
    s, t = rep.source, rep.sink
    assert s is not None and t is not None
    if g.n == 1:
        yield PlaneEmbedding(g, [[]], 0, [()], check_euler=False)
        return
    if g.n == 2 and g.m == 1:
        yield PlaneEmbedding(g, [[0], [0]])
        return

    h, helper = _with_st_edge(g, s, t)
    und = nx.Graph()
    und.add_nodes_from(range(h.n))
    und.add_edges_from((u, v) for (u, v) in h.edges)
    if not nx.check_planarity(und)[0]:
        return  # no embedding has s and t on a common face
    try:
        tree = build_spqr(h)
    except GraphError as exc:
        raise GraphError(f"cannot enumerate embeddings: {exc}") from exc

    import math

    choice_nodes: list[tuple[int, int]] = []
    total = 1
    for node in tree.nodes:
        if node.kind == "P":
            c = math.factorial(len(node.children))
            choice_nodes.append((node.id, c))
            total *= c
        elif node.kind == "R":
            choice_nodes.append((node.id, 2))
            total *= 2
        if total > budget.max_embeddings:
            raise BudgetExceeded(f"embedding choice space exceeds {budget.max_embeddings}")

    skel_cache = build_skeleton_rotation_cache(tree)
    seen: set = set()
    for combo in itertools.product(*[range(c) for (_, c) in choice_nodes]) if choice_nodes else [()]:
        choices = {nid: v for (nid, _), v in zip(choice_nodes, combo)}
        rot_h = _compose_rotations(tree, choices, skel_cache)
        if helper is not None:
            rot = [[e for e in r if e != helper] for r in rot_h]
        else:
            rot = [list(r) for r in rot_h]
        key0 = tuple(_normalize_cycle(r) for r in rot)
        faces = trace_faces(g, rot)
        for fi, face in enumerate(faces):
            verts = set()
            for (e, d) in face:
                verts.update(g.edges[e])
            if s in verts and t in verts:
                key = (key0, frozenset(face))
                if key in seen:
                    continue
                seen.add(key)
                yield PlaneEmbedding(g, rot, fi, faces)


def _normalize_cycle(r: list[int]) -> tuple[int, ...]:
    if not r:
        return ()
    k = r.index(min(r))
    return tuple(r[k:] + r[:k])


def enumerate_upward_embeddings_bruteforce(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[PlaneEmbedding]:
    """Cross-check generator: filter all rotation systems by planarity."""
    budget.check_graph(g)
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("requires an st-graph")
    s, t = rep.source, rep.sink
    if g.n == 1:
        yield PlaneEmbedding(g, [[]], 0, [()], check_euler=False)
        return
    import math

    total = 1
    for v in range(g.n):
        total *= max(1, math.factorial(g.degree(v) - 1))
        if total > budget.max_embeddings:
            raise BudgetExceeded("rotation space too large for brute force")

    per_vertex: list[list[tuple[int, ...]]] = []
    for v in range(g.n):
        inc = sorted(g.out_edges(v) + g.in_edges(v))
        if len(inc) <= 1:
            per_vertex.append([tuple(inc)])
        else:
            first = inc[0]
            per_vertex.append([(first,) + p for p in itertools.permutations(inc[1:])])
    seen: set = set()
    for rots in itertools.product(*per_vertex):
        try:
            faces = trace_faces(g, rots)
        except Exception:
            continue
        if g.n - g.m + len(faces) != 2:
            continue
        for fi, face in enumerate(faces):
            verts = set()
            for (e, d) in face:
                verts.update(g.edges[e])
            if s in verts and t in verts:
                key = (tuple(_normalize_cycle(list(r)) for r in rots), frozenset(face))
                if key in seen:
                    continue
                seen.add(key)
                yield PlaneEmbedding(g, rots, fi, faces)


# ----------------------------------------------------------------------
# Bitonic / monotone brute force (embeddings x orderings)
# ----------------------------------------------------------------------


def _ordering_with_list_constraints(
    g: DirectedGraph, lists: dict[int, tuple[int, ...]], monotone: bool
) -> Optional[list[int]]:
    """First linear extension (lexicographic) whose ranks make every
    successor list bitonic (or monotonically decreasing).

    Search over downsets with failure memoization.  A list is bitonic iff it
    has no interior local minimum, so a vertex may be placed only when it is
    not doomed to become one; for the monotone variant each vertex requires
    its right list-neighbor placed first.
    """
    n = g.n
    full = (1 << n) - 1
    pred_mask = [0] * n
    for (u, v) in g.edges:
        pred_mask[v] |= 1 << u

    any_masks: list[list[int]] = [[] for _ in range(n)]  # each must intersect placed
    all_mask: list[int] = [0] * n  # must be subset of placed
    for v, lst in lists.items():
        k = len(lst)
        if monotone:
            for i in range(k - 1):
                all_mask[lst[i]] |= 1 << lst[i + 1]
        else:
            for i in range(1, k - 1):
                any_masks[lst[i]].append((1 << lst[i - 1]) | (1 << lst[i + 1]))

    failed: set[int] = set()
    order: list[int] = []

    def rec(placed: int) -> bool:
        if placed == full:
            return True
        if placed in failed:
            return False
        for v in range(n):
            bit = 1 << v
            if placed & bit or (pred_mask[v] & placed) != pred_mask[v]:
                continue
            if (all_mask[v] & placed) != all_mask[v]:
                continue
            if any(not (m & placed) for m in any_masks[v]):
                continue
            order.append(v)
            if rec(placed | bit):
                return True
            order.pop()
        failed.add(placed)
        return False

    return order if rec(0) else None


def _profile(g: DirectedGraph, emb: PlaneEmbedding, monotone: bool) -> tuple:
    lists = {}
    for v in range(g.n):
        lst = successor_list(emb, v).succs
        if (monotone and len(lst) >= 2) or (not monotone and len(lst) >= 3):
            lists[v] = lst
    return tuple(sorted(lists.items()))


def brute_force_bitonic_pair(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Optional[BitonicPair]:
    """Scan embeddings x orderings; first pair found (deterministic)."""
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("requires an st-graph")
    if g.n <= 2:
        emb = next(enumerate_upward_embeddings(g, budget))
        pi = StOrdering.from_order(list(range(g.n)) if g.n < 2 else [rep.source, rep.sink])
        return BitonicPair(emb, pi)
    tried: dict[tuple, Optional[list[int]]] = {}
    for emb in enumerate_upward_embeddings(g, budget):
        key = _profile(g, emb, monotone=False)
        if key in tried:
            order = tried[key]
        else:
            lists = dict(key)
            order = _ordering_with_list_constraints(g, lists, monotone=False)
            tried[key] = order
        if order is not None:
            pair = BitonicPair(emb, StOrdering.from_order(order))
            assert pair.validate()
            return pair
    return None


def brute_force_monotone_pair(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Optional[MonotonePair]:
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("requires an st-graph")
    if g.n <= 2:
        emb = next(enumerate_upward_embeddings(g, budget))
        pi = StOrdering.from_order(list(range(g.n)) if g.n < 2 else [rep.source, rep.sink])
        return MonotonePair(emb, pi)
    tried: dict[tuple, Optional[list[int]]] = {}
    for emb in enumerate_upward_embeddings(g, budget):
        key = _profile(g, emb, monotone=True)
        if key in tried:
            order = tried[key]
        else:
            lists = dict(key)
            order = _ordering_with_list_constraints(g, lists, monotone=True)
            tried[key] = order
        if order is not None:
            pair = MonotonePair(emb, StOrdering.from_order(order))
            assert pair.validate()
            return pair
    return None


# ----------------------------------------------------------------------
# General plane embeddings, modality, and the port-feasibility oracle
# ----------------------------------------------------------------------


class TooLargeForEnumeration(BudgetExceeded):
    pass


def enumerate_plane_rotations(
    g: DirectedGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All genus-0 rotation systems of a connected graph, by filtering the
    product of cyclic orders per vertex."""
    import math

    total = 1
    for v in range(g.n):
        total *= max(1, math.factorial(g.degree(v) - 1))
        if total > budget.max_embeddings:
            raise TooLargeForEnumeration(f"rotation space exceeds {budget.max_embeddings}")
    per_vertex: list[list[tuple[int, ...]]] = []
    for v in range(g.n):
        inc = sorted(g.out_edges(v) + g.in_edges(v))
        if len(inc) <= 1:
            per_vertex.append([tuple(inc)])
        else:
            first = inc[0]
            per_vertex.append([(first,) + p for p in itertools.permutations(inc[1:])])
    for rots in itertools.product(*per_vertex):
        try:
            faces = trace_faces(g, rots)
        except Exception:
            continue
        if g.n - g.m + len(faces) == 2:
            yield rots


def min_modality_over_embeddings(
    g: DirectedGraph, v: Optional[int] = None, budget: EnumerationBudget = DEFAULT_BUDGET
) -> int:
    """Minimum over all planar embeddings of the (per-vertex or maximum)
    modality; above 4 the graph admits no planar L-drawing."""
    from .embedding import modality

    if not g.is_weakly_connected():
        raise GraphError("modality enumeration requires a connected graph")
    best: Optional[int] = None
    for rots in enumerate_plane_rotations(g, budget):
        emb = PlaneEmbedding(g, rots, 0)
        if v is not None:
            k = modality(emb, v)
        else:
            k = max((modality(emb, w) for w in range(g.n)), default=0)
        best = k if best is None else min(best, k)
        if best == 0:
            break
    if best is None:
        raise GraphError("graph is not planar")
    return best


def brute_force_port_feasibility(g: DirectedGraph, emb: PlaneEmbedding, labels) -> bool:
    """Exhaustive check over the finite witness space: wrap-corner cuts per
    vertex times bend assignments, verifying the four conditions directly
    from port direction vectors."""
    vec = {"top": (0, 1), "bottom": (0, -1), "left": (-1, 0), "right": (1, 0)}
    cw_idx = {"top": 0, "right": 1, "bottom": 2, "left": 3}

    def end_dir(e: int, v: int) -> str:
        u, w = g.edges[e]
        return labels.out[e] if v == u else labels.inn[e]

    # convex side per edge via the turn direction of travel
    convex_left = []
    for e, (u, w) in enumerate(g.edges):
        d1 = vec[labels.out[e]]
        d2 = (1, 0) if labels.inn[e] == "left" else (-1, 0)
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        convex_left.append(cross > 0)

    # outgoing ends must use vertical ports, incoming horizontal ones
    for e, (u, w) in enumerate(g.edges):
        if labels.out[e] not in ("top", "bottom") or labels.inn[e] not in ("left", "right"):
            return False

    edge_faces: dict[int, list[int]] = {e: [-1, -1] for e in range(g.m)}
    for fi, face in enumerate(emb.faces):
        for (e, d) in face:
            edge_faces[e][d] = fi

    per_vertex_cuts: list[list[Optional[int]]] = []
    for v in range(g.n):
        rot = emb.rotation[v]
        deg = len(rot)
        if deg == 0:
            per_vertex_cuts.append([None])
            continue
        dirs = [cw_idx[end_dir(e, v)] for e in rot]
        qsum = sum((dirs[(i + 1) % deg] - dirs[i]) % 4 for i in range(deg))
        if qsum == 4:
            per_vertex_cuts.append([None])
        elif qsum == 0:
            per_vertex_cuts.append(list(range(deg)))
        else:
            return False

    def lefty(e: int, v: int) -> bool:
        u, w = g.edges[e]
        if v == u:
            return labels.inn[e] == ("right" if labels.out[e] == "top" else "left")
        return labels.out[e] == ("top" if labels.inn[e] == "left" else "bottom")

    for cuts in itertools.product(*per_vertex_cuts):
        ok = True
        x_vf: dict[tuple[int, int], int] = {}
        zero_corners: list[tuple[int, int, int, int]] = []  # (v, corner, e1, e2)
        for v in range(g.n):
            rot = emb.rotation[v]
            deg = len(rot)
            if deg == 0:
                continue
            dirs = [cw_idx[end_dir(e, v)] for e in rot]
            total = 0
            # within-port order: left-benders before right-benders at every
            # same-port boundary that is not the wrap corner
            for i in range(deg):
                j = (i + 1) % deg
                if i == cuts[v]:
                    continue
                if dirs[i] == dirs[j] and (not lefty(rot[i], v)) and lefty(rot[j], v):
                    ok = False
                    break
            if not ok:
                break
            for i in range(deg):
                j = (i + 1) % deg
                q = (dirs[j] - dirs[i]) % 4
                if cuts[v] == i:
                    q += 4
                total += q
                same = (g.edges[rot[i]][0] == v) == (g.edges[rot[j]][0] == v)
                if same:
                    if q % 2:
                        ok = False
                        break
                    x_vf[(v, i)] = q // 2
                    if q == 0:
                        zero_corners.append((v, i, rot[i], rot[j]))
                else:
                    if q % 2 == 0:
                        ok = False
                        break
                    x_vf[(v, i)] = (q - 1) // 2
            if not ok or total != 4:
                ok = False
                break
        if not ok:
            continue
        # condition 3'
        nf = len(emb.faces)
        b_f = [0] * nf
        for e in range(g.m):
            lf, rf = edge_faces[e]
            b_f[lf if convex_left[e] else rf] += 1
        a_f = [0] * nf
        io_f = [0] * nf
        for (v, i), x in x_vf.items():
            fi = emb.corner_face(v, i)
            a_f[fi] += x
            rot = emb.rotation[v]
            j = (i + 1) % len(rot)
            if (g.edges[rot[i]][0] == v) != (g.edges[rot[j]][0] == v):
                io_f[fi] += 1
        if any(
            2 * (b_f[fi] - a_f[fi]) != 2 * (-2 if fi == emb.outer_face else 2) + io_f[fi] - len(emb.faces[fi])
            for fi in range(nf)
        ):
            continue
        # condition 4 over all tail/head assignments
        if not zero_corners:
            return True
        edges_involved = sorted({e for (_, _, e1, e2) in zero_corners for e in (e1, e2)})
        found = False
        for bits in range(1 << g.m):
            assign = [(g.edges[e][0] if bits & (1 << e) else g.edges[e][1]) for e in range(g.m)]
            good = True
            for (v, i, e1, e2) in zero_corners:
                rot = emb.rotation[v]
                deg = len(rot)
                f1 = emb.corner_face(v, (i - 1) % deg)
                f2 = emb.corner_face(v, (i + 1) % deg)
                lf1, rf1 = edge_faces[e1]
                lf2, rf2 = edge_faces[e2]
                c1 = assign[e1] == v and (lf1 if convex_left[e1] else rf1) == f1
                c2 = assign[e2] == v and (lf2 if convex_left[e2] else rf2) == f2
                if not (c1 or c2):
                    good = False
                    break
            if good:
                found = True
                break
        if found:
            return True
    return False


# ----------------------------------------------------------------------
# Small-instance generators
# ----------------------------------------------------------------------


def generate_planar_st_graphs(max_n: int, min_n: int = 2) -> Iterator[DirectedGraph]:
    """All planar st-graphs with min_n..max_n vertices, labeled in
    topological order (every isomorphism class appears; verdict-relevant
    properties are label-invariant)."""
    for n in range(min_n, max_n + 1):
        yield from _generate_planar_st_graphs_n(n)


def _generate_planar_st_graphs_n(n: int, lo: int = 0, hi: Optional[int] = None) -> Iterator[DirectedGraph]:
    """Planar st-graphs on vertices 0..n-1 labeled in topological order,
    streamed from edge-set bitmasks in [lo, hi); mask ranges support
    partitioned parallel sweeps."""
    if n == 1:
        if lo == 0:
            yield DirectedGraph(1, [])
        return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    np_ = len(pairs)
    max_m = 3 * n - 6 if n >= 3 else 1
    col_mask = [0] * n
    row_mask = [0] * n
    for idx, (i, j) in enumerate(pairs):
        row_mask[i] |= 1 << idx
        col_mask[j] |= 1 << idx
    st_bit = 1 << pairs.index((0, n - 1)) if n >= 2 else 0
    if hi is None:
        hi = 1 << np_
    for mask in range(lo, hi):
        mc = mask.bit_count()
        limit = max_m if mask & st_bit else max_m - 1
        if mc < n - 1 or mc > limit:
            continue
        # unique source 0 and unique sink n-1
        ok = True
        for v in range(1, n):
            if not (mask & col_mask[v]):
                ok = False
                break
        if not ok or (mask & col_mask[0]):
            continue
        for v in range(n - 1):
            if not (mask & row_mask[v]):
                ok = False
                break
        if not ok or (mask & row_mask[n - 1]):
            continue
        edges = [pairs[i] for i in range(np_) if mask & (1 << i)]
        G = nx.Graph(edges)
        if not (mask & st_bit):
            G.add_edge(0, n - 1)
        if not nx.check_planarity(G)[0]:
            continue
        yield DirectedGraph(n, edges)


def random_planar_st_graph(n: int, rng, max_tries: int = 10_000) -> DirectedGraph:
    """Seeded rejection sampler for planar st-graphs with n vertices."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(max_tries):
        p = rng.uniform(1.6, 2.8) / n
        edges = [e for e in pairs if rng.random() < p]
        g_edges = set(edges)
        indeg = [0] * n
        outdeg = [0] * n
        for (u, v) in edges:
            outdeg[u] += 1
            indeg[v] += 1
        if any(indeg[v] == 0 for v in range(1, n)) or any(outdeg[v] == 0 for v in range(n - 1)):
            continue
        if indeg[0] or outdeg[n - 1]:
            continue
        G = nx.Graph(edges)
        G.add_edge(0, n - 1)
        if not nx.check_planarity(G)[0]:
            continue
        return DirectedGraph(n, sorted(g_edges))
    raise GraphError(f"failed to sample a planar st-graph with n={n}")


def random_series_parallel_st_graph(n: int, rng) -> DirectedGraph:
    """Seeded series-parallel st-graph with n vertices (simple digraph)."""
    if n < 2:
        raise GraphError("need n >= 2")
    edges: set[tuple[int, int]] = {(0, 1)}
    nxt = 2
    edge_list = [(0, 1)]
    while nxt < n:
        u, v = edge_list[rng.randrange(len(edge_list))]
        w = nxt
        nxt += 1
        if rng.random() < 0.5:
            # series: split the edge
            edges.discard((u, v))
            edge_list.remove((u, v))
            for e in ((u, w), (w, v)):
                edges.add(e)
                edge_list.append(e)
        else:
            # parallel path alongside the edge
            for e in ((u, w), (w, v)):
                edges.add(e)
                edge_list.append(e)
    # relabel topologically so vertex ids are a valid st-ordering
    g0 = DirectedGraph(n, sorted(edges))
    topo = g0.topological_order()
    assert topo is not None
    rank = {v: i for i, v in enumerate(topo)}
    edges2 = sorted((rank[u], rank[v]) for (u, v) in edges)
    return DirectedGraph(n, edges2)
