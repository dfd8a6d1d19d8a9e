"""Fixed-embedding, fixed-port feasibility of planar L-drawings.

Given a plane digraph and, per edge, the tail port (top/bottom) and head
port (left/right), decide whether a planar L-drawing realizes them.  The
pipeline follows four conditions over angle variables x_vf (corner angles in
multiples of pi, offset pi/2 at in/out corners) and per-edge convex-bend
assignments:

1. angles around every vertex sum to 2*pi;
2. every edge bends exactly once (structural for L-shapes);
3'. per face: (# convex bend sides) - (sum of x_vf) equals +-2 plus
    (# in/out corners - deg)/2, with -2 exactly on the outer face;
4. bend-or-end: every 0-angle same-orientation corner owns an adjacent
   convex bend assigned to its vertex, each bend assigned at most once.

The labels determine the corner angles with one exception: a vertex whose
ends all share one port and bend the same way leaves the position of its
2*pi corner free, so those wrap corners are enumerated (they are rare and
there are at most deg choices each).  Condition 4 is decided by
pre-assigning every non-middle edge of each port and matching ports with
two middle edges to leftover edges; that bipartite graph has maximum
degree 2, so a linear augmenting scan settles it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .embedding import PlaneEmbedding
from .graph import DirectedGraph, GraphError

PORTS_CW = ("top", "right", "bottom", "left")
_DIR = {"top": 0, "right": 1, "bottom": 2, "left": 3}  # clockwise from north

_WRAP_BUDGET = 4096


class EmbeddingInvalid(GraphError):
    pass


@dataclass(frozen=True)
class PortLabeling:
    """out(e) in {top, bottom}; in(e) in {left, right}; total over E."""

    out: tuple[str, ...]
    inn: tuple[str, ...]

    @staticmethod
    def from_maps(g: DirectedGraph, out: dict[int, str], inn: dict[int, str]) -> "PortLabeling":
        if set(out) != set(range(g.m)) or set(inn) != set(range(g.m)):
            raise GraphError("labels must cover every edge")
        if any(out[e] not in ("top", "bottom") for e in out):
            raise GraphError("out labels must be top or bottom")
        if any(inn[e] not in ("left", "right") for e in inn):
            raise GraphError("in labels must be left or right")
        return PortLabeling(tuple(out[e] for e in range(g.m)), tuple(inn[e] for e in range(g.m)))


@dataclass
class Infeasible:
    reason: str  # CyclicOrder | AngleSum | FaceEquation | DoubleAssignment | MatchingFail
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass
class AngleWitness:
    """Feasibility certificate: corner angles, convex bend sides, and the
    bend-or-end assignment."""

    x_vf: dict[tuple[int, int], int]  # (vertex, corner index) -> 0..2
    corner_face: dict[tuple[int, int], int]
    convex_left: tuple[bool, ...]  # per edge: convex side is the left face
    assignment: dict[int, int]  # edge -> vertex owning its bend
    middle_ports: list[tuple[int, str]]  # ports that had two middle edges
    outer_face: int = 0

    def __bool__(self) -> bool:
        return True


# ----------------------------------------------------------------------
# Port geometry helpers
# ----------------------------------------------------------------------


def end_port(g: DirectedGraph, labels: PortLabeling, e: int, v: int) -> str:
    u, w = g.edges[e]
    return labels.out[e] if v == u else labels.inn[e]


def bends_left(g: DirectedGraph, labels: PortLabeling, e: int, v: int) -> bool:
    """Handedness of the bend as seen from vertex v looking along its port."""
    u, w = g.edges[e]
    if v == u:  # tail: looking top/bottom, turn direction set by the head side
        if labels.out[e] == "top":
            return labels.inn[e] == "right"
        return labels.inn[e] == "left"
    if labels.inn[e] == "left":  # looking west; tail below means turning south
        return labels.out[e] == "top"
    return labels.out[e] == "bottom"


def convex_left_face(g: DirectedGraph, labels: PortLabeling, e: int) -> bool:
    """True when the edge's single bend is convex toward its left face.

    up-east and down-west shapes turn convex right; up-west and down-east
    convex left.
    """
    going_east = labels.inn[e] == "left"
    going_up = labels.out[e] == "top"
    return going_up != going_east


# ----------------------------------------------------------------------
# Per-vertex structure
# ----------------------------------------------------------------------


@dataclass
class _VertexInfo:
    rot: tuple[int, ...]
    dirs: list[int]  # direction index per rotation entry
    kinds: list[str]  # 'out' | 'in'
    lefty: list[bool]  # bend handedness per entry
    wrap_candidates: list[int]  # corner indices that may carry the 2*pi angle
    wrap_forced: Optional[int]  # None when ambiguous or no wrap needed


def _analyze_vertex(g, labels, emb, v) -> Optional[_VertexInfo]:
    rot = emb.rotation[v]
    deg = len(rot)
    if deg == 0:
        return _VertexInfo(rot, [], [], [], [], None)
    dirs, kinds, lefty = [], [], []
    for e in rot:
        port = end_port(g, labels, e, v)
        kind = "out" if g.edges[e][0] == v else "in"
        if (kind == "out") != (port in ("top", "bottom")):
            return None  # outgoing ends must use vertical ports
        dirs.append(_DIR[port])
        kinds.append(kind)
        lefty.append(bends_left(g, labels, e, v, ))
    # port blocks must be contiguous and clockwise in (T, R, B, L) order
    runs: list[int] = []
    for i in range(deg):
        if not runs or runs[-1] != dirs[i]:
            runs.append(dirs[i])
    if len(runs) > 1 and runs[0] == runs[-1]:
        runs.pop()
    if len(set(runs)) != len(runs):
        return None  # a port appears in two separate runs
    if len(runs) > 1:
        start = runs[0]
        seq = [(d - start) % 4 for d in runs]
        if seq != sorted(seq):
            return None  # ports out of clockwise order
    # within each port, left-benders must precede right-benders
    qsum = sum((dirs[(i + 1) % deg] - dirs[i]) % 4 for i in range(deg))
    if deg == 1:
        return _VertexInfo(rot, dirs, kinds, lefty, [0], 0)
    if qsum == 4:
        # block boundaries cut the cycle; check L*R* per block
        for i in range(deg):
            j = (i + 1) % deg
            if dirs[i] == dirs[j] and (not lefty[i]) and lefty[j]:
                return None  # right-bender before a left-bender inside a port
        return _VertexInfo(rot, dirs, kinds, lefty, [], None)
    if qsum != 0:
        return None  # angle sum around the vertex cannot reach 2*pi
    # single-port vertex: one corner carries 2*pi; valid cuts keep L*R*
    cand = [i for i in range(deg) if not (not lefty[i] and lefty[(i + 1) % deg])]
    if not cand:
        return None
    if len([i for i in range(deg) if not lefty[i] and lefty[(i + 1) % deg]]) > 1:
        return None  # more than one R->L boundary can never linearize
    forced = cand[0] if len(cand) == 1 else None
    return _VertexInfo(rot, dirs, kinds, lefty, cand, forced)


# ----------------------------------------------------------------------
# The decision procedure
# ----------------------------------------------------------------------


def check_port_feasibility(
    g: DirectedGraph, emb: PlaneEmbedding, labels: PortLabeling
) -> AngleWitness | Infeasible:
    if emb.graph is not g:
        if emb.graph.edges != g.edges or emb.graph.n != g.n:
            raise EmbeddingInvalid("embedding belongs to a different graph")
    infos: dict[int, _VertexInfo] = {}
    for v in range(g.n):
        info = _analyze_vertex(g, labels, emb, v)
        if info is None:
            return Infeasible("CyclicOrder", f"vertex {g.names[v]}")
        infos[v] = info

    ambiguous = [v for v in range(g.n) if infos[v].wrap_forced is None and infos[v].wrap_candidates]
    combos = 1
    for v in ambiguous:
        combos *= len(infos[v].wrap_candidates)
    if combos > _WRAP_BUDGET:
        # canonical cut for very large uniform fans; documented limitation
        ambiguous_iter = [[infos[v].wrap_candidates[0]] for v in ambiguous]
    else:
        ambiguous_iter = [infos[v].wrap_candidates for v in ambiguous]

    last: Infeasible | None = None
    for combo in itertools.product(*ambiguous_iter):
        wraps = {v: infos[v].wrap_forced for v in range(g.n) if infos[v].wrap_forced is not None}
        wraps.update({v: c for v, c in zip(ambiguous, combo)})
        out = _check_with_wraps(g, emb, labels, infos, wraps)
        if isinstance(out, AngleWitness):
            return out
        last = out
    return last if last is not None else Infeasible("CyclicOrder", "empty graph")


def _check_with_wraps(g, emb, labels, infos, wraps) -> AngleWitness | Infeasible:
    # corner angles in quarter turns; x_vf in multiples of pi
    x_vf: dict[tuple[int, int], int] = {}
    corner_face: dict[tuple[int, int], int] = {}
    for v in range(g.n):
        info = infos[v]
        deg = len(info.rot)
        total = 0
        for i in range(deg):
            j = (i + 1) % deg
            q = (info.dirs[j] - info.dirs[i]) % 4
            if wraps.get(v) == i:
                q += 4
            total += q
            same_kind = info.kinds[i] == info.kinds[j]
            if same_kind:
                if q % 2:
                    return Infeasible("AngleSum", f"odd same-orientation angle at {g.names[v]}")
                x = q // 2
            else:
                if q % 2 == 0:
                    return Infeasible("AngleSum", f"even in/out angle at {g.names[v]}")
                x = (q - 1) // 2
            x_vf[(v, i)] = x
            corner_face[(v, i)] = emb.corner_face(v, i)
        if deg and total != 4:
            return Infeasible("AngleSum", f"angles at {g.names[v]} sum to {total}*pi/2")

    convex_left = tuple(convex_left_face(g, labels, e) for e in range(g.m))

    # Condition 3' per face
    deg_f = [len(f) for f in emb.faces]
    b_f = [0] * len(emb.faces)
    for e in range(g.m):
        left_face, right_face = _edge_faces(emb, e)
        b_f[left_face if convex_left[e] else right_face] += 1
    a_f = [0] * len(emb.faces)
    io_f = [0] * len(emb.faces)
    for v in range(g.n):
        info = infos[v]
        for i in range(len(info.rot)):
            fi = corner_face[(v, i)]
            a_f[fi] += x_vf[(v, i)]
            if info.kinds[i] != info.kinds[(i + 1) % len(info.rot)]:
                io_f[fi] += 1
    for fi in range(len(emb.faces)):
        if (io_f[fi] - deg_f[fi]) % 2:
            raise EmbeddingInvalid(f"in/out parity broken on face {fi}")
        c = -2 if fi == emb.outer_face else 2
        if 2 * (b_f[fi] - a_f[fi]) != 2 * c + io_f[fi] - deg_f[fi]:
            return Infeasible("FaceEquation", f"face {fi}")

    # Condition 4: pre-assign non-middle edges, then match the middles
    assignment: dict[int, int] = {}
    port_middles: dict[tuple[int, str], list[int]] = {}
    for v in range(g.n):
        info = infos[v]
        for port, seq in _port_sequences(info, wraps.get(v)):
            left = [e for e in seq if info.lefty[info.rot.index(e)]]
            right = [e for e in seq if not info.lefty[info.rot.index(e)]]
            middles = ([left[-1]] if left else []) + ([right[0]] if right else [])
            for e in seq:
                if e in middles:
                    continue
                if e in assignment:
                    return Infeasible(
                        "DoubleAssignment", f"edge {g.names[g.edges[e][0]]}->{g.names[g.edges[e][1]]}"
                    )
                assignment[e] = v
            if len(middles) == 2:
                port_middles[(v, port)] = middles

    # bipartite matching: each two-middle port needs one of its middles
    match_edge: dict[tuple[int, str], int] = {}
    owner: dict[int, tuple[int, str]] = {}

    def try_assign(p, visited) -> bool:
        for e in port_middles[p]:
            if e in assignment or e in visited:
                continue
            visited.add(e)
            if e not in owner or try_assign(owner[e], visited):
                owner[e] = p
                match_edge[p] = e
                return True
        return False

    for p in sorted(port_middles):
        if not try_assign(p, set()):
            return Infeasible("MatchingFail", f"port {p[1]} of {g.names[p[0]]}")
    for p, e in match_edge.items():
        assignment[e] = p[0]

    return AngleWitness(
        x_vf, corner_face, convex_left, assignment, sorted(port_middles), emb.outer_face
    )


def _edge_faces(emb: PlaneEmbedding, e: int) -> tuple[int, int]:
    left = right = -1
    for fi, face in enumerate(emb.faces):
        for d in face:
            if d[0] == e:
                if d[1] == 0:
                    left = fi
                else:
                    right = fi
    return left, right


def _port_sequences(info: _VertexInfo, wrap: Optional[int]):
    """Linear edge sequences per port, cut at block boundaries or at the
    wrap corner for single-port vertices."""
    deg = len(info.rot)
    if deg == 0:
        return
    if wrap is not None:
        start = (wrap + 1) % deg
        order = [(start + k) % deg for k in range(deg)]
        yield (PORTS_CW[info.dirs[0]], [info.rot[i] for i in order])
        return
    # multi-port: split at direction changes
    starts = [i for i in range(deg) if info.dirs[i] != info.dirs[(i - 1) % deg]]
    for si, s in enumerate(starts):
        end = starts[(si + 1) % len(starts)]
        seq = []
        i = s
        while True:
            seq.append(info.rot[i])
            i = (i + 1) % deg
            if i == end:
                break
        yield (PORTS_CW[info.dirs[s]], seq)


# ----------------------------------------------------------------------
# Defense in depth: re-verify a witness from scratch
# ----------------------------------------------------------------------


def witness_to_partial_drawing_check(
    g: DirectedGraph, emb: PlaneEmbedding, labels: PortLabeling, w: AngleWitness
) -> bool:
    """Re-verify Conditions 1, 2, 3' and 4 directly from the witness."""
    # condition 2: every edge has exactly one convex side recorded
    if len(w.convex_left) != g.m:
        return False
    # condition 1
    for v in range(g.n):
        rot = emb.rotation[v]
        deg = len(rot)
        if deg == 0:
            continue
        total = 0
        for i in range(deg):
            j = (i + 1) % deg
            e1, e2 = rot[i], rot[j]
            k1 = "out" if g.edges[e1][0] == v else "in"
            k2 = "out" if g.edges[e2][0] == v else "in"
            x = w.x_vf.get((v, i))
            if x is None or not 0 <= x <= 2:
                return False
            total += 2 * x + (0 if k1 == k2 else 1)
        if total != 8:  # 2*pi in quarter turns
            return False
    # condition 3'
    deg_f = [len(f) for f in emb.faces]
    b_f = [0] * len(emb.faces)
    for e in range(g.m):
        lf, rf = _edge_faces(emb, e)
        b_f[lf if w.convex_left[e] else rf] += 1
    a_f = [0] * len(emb.faces)
    io_f = [0] * len(emb.faces)
    for (v, i), x in w.x_vf.items():
        fi = w.corner_face[(v, i)]
        a_f[fi] += x
        rot = emb.rotation[v]
        j = (i + 1) % len(rot)
        k1 = "out" if g.edges[rot[i]][0] == v else "in"
        k2 = "out" if g.edges[rot[j]][0] == v else "in"
        if k1 != k2:
            io_f[fi] += 1
    for fi in range(len(emb.faces)):
        c = -2 if fi == w.outer_face else 2
        if 2 * (b_f[fi] - a_f[fi]) != 2 * c + io_f[fi] - deg_f[fi]:
            return False
    # condition 4 with property (a)
    owners: dict[int, int] = {}
    for e, v in w.assignment.items():
        if e in owners:
            return False
        owners[e] = v
    for v in range(g.n):
        rot = emb.rotation[v]
        deg = len(rot)
        for i in range(deg):
            j = (i + 1) % deg
            e1, e2 = rot[i], rot[j]
            k1 = "out" if g.edges[e1][0] == v else "in"
            k2 = "out" if g.edges[e2][0] == v else "in"
            if k1 != k2 or w.x_vf.get((v, i), 0) >= 1:
                continue
            if deg == 1:
                continue
            cov1 = w.assignment.get(e1) == v and _convex_at(g, emb, w, e1, v, before=True, corner=i)
            cov2 = w.assignment.get(e2) == v and _convex_at(g, emb, w, e2, v, before=False, corner=i)
            if not (cov1 or cov2):
                return False
    return True


def _convex_at(g, emb, w, e, v, before: bool, corner: int) -> bool:
    """The bend of e is convex in the face on the far side of e from the
    0-angle corner (clockwise-previous face for the earlier edge, next for
    the later one)."""
    rot = emb.rotation[v]
    deg = len(rot)
    i = corner if before else (corner + 1) % deg
    far_corner = (i - 1) % deg if before else i
    fi = w.corner_face.get((v, far_corner))
    lf, rf = _edge_faces(emb, e)
    convex_face = lf if w.convex_left[e] else rf
    return fi == convex_face


# ----------------------------------------------------------------------
# Label file format:  e <u> <v> out=<top|bottom> in=<left|right>
# ----------------------------------------------------------------------


def parse_labels_text(text: str, g: DirectedGraph) -> PortLabeling:
    ids = {nm: i for i, nm in enumerate(g.names)}
    out: dict[int, str] = {}
    inn: dict[int, str] = {}
    for lno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5 or parts[0] != "e":
            raise GraphError(f"line {lno}: expected 'e <u> <v> out=<port> in=<port>'")
        u, v = parts[1], parts[2]
        if u not in ids or v not in ids:
            raise GraphError(f"line {lno}: unknown vertex")
        e = g.edge_id(ids[u], ids[v])
        kv = dict(p.split("=", 1) for p in parts[3:])
        if set(kv) != {"out", "in"}:
            raise GraphError(f"line {lno}: need out= and in=")
        out[e] = kv["out"]
        inn[e] = kv["in"]
    return PortLabeling.from_maps(g, out, inn)


def format_labels_text(g: DirectedGraph, labels: PortLabeling) -> str:
    lines = []
    for e, (u, v) in enumerate(g.edges):
        lines.append(f"e {g.names[u]} {g.names[v]} out={labels.out[e]} in={labels.inn[e]}")
    return "\n".join(lines) + "\n"
