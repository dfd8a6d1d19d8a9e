"""Integer-coordinate L-drawings: construction, validation, extraction.

An L-drawing assigns each vertex exclusive integer x- and y-coordinates;
edge (u,v) is the vertical segment at x(u) from y(u) to y(v) followed by the
horizontal segment at y(v) from x(u) to x(v).  Overlapping collinear
subsegments are legal; a horizontal and a vertical segment of different
edges crossing at a point interior to both is not (contacts at segment
endpoints resolve as rounded bend junctions).  All predicates use exact
integer arithmetic.

The upward construction turns a bitonic pair into a drawing: y-coordinates
are the st-ordering, x-coordinates a linear extension of a precedence order
built by scanning vertices in rank order and sandwiching each new vertex
between its two precedence-largest predecessors, with a helper edge from a
contour neighbor supplying a second predecessor where needed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .embedding import (
    BitonicPair,
    MonotonePair,
    PlaneEmbedding,
    StOrdering,
    successor_list,
    trace_faces,
)
from .graph import DirectedGraph, GraphError, validate_st_graph


class InvalidPair(GraphError):
    pass


class InvalidDrawing(GraphError):
    pass


@dataclass(frozen=True)
class LDrawing:
    coords: tuple[tuple[int, int], ...]  # vertex id -> (x, y)

    def x(self, v: int) -> int:
        return self.coords[v][0]

    def y(self, v: int) -> int:
        return self.coords[v][1]

    def out_port(self, g: DirectedGraph, e: int) -> str:
        u, v = g.edges[e]
        return "top" if self.y(v) > self.y(u) else "bottom"

    def in_port(self, g: DirectedGraph, e: int) -> str:
        u, v = g.edges[e]
        return "left" if self.x(u) < self.x(v) else "right"

    def segments(self, g: DirectedGraph, e: int) -> tuple[tuple, tuple]:
        """((x, y_lo, y_hi) vertical, (y, x_lo, x_hi) horizontal)."""
        u, v = g.edges[e]
        xu, yu = self.coords[u]
        xv, yv = self.coords[v]
        vert = (xu, min(yu, yv), max(yu, yv))
        horiz = (yv, min(xu, xv), max(xu, xv))
        return vert, horiz


@dataclass
class Violation:
    kind: str  # coords | crossing | through-vertex | not-upward | not-rightward
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_ldrawing(
    g: DirectedGraph, d: LDrawing, upward: bool = False, rightward: bool = False
) -> ValidationReport:
    rep = ValidationReport()
    n = g.n
    if len(d.coords) != n:
        rep.violations.append(Violation("coords", f"{len(d.coords)} coordinates for {n} vertices"))
        return rep
    xs = [d.x(v) for v in range(n)]
    ys = [d.y(v) for v in range(n)]
    if any(not isinstance(c, int) for xy in d.coords for c in xy):
        rep.violations.append(Violation("coords", "coordinates must be integers"))
    if len(set(xs)) != n:
        rep.violations.append(Violation("coords", "duplicate x-coordinate"))
    if len(set(ys)) != n:
        rep.violations.append(Violation("coords", "duplicate y-coordinate"))
    if rep.violations:
        return rep

    segs = [d.segments(g, e) for e in range(g.m)]

    # segments through non-endpoint vertices
    for w in range(n):
        xw, yw = d.coords[w]
        for e in range(g.m):
            u, v = g.edges[e]
            if w == u or w == v:
                continue
            (vx, vy0, vy1), (hy, hx0, hx1) = segs[e]
            if vx == xw and vy0 <= yw <= vy1:
                rep.violations.append(
                    Violation("through-vertex", f"vertical of edge {_ename(g, e)} passes vertex {g.names[w]}")
                )
            if hy == yw and hx0 <= xw <= hx1:
                rep.violations.append(
                    Violation("through-vertex", f"horizontal of edge {_ename(g, e)} passes vertex {g.names[w]}")
                )

    # proper crossings: a vertical and a horizontal of different edges
    # intersecting at a point interior to both
    for e1 in range(g.m):
        (vx, vy0, vy1), _ = segs[e1]
        for e2 in range(g.m):
            if e1 == e2:
                continue
            _, (hy, hx0, hx1) = segs[e2]
            if hx0 < vx < hx1 and vy0 < hy < vy1:
                rep.violations.append(
                    Violation("crossing", f"edges {_ename(g, e1)} and {_ename(g, e2)} cross at ({vx},{hy})")
                )

    if upward:
        for e, (u, v) in enumerate(g.edges):
            if not d.y(u) < d.y(v):
                rep.violations.append(Violation("not-upward", f"edge {_ename(g, e)}"))
    if rightward:
        for e, (u, v) in enumerate(g.edges):
            if not d.x(u) < d.x(v):
                rep.violations.append(Violation("not-rightward", f"edge {_ename(g, e)}"))
    return rep


def _ename(g: DirectedGraph, e: int) -> str:
    u, v = g.edges[e]
    return f"{g.names[u]}->{g.names[v]}"


# ----------------------------------------------------------------------
# Kandinsky conditions
# ----------------------------------------------------------------------

_PORT_DIR = {"top": (0, 1), "bottom": (0, -1), "left": (-1, 0), "right": (1, 0)}


def check_kandinsky_port_pattern(ends: dict[int, list[tuple[str, str]]]) -> bool:
    """Check the one-bend Kandinsky angle conditions on raw port usage.

    `ends` maps a vertex to its incident edge-ends as (kind, port) with kind
    'out' or 'in'.  Angles follow from port directions alone: between two
    same-kind ends the angle must be 0 or pi (parallel ports), between an
    incoming and an outgoing end pi/2 or 3pi/2 (perpendicular ports).
    """
    for v, lst in ends.items():
        for i in range(len(lst)):
            for j in range(i + 1, len(lst)):
                (k1, p1), (k2, p2) = lst[i], lst[j]
                d1, d2 = _PORT_DIR[p1], _PORT_DIR[p2]
                dot = d1[0] * d2[0] + d1[1] * d2[1]
                if k1 == k2 and dot == 0:
                    return False  # same orientation at a right angle
                if k1 != k2 and dot != 0:
                    return False  # in/out parallel or antiparallel
    return True


def check_kandinsky_conditions(g: DirectedGraph, d: LDrawing) -> bool:
    """One bend per edge plus the angle conditions, from the drawing's port
    usage.  Every L-shape bends exactly once (coordinates are exclusive), so
    the bend condition is structural; the angle conditions reduce to
    outgoing ends using vertical ports and incoming ends horizontal ones.
    """
    if not validate_ldrawing(g, d).ok:
        raise InvalidDrawing("drawing fails validation")
    ends: dict[int, list[tuple[str, str]]] = {v: [] for v in range(g.n)}
    for e, (u, v) in enumerate(g.edges):
        ends[u].append(("out", d.out_port(g, e)))
        ends[v].append(("in", d.in_port(g, e)))
    return check_kandinsky_port_pattern(ends)


# ----------------------------------------------------------------------
# Construction (bitonic/monotone pair -> drawing)
# ----------------------------------------------------------------------


def construct_upward_ldrawing(g: DirectedGraph, pair: BitonicPair) -> LDrawing:
    if not pair.validate():
        raise InvalidPair("not a valid bitonic pair of this graph")
    return _construct(g, pair, monotone=False)


def construct_upward_rightward_ldrawing(g: DirectedGraph, pair: MonotonePair) -> LDrawing:
    if not pair.validate():
        raise InvalidPair("not a valid monotonically decreasing pair of this graph")
    return _construct(g, pair, monotone=True)


def _construct(g: DirectedGraph, pair, monotone: bool) -> LDrawing:
    n = g.n
    if n == 1:
        return LDrawing(((1, 1),))
    pi = pair.pi
    emb = pair.embedding
    order = sorted(range(n), key=pi.rank)
    succ_lists = {v: successor_list(emb, v).succs for v in range(n)}

    # sentinels: LO on the left, HI on the right of the initial triangle
    LO, HI = n, n + 1
    prec_edges: set[tuple[int, int]] = {(LO, order[0]), (order[0], HI)}
    contour: list[int] = [LO, order[0], HI]

    for v in order[1:]:
        on_contour = set(contour)
        preds_set = set(g.in_neighbors(v))
        if not preds_set <= on_contour:
            raise InvalidPair(f"a predecessor of {g.names[v]} left the contour")
        preds = sorted(preds_set, key=contour.index)
        if monotone or len(preds) == 1:
            u1 = preds[0]
            lst = succ_lists[u1]
            apex = max(lst, key=pi.rank)
            if lst.index(apex) <= lst.index(v):
                tail = contour[contour.index(preds[-1]) + 1]  # right neighbor
            else:
                tail = contour[contour.index(u1) - 1]  # left neighbor
            preds = sorted(set(preds) | {tail}, key=contour.index)
        # the stretch from the first to the last predecessor is covered;
        # vertices interleaved between them drop off the contour
        lo_i = contour.index(preds[0])
        hi_i = contour.index(preds[-1])
        prec_edges.add((preds[-2], v))
        prec_edges.add((v, preds[-1]))
        contour[lo_i:hi_i + 1] = [preds[0], v, preds[-1]]

    # x-coordinates: any linear extension of the precedence order
    succ: dict[int, list[int]] = {v: [] for v in range(n + 2)}
    indeg = {v: 0 for v in range(n + 2)}
    for (a, b) in sorted(prec_edges):
        succ[a].append(b)
        indeg[b] += 1
    heap = [v for v in range(n + 2) if indeg[v] == 0]
    heapq.heapify(heap)
    xorder: list[int] = []
    while heap:
        a = heapq.heappop(heap)
        xorder.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    assert len(xorder) == n + 2, "precedence order became cyclic"
    xs = [a for a in xorder if a < n]
    coords = [(0, 0)] * n
    for x, v in enumerate(xs, start=1):
        coords[v] = (x, pi.rank(v))
    return LDrawing(tuple(coords))


# ----------------------------------------------------------------------
# Extraction (drawing -> pair)
# ----------------------------------------------------------------------


def drawing_rotation(g: DirectedGraph, d: LDrawing) -> list[list[int]]:
    """Clockwise rotation system induced by an upward L-drawing.

    Outgoing edges occupy the top port left-to-right: left-goers by
    ascending head height (lower bends nest further left), then right-goers
    by descending head height.  Incoming edges enter left-to-right by
    ascending tail x.  Clockwise order is then outs l2r followed by ins r2l.
    """
    rot: list[list[int]] = []
    for v in range(g.n):
        outs = list(g.out_edges(v))
        left = sorted((e for e in outs if d.x(g.edges[e][1]) < d.x(v)), key=lambda e: d.y(g.edges[e][1]))
        right = sorted((e for e in outs if d.x(g.edges[e][1]) > d.x(v)), key=lambda e: -d.y(g.edges[e][1]))
        out_l2r = left + right
        in_l2r = sorted(g.in_edges(v), key=lambda e: d.x(g.edges[e][0]))
        rot.append(out_l2r + list(reversed(in_l2r)))
    return rot


def drawing_to_embedding(g: DirectedGraph, d: LDrawing) -> PlaneEmbedding:
    """The plane embedding induced by a valid upward L-drawing; the outer
    face is the region below the source."""
    rot = drawing_rotation(g, d)
    faces = trace_faces(g, rot)
    emb0 = PlaneEmbedding(g, rot, 0, faces)
    rep = validate_st_graph(g)
    s = rep.source if rep.source is not None else min(range(g.n), key=d.y)
    outer = emb0.corner_face(s, len(rot[s]) - 1)
    return PlaneEmbedding(g, rot, outer, faces)


def extract_bitonic_pair(g: DirectedGraph, d: LDrawing) -> BitonicPair:
    """Read a bitonic pair off an upward-planar L-drawing: the st-ordering
    from y-ranks and the embedding from the drawing's rotations."""
    rep = validate_ldrawing(g, d, upward=True)
    if not rep.ok:
        raise InvalidDrawing("; ".join(v.detail for v in rep.violations))
    emb = drawing_to_embedding(g, d)
    order = sorted(range(g.n), key=d.y)
    pi = StOrdering.from_order(order)
    pair = BitonicPair(emb, pi)
    if not pair.validate():
        raise InvalidDrawing("drawing does not induce a bitonic pair")
    return pair


# ----------------------------------------------------------------------
# Drawing text format
# ----------------------------------------------------------------------


def format_drawing_text(g: DirectedGraph, d: LDrawing, name: str = "g") -> str:
    lines = [f"ldrawing {name}"]
    for v in range(g.n):
        lines.append(f"v {g.names[v]} {d.x(v)} {d.y(v)}")
    for (u, v) in g.edges:
        lines.append(f"e {g.names[u]} {g.names[v]}")
    return "\n".join(lines) + "\n"


def parse_drawing_text(text: str, g: Optional[DirectedGraph] = None) -> tuple[DirectedGraph, LDrawing]:
    """Parse a drawing file; edge lines make it self-contained, otherwise
    the graph must be supplied."""
    name_coords: dict[str, tuple[int, int]] = {}
    edge_names: list[tuple[str, str]] = []
    header = False
    for lno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header:
            if not line.startswith("ldrawing"):
                raise InvalidDrawing(f"line {lno}: expected 'ldrawing <name>' header")
            header = True
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 4:
            try:
                name_coords[parts[1]] = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise InvalidDrawing(f"line {lno}: coordinates must be integers")
        elif parts[0] == "e" and len(parts) == 3:
            edge_names.append((parts[1], parts[2]))
        else:
            raise InvalidDrawing(f"line {lno}: unrecognized line {line!r}")
    if g is None:
        names = sorted(name_coords)
        ids = {nm: i for i, nm in enumerate(names)}
        try:
            edges = [(ids[u], ids[v]) for (u, v) in edge_names]
        except KeyError as exc:
            raise InvalidDrawing(f"edge references unknown vertex {exc}")
        g = DirectedGraph(len(names), edges, names)
    missing = [nm for nm in g.names if nm not in name_coords]
    if missing:
        raise InvalidDrawing(f"missing coordinates for {missing}")
    coords = tuple(name_coords[nm] for nm in g.names)
    return g, LDrawing(coords)
