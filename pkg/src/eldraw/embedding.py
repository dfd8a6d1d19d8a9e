"""Combinatorial plane embeddings: rotation systems, faces, successor lists.

Conventions (fixed for the whole package, documented in README):

* Rotations are stored in CLOCKWISE order as drawn on screen with y up.
* At a bimodal vertex of an upward embedding the clockwise rotation reads
  [outgoing edges left-to-right] ++ [incoming edges right-to-left], so the
  successor list equals the outgoing block in clockwise order.
* Faces are orbits of darts (edge, direction); the corner between two
  clockwise-consecutive edges at a vertex belongs to exactly one face.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import DirectedGraph, GraphError

# A dart is (edge_id, dir); dir 0 traverses tail->head, 1 traverses head->tail.
Dart = tuple[int, int]


class EmbeddingError(GraphError):
    pass


class NotBimodalAtVertex(EmbeddingError):
    def __init__(self, v: int) -> None:
        super().__init__(f"outgoing edges not contiguous in rotation at vertex {v}")
        self.vertex = v


def dart_head(g: DirectedGraph, d: Dart) -> int:
    u, v = g.edges[d[0]]
    return v if d[1] == 0 else u


def dart_tail(g: DirectedGraph, d: Dart) -> int:
    u, v = g.edges[d[0]]
    return u if d[1] == 0 else v


def trace_faces(g: DirectedGraph, rotation: Sequence[Sequence[int]]) -> list[tuple[Dart, ...]]:
    """Face orbits of a rotation system.

    The successor of dart d arriving at w via edge e is the dart leaving w
    along the edge following e in clockwise order at w.  Each dart lies on
    exactly one face, so each edge appears exactly twice over all faces.
    """
    pos: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for v in range(g.n):
        for i, e in enumerate(rotation[v]):
            if e in pos[v]:
                raise EmbeddingError(f"edge {e} repeated in rotation at {v}")
            pos[v][e] = i
    for v in range(g.n):
        inc = set(g.out_edges(v)) | set(g.in_edges(v))
        if set(pos[v]) != inc:
            raise EmbeddingError(f"rotation at {v} does not list its incident edges")

    faces: list[tuple[Dart, ...]] = []
    seen: set[Dart] = set()
    for e0 in range(g.m):
        for d0 in ((e0, 0), (e0, 1)):
            if d0 in seen:
                continue
            face: list[Dart] = []
            d = d0
            while True:
                face.append(d)
                seen.add(d)
                w = dart_head(g, d)
                rot = rotation[w]
                i = pos[w][d[0]]
                e2 = rot[(i + 1) % len(rot)]
                u2, v2 = g.edges[e2]
                d = (e2, 0 if u2 == w else 1)
                if d == d0:
                    break
            faces.append(tuple(face))
    return faces


class PlaneEmbedding:
    """Rotation system plus outer-face designation, with derived faces."""

    __slots__ = ("graph", "rotation", "faces", "outer_face", "_corner_face")

    def __init__(
        self,
        graph: DirectedGraph,
        rotation: Sequence[Sequence[int]],
        outer_face: Optional[int] = None,
        faces: Optional[list[tuple[Dart, ...]]] = None,
        check_euler: bool = True,
    ) -> None:
        self.graph = graph
        self.rotation = tuple(tuple(r) for r in rotation)
        self.faces = tuple(faces if faces is not None else trace_faces(graph, rotation))
        if check_euler and graph.n > 0 and graph.is_weakly_connected():
            if graph.n - graph.m + len(self.faces) != 2:
                raise EmbeddingError(
                    f"rotation system is not planar: V-E+F = "
                    f"{graph.n}-{graph.m}+{len(self.faces)} != 2"
                )
        if outer_face is None:
            outer_face = 0 if self.faces else -1
        self.outer_face = outer_face
        # corner (v, i) = gap after rotation[v][i], clockwise
        corner_face: dict[tuple[int, int], int] = {}
        pos: list[dict[int, int]] = [dict() for _ in range(graph.n)]
        for v in range(graph.n):
            for i, e in enumerate(self.rotation[v]):
                pos[v][e] = i
        for fi, face in enumerate(self.faces):
            for d in face:
                w = dart_head(graph, d)
                i = pos[w][d[0]]
                corner_face[(w, i)] = fi
        self._corner_face = corner_face

    # ------------------------------------------------------------------

    def corner_face(self, v: int, i: int) -> int:
        """Face owning the gap after rotation[v][i] (clockwise)."""
        return self._corner_face[(v, i)]

    def face_vertices(self, fi: int) -> list[int]:
        return [dart_tail(self.graph, d) for d in self.faces[fi]]

    def faces_of_edge(self, e: int) -> tuple[int, int]:
        """(face on dart (e,0), face on dart (e,1))."""
        a = b = -1
        for fi, face in enumerate(self.faces):
            for d in face:
                if d[0] == e:
                    if d[1] == 0:
                        a = fi
                    else:
                        b = fi
        return a, b

    def mirror(self) -> "PlaneEmbedding":
        """Reflection: all rotations reversed; outer face re-identified."""
        rot = [tuple(reversed(r)) for r in self.rotation]
        faces = trace_faces(self.graph, rot)
        # the mirrored outer face has the reversed dart cycle
        target = frozenset((e, 1 - d) for (e, d) in self.faces[self.outer_face])
        outer = 0
        for fi, f in enumerate(faces):
            if frozenset(f) == target:
                outer = fi
                break
        return PlaneEmbedding(self.graph, rot, outer, faces)

    def canonical_key(self) -> tuple:
        """Hashable identity: normalized rotations + outer face darts."""
        rots = []
        for r in self.rotation:
            if not r:
                rots.append(())
                continue
            k = r.index(min(r))
            rots.append(r[k:] + r[:k])
        return (tuple(rots), frozenset(self.faces[self.outer_face]))


# ----------------------------------------------------------------------
# st-orderings and successor lists
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StOrdering:
    """Bijection vertex -> rank in 1..n, increasing along every edge."""

    pi: tuple[int, ...]

    def rank(self, v: int) -> int:
        return self.pi[v]

    @staticmethod
    def from_order(order: Sequence[int]) -> "StOrdering":
        pi = [0] * len(order)
        for r, v in enumerate(order, start=1):
            pi[v] = r
        return StOrdering(tuple(pi))

    def validate(self, g: DirectedGraph) -> bool:
        if sorted(self.pi) != list(range(1, g.n + 1)):
            return False
        return all(self.pi[u] < self.pi[v] for (u, v) in g.edges)


@dataclass(frozen=True)
class SuccessorList:
    owner: int
    succs: tuple[int, ...]


def successor_list(emb: PlaneEmbedding, v: int) -> SuccessorList:
    """Out-neighbors of v in left-to-right order under the embedding.

    Requires bimodality at v; for the source (no incoming edges) the list is
    linearized at v's outer-face corner, which puts the leftmost successor
    first.
    """
    g = emb.graph
    rot = emb.rotation[v]
    out_set = set(g.out_edges(v))
    if not out_set:
        return SuccessorList(v, ())
    deg = len(rot)
    if len(out_set) == deg:
        # source-like vertex: cut the cycle at its outer-face corner
        start = None
        for i in range(deg):
            if emb.corner_face(v, i) == emb.outer_face:
                start = (i + 1) % deg
                break
        if start is None:
            raise EmbeddingError(f"vertex {v} has no corner on the outer face")
        order = [rot[(start + j) % deg] for j in range(deg)]
    else:
        # find the first outgoing edge after an incoming one
        start = None
        for i in range(deg):
            if rot[i] in out_set and rot[(i - 1) % deg] not in out_set:
                if start is not None:
                    raise NotBimodalAtVertex(v)
                start = i
        if start is None:
            raise NotBimodalAtVertex(v)
        order = [rot[(start + j) % deg] for j in range(len(out_set))]
        if any(e not in out_set for e in order):
            raise NotBimodalAtVertex(v)
    return SuccessorList(v, tuple(g.edges[e][1] for e in order))


def is_bitonic_ranks(ranks: Sequence[int]) -> bool:
    """True iff the sequence increases strictly then decreases strictly.

    Equivalent to having no interior local minimum (all values distinct).
    """
    for i in range(1, len(ranks) - 1):
        if ranks[i] < ranks[i - 1] and ranks[i] < ranks[i + 1]:
            return False
    # exclude plateaus explicitly; ranks are distinct in valid orderings
    return all(ranks[i] != ranks[i + 1] for i in range(len(ranks) - 1))


def is_monotone_decreasing_ranks(ranks: Sequence[int]) -> bool:
    return all(ranks[i] > ranks[i + 1] for i in range(len(ranks) - 1))


def is_bitonic_list(l: SuccessorList, pi: StOrdering) -> bool:
    return is_bitonic_ranks([pi.rank(v) for v in l.succs])


def is_monotone_decreasing_list(l: SuccessorList, pi: StOrdering) -> bool:
    return is_monotone_decreasing_ranks([pi.rank(v) for v in l.succs])


@dataclass(frozen=True)
class BitonicPair:
    """An upward-planar embedding plus an st-ordering making every successor
    list bitonic."""

    embedding: PlaneEmbedding
    pi: StOrdering

    def validate(self) -> bool:
        g = self.embedding.graph
        if not self.pi.validate(g):
            return False
        return all(
            is_bitonic_list(successor_list(self.embedding, v), self.pi) for v in range(g.n)
        )


@dataclass(frozen=True)
class MonotonePair:
    """An upward-planar embedding plus an st-ordering making every successor
    list monotonically decreasing."""

    embedding: PlaneEmbedding
    pi: StOrdering

    def validate(self) -> bool:
        g = self.embedding.graph
        if not self.pi.validate(g):
            return False
        return all(
            is_monotone_decreasing_list(successor_list(self.embedding, v), self.pi)
            for v in range(g.n)
        )


def modality(emb: PlaneEmbedding, v: int) -> int:
    """Number of alternating in/out pairs in the cyclic rotation at v."""
    g = emb.graph
    rot = emb.rotation[v]
    if len(rot) <= 1:
        return 0
    out_set = set(g.out_edges(v))
    k = 0
    for i in range(len(rot)):
        a = rot[i] in out_set
        b = rot[(i + 1) % len(rot)] in out_set
        if a != b:
            k += 1
    return k


# ----------------------------------------------------------------------
# Serialization (structured text)
# ----------------------------------------------------------------------


def format_embedding_text(emb: PlaneEmbedding, name: str = "g") -> str:
    g = emb.graph

    def etok(e: int) -> str:
        u, v = g.edges[e]
        return f"{g.names[u]}->{g.names[v]}"

    lines = [f"embedding {name}"]
    for v in range(g.n):
        lines.append(f"vertex {g.names[v]}: " + " ".join(etok(e) for e in emb.rotation[v]))
    outer = " ".join(
        (etok(d[0]) if d[1] == 0 else f"{etok(d[0])}(rev)") for d in emb.faces[emb.outer_face]
    )
    lines.append(f"outer: {outer}")
    return "\n".join(lines) + "\n"


def parse_embedding_text(text: str, g: DirectedGraph) -> PlaneEmbedding:
    name_ids = {nm: i for i, nm in enumerate(g.names)}

    def eid(tok: str) -> tuple[int, int]:
        rev = tok.endswith("(rev)")
        if rev:
            tok = tok[: -len("(rev)")]
        if "->" not in tok:
            raise EmbeddingError(f"bad edge token {tok!r}")
        a, b = tok.split("->", 1)
        if a not in name_ids or b not in name_ids:
            raise EmbeddingError(f"unknown vertex in edge token {tok!r}")
        return g.edge_id(name_ids[a], name_ids[b]), 1 if rev else 0

    rotation: list[list[int]] = [[] for _ in range(g.n)]
    outer_darts: Optional[tuple[Dart, ...]] = None
    header_seen = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if not line.startswith("embedding "):
                raise EmbeddingError("expected 'embedding <name>' header")
            header_seen = True
            continue
        if line.startswith("vertex "):
            head, rest = line[len("vertex "):].split(":", 1)
            v = name_ids.get(head.strip())
            if v is None:
                raise EmbeddingError(f"unknown vertex {head.strip()!r}")
            rotation[v] = [eid(t)[0] for t in rest.split()]
        elif line.startswith("outer:"):
            outer_darts = tuple(eid(t) for t in line[len("outer:"):].split())
        else:
            raise EmbeddingError(f"unrecognized line {line!r}")
    faces = trace_faces(g, rotation)
    outer = 0
    if outer_darts is not None:
        target = frozenset(outer_darts)
        for fi, f in enumerate(faces):
            if frozenset(f) == target:
                outer = fi
                break
        else:
            raise EmbeddingError("outer face does not match any face of the rotation system")
    return PlaneEmbedding(g, rotation, outer, faces)
