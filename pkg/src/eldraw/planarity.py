"""Planarity testing, combinatorial embeddings, and upward embeddings.

The planarity kernel delegates to networkx's left-right planarity test; the
rotation systems it produces are wrapped into :class:`PlaneEmbedding` with
antiparallel edge pairs (digons) re-expanded, since the underlying undirected
graph collapses them.  Non-planar inputs yield a Kuratowski witness obtained
by edge-deletion minimization: an edge-minimal non-planar subgraph is exactly
a subdivision of K5 or K3,3.
"""

from __future__ import annotations

from typing import Optional

import networkx as nx

from .embedding import PlaneEmbedding, trace_faces
from .graph import DirectedGraph, GraphError, validate_st_graph


class NotPlanar(GraphError):
    def __init__(self, witness: frozenset[int]) -> None:
        super().__init__(f"graph is not planar; Kuratowski witness has {len(witness)} edges")
        self.witness = witness


class NoUpwardEmbedding(GraphError):
    pass


def _underlying(g: DirectedGraph, keep: Optional[set[int]] = None) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    for eid, (u, v) in enumerate(g.edges):
        if keep is not None and eid not in keep:
            continue
        G.add_edge(u, v)
    return G


def is_planar(g: DirectedGraph) -> bool:
    # antiparallel pairs collapse; parallel edges never affect planarity
    return nx.check_planarity(_underlying(g))[0]


def kuratowski_witness(g: DirectedGraph) -> frozenset[int]:
    """Edge ids of a K5/K3,3 subdivision inside a non-planar graph.

    Deletes edges one at a time, keeping the deletion whenever the rest stays
    non-planar; what survives is edge-minimal, hence a Kuratowski subdivision.
    Antiparallel partners are redundant for planarity and dropped first.
    """
    if is_planar(g):
        raise GraphError("graph is planar; no witness exists")
    keep = set(range(g.m))
    seen_pairs: set[frozenset[int]] = set()
    for eid, (u, v) in enumerate(g.edges):
        pair = frozenset((u, v))
        if pair in seen_pairs:
            keep.discard(eid)
        seen_pairs.add(pair)
    for eid in sorted(keep):
        trial = keep - {eid}
        if not nx.check_planarity(_underlying(g, trial))[0]:
            keep = trial
    return frozenset(keep)


def planar_embed(g: DirectedGraph) -> PlaneEmbedding:
    """Some combinatorial planar embedding, deterministic in the input.

    Raises NotPlanar (with witness) otherwise.  The outer face is the
    longest face, tie-broken by its dart tuple, purely for reproducibility.
    """
    G = _underlying(g)
    ok, nx_emb = nx.check_planarity(G)
    if not ok:
        raise NotPlanar(kuratowski_witness(g))

    # eids[(u, v)] with u < v: directed edge ids for that vertex pair
    pair_eids: dict[tuple[int, int], list[int]] = {}
    for eid, (u, v) in enumerate(g.edges):
        pair_eids.setdefault((min(u, v), max(u, v)), []).append(eid)

    rotation: list[list[int]] = []
    for v in range(g.n):
        rot: list[int] = []
        order = list(nx_emb.neighbors_cw_order(v)) if g.degree(v) > 0 else []
        for w in order:
            ids = pair_eids[(min(v, w), max(v, w))]
            if len(ids) == 1:
                rot.append(ids[0])
            else:
                # digon: incoming partner first, outgoing second (clockwise)
                e_in = next(e for e in ids if g.edges[e][1] == v)
                e_out = next(e for e in ids if g.edges[e][0] == v)
                rot.extend([e_in, e_out])
        rotation.append(rot)

    faces = trace_faces(g, rotation)
    outer = max(range(len(faces)), key=lambda fi: (len(faces[fi]), faces[fi]))
    return PlaneEmbedding(g, rotation, outer, faces)


def embed_upward(g: DirectedGraph) -> PlaneEmbedding:
    """A planar embedding of an st-graph with s and t on the outer face.

    Works by embedding G plus the edge (s,t) when absent; G admits such an
    embedding iff that augmented graph is planar.
    """
    rep = validate_st_graph(g)
    if not rep.ok:
        raise GraphError("embed_upward requires an st-graph")
    s, t = rep.source, rep.sink
    assert s is not None and t is not None
    if g.n == 1:
        return PlaneEmbedding(g, [[]], 0, [()], check_euler=False)

    if g.has_edge(s, t):
        emb = _planar_or_no_upward(g)
        rotation = [list(r) for r in emb.rotation]
        faces = list(emb.faces)
    else:
        h = DirectedGraph(
            g.n,
            list(g.edges) + [(s, t)],
            g.names,
            list(g.aug_flags) + [True],
        )
        emb_h = _planar_or_no_upward(h)
        helper = g.m  # id of the added edge
        rotation = [[e for e in r if e != helper] for r in emb_h.rotation]
        faces = trace_faces(g, rotation)

    outer = _pick_st_face(g, rotation, faces, s, t)
    if outer is None:
        raise NoUpwardEmbedding("no face of the embedding contains both s and t")
    return PlaneEmbedding(g, rotation, outer, faces)


def _planar_or_no_upward(h: DirectedGraph) -> PlaneEmbedding:
    try:
        return planar_embed(h)
    except NotPlanar as exc:
        raise NoUpwardEmbedding(
            "no planar embedding puts s and t on a common face"
        ) from exc


def _pick_st_face(g, rotation, faces, s: int, t: int) -> Optional[int]:
    best = None
    for fi, face in enumerate(faces):
        verts = set()
        for (e, d) in face:
            u, v = g.edges[e]
            verts.add(u)
            verts.add(v)
        if s in verts and t in verts:
            key = (len(face), face)
            if best is None or key > best[0]:
                best = (key, fi)
    return None if best is None else best[1]
