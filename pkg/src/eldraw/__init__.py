"""Planar L-drawings of directed graphs.

Decision procedures for upward- and upward-rightward-planar L-drawings via
bitonic and monotonically decreasing st-orderings, exact integer drawing
construction and validation, fixed-port feasibility checking, NP-hardness
instance generation, and exhaustive small-instance oracles.
"""

from .graph import (
    DirectedGraph,
    GraphDocument,
    GraphError,
    GraphFormatError,
    StReport,
    add_super_source,
    parse_graph_text,
    format_graph_text,
    validate_st_graph,
)
from .embedding import (
    PlaneEmbedding,
    StOrdering,
    SuccessorList,
    is_bitonic_list,
    is_monotone_decreasing_list,
    modality,
    successor_list,
)
from .planarity import NotPlanar, NoUpwardEmbedding, embed_upward, is_planar, planar_embed

__all__ = [
    "DirectedGraph",
    "GraphDocument",
    "GraphError",
    "GraphFormatError",
    "StReport",
    "add_super_source",
    "parse_graph_text",
    "format_graph_text",
    "validate_st_graph",
    "PlaneEmbedding",
    "StOrdering",
    "SuccessorList",
    "is_bitonic_list",
    "is_monotone_decreasing_list",
    "modality",
    "successor_list",
    "NotPlanar",
    "NoUpwardEmbedding",
    "embed_upward",
    "is_planar",
    "planar_embed",
]
