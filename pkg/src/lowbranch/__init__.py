"""Spanning trees with few branch vertices: constructions, oracles and experiments."""

from .graph import Cut, Graph, GraphError, InvalidTree, SpanningTree, branch_count, cut_edges, is_connected, verify_tree

__all__ = [
    "Cut",
    "Graph",
    "GraphError",
    "InvalidTree",
    "SpanningTree",
    "branch_count",
    "cut_edges",
    "is_connected",
    "verify_tree",
]
