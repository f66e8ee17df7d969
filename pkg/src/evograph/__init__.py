"""Evolving random graph models with coupled-tree diameter certificates."""

from .graph import EdgeKind, GraphError, GrowingGraph, Mode, export_edge_list, from_edges
from .sampling import RngStream

__version__ = "0.1.0"

__all__ = ["EdgeKind", "GraphError", "GrowingGraph", "Mode", "RngStream",
           "export_edge_list", "from_edges", "__version__"]
