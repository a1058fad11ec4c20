from .core import EDGE_INDEX, EDGES, Triangulation, format_triangulation, parse_triangulation, read_triangulation
from .skeleton import Skeleton, compute_skeleton
from .links import VertexLink, vertex_link

__all__ = [
    "EDGES", "EDGE_INDEX", "Triangulation", "parse_triangulation", "format_triangulation",
    "read_triangulation", "Skeleton", "compute_skeleton", "VertexLink", "vertex_link",
]
