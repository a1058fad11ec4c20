"""Truncation of ideal vertices."""
from __future__ import annotations

from ..errors import PreconditionError
from .core import Triangulation


def truncate_ideal_vertices(tri: Triangulation) -> Triangulation:
    """Return a compact triangulation with every ideal vertex cut off.

    Each tetrahedron corner at an ideal vertex loses a small corner piece;
    the new boundary faces are labelled ``("V", vertex class)``.
    """
    from ..cells import retriangulate

    ideal = tri.skeleton.ideal_vertices()
    if not ideal:
        raise PreconditionError("triangulation has no ideal vertex to truncate")
    return retriangulate(tri, None, frozenset(ideal)).tri
