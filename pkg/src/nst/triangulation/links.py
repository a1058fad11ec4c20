"""Vertex links as explicit triangulated surfaces.

The link of a vertex class has one triangle per tetrahedron corner ``(i, v)``.
The side of that triangle lying in face ``f`` (``f != v``) is glued to the
triangle ``(j, p[v])`` along its side in face ``p[f]`` when face ``f`` of
tetrahedron ``i`` is glued to ``(j, p)``.  The corners of the link triangle
``(i, v)`` sit on the tetrahedron edges ``(v, w)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import perm as P
from ..errors import PreconditionError
from .core import Triangulation


@dataclass
class VertexLink:
    vertex: int
    triangles: list           # [(tet, corner)]
    neighbours: dict          # (tet, corner, face) -> (tet', perm) or None
    link_vertices: int
    link_edges: int
    boundary_count: int
    orientable: bool

    @property
    def chi(self) -> int:
        return self.link_vertices - self.link_edges + len(self.triangles)

    @property
    def closed(self) -> bool:
        return self.boundary_count == 0

    @property
    def genus(self) -> int:
        """Orientable genus, or number of cross-caps for non-orientable links."""
        g2 = 2 - self.chi - self.boundary_count
        return g2 // 2 if self.orientable else g2

    @property
    def is_torus(self) -> bool:
        return self.closed and self.orientable and self.chi == 0

    @property
    def is_sphere(self) -> bool:
        return self.closed and self.chi == 2

    @property
    def is_disc(self) -> bool:
        return self.boundary_count == 1 and self.chi == 1


def vertex_link(tri: Triangulation, v: int) -> VertexLink:
    sk = tri.skeleton
    if not 0 <= v < len(sk.vertices):
        raise PreconditionError(f"no vertex {v}")
    corners = sk.vertices[v].members
    nbrs = {}
    orientable = True
    for (i, c) in corners:
        for f in range(4):
            if f != c:
                g = tri.gluing(i, f)
                nbrs[i, c, f] = g
                if g is not None and P.SIGN[g[1]] != -1:
                    orientable = False

    parent = {}
    for (i, c) in corners:
        for w in range(4):
            if w != c:
                parent[i, c, w] = (i, c, w)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[a] = b

    half, free = 0, []
    for (i, c) in corners:
        for f in range(4):
            if f == c:
                continue
            g = nbrs[i, c, f]
            if g is None:
                free.append((i, c, f))
                continue
            half += 1
            j, p = g
            for w in range(4):
                if w not in (c, f):
                    union((i, c, w), (j, p[c], p[w]))
    nverts = len({find(x) for x in parent})

    # boundary circles: free sides chained through shared link vertices
    side_parent = {s: s for s in free}

    def sfind(x):
        while side_parent[x] != x:
            side_parent[x] = side_parent[side_parent[x]]
            x = side_parent[x]
        return x

    seen_end = {}
    for s in free:
        i, c, f = s
        for w in range(4):
            if w in (c, f):
                continue
            end = find((i, c, w))
            if end in seen_end:
                a, b = sfind(s), sfind(seen_end[end])
                if a != b:
                    side_parent[a] = b
            else:
                seen_end[end] = s
    nbdry = len({sfind(s) for s in free})
    return VertexLink(v, list(corners), nbrs, nverts, half // 2 + len(free), nbdry, orientable)
