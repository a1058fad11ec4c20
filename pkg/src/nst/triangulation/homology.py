"""First homology from the cellular chain complex."""
from __future__ import annotations

from dataclasses import dataclass

from ..linalg import smith_diagonal
from .core import EDGE_INDEX, EDGES, Triangulation


@dataclass(frozen=True)
class H1:
    rank: int
    torsion: tuple = ()

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z_{k}" for k in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology_h1(tri: Triangulation) -> H1:
    """H1 with integer coefficients; ideal vertices are truncated first."""
    if tri.size and tri.is_ideal:
        from .truncate import truncate_ideal_vertices
        tri = truncate_ideal_vertices(tri)
    if tri.size == 0:
        return H1(0)
    sk = tri.skeleton
    nv, ne = len(sk.vertices), len(sk.edges)

    # edge endpoints (tail, head) along the class direction
    ends = [None] * ne
    for i in range(tri.size):
        for e, (a, b) in enumerate(EDGES):
            k = sk.edge_of[i][e]
            if ends[k] is None:
                va, vb = sk.vertex_of[i][a], sk.vertex_of[i][b]
                ends[k] = (va, vb) if sk.edge_dir[i][e] > 0 else (vb, va)

    # spanning forest of the 1-skeleton; tree edges are contracted
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    free = []
    for k, (u, v) in enumerate(ends):
        ru, rv = find(u), find(v)
        if ru == rv:
            free.append(k)
        else:
            parent[ru] = rv
    col = {k: c for c, k in enumerate(free)}

    rows = []
    for face in sk.faces:
        i, f = face.members[0]
        a, b, c = [x for x in range(4) if x != f]
        row = [0] * len(free)
        for (x, y), sgn in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            e = EDGE_INDEX[x, y]
            k = sk.edge_of[i][e]
            if k in col:
                row[col[k]] += sgn * sk.edge_dir[i][e]
        if any(row):
            rows.append(row)
    diag = smith_diagonal(rows)
    return H1(len(free) - len(diag), tuple(sorted(d for d in diag if d > 1)))
