"""Cell decomposition of a triangulation by normal discs, and its retriangulation.

Every tetrahedron is split by the discs of a normal surface, plus (for
truncated vertices) one extra innermost triangle at each corner of those
vertices whose corner piece is thrown away.  The resulting cells are convex
polytopes.  Their faces are polygons lying either in a face of the
tetrahedron ("face regions") or in a disc.

Points are named locally per tetrahedron: ``("V", v)`` for a surviving
vertex and ``("E", a, b, k)`` (``a < b``) for the k-th disc corner on edge
ab counted from a.  Each point also has a global key (vertex class, or edge
class with the position measured along the class direction) used to order
points consistently on both sides of every face gluing.

Retriangulation: face polygons are fanned from their smallest point; a cell
is coned from its smallest point over the faces not containing it (a pulling
triangulation), falling back to coning from a new interior point when two
points of the cell share a global key.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import perm as P
from .coords import QUAD_PAIRS, quad_corner_cycle, quad_type
from .triangulation import EDGE_INDEX, Triangulation


def _even(p) -> bool:
    return sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2 == 0


def _tri_cycle(v):
    ws = [w for w in range(4) if w != v]
    if not _even((v, *ws)):
        ws[1], ws[2] = ws[2], ws[1]
    return ws


@dataclass
class CellFace:
    polygon: list            # local point names in cyclic order
    kind: str                # "region" (inside tet face) or "disc"
    where: object            # tet face index for regions; disc id for discs


@dataclass
class Cell:
    cid: tuple
    faces: list = field(default_factory=list)

    def points(self):
        out = []
        seen = set()
        for f in self.faces:
            for pnt in f.polygon:
                if pnt not in seen:
                    seen.add(pnt)
                    out.append(pnt)
        return out


class TetSplit:
    """The discs of one tetrahedron and the cells they cut it into."""

    def __init__(self, tri: Triangulation, i: int, std, truncated: set):
        self.i = i
        sk = tri.skeleton
        self.trunc = [sk.vertex_of[i][v] in truncated for v in range(4)]
        self.layers = []
        for v in range(4):
            lay = [("X", v, 0)] if self.trunc[v] else []
            lay += [("T", v, m) for m in range(1, std[7 * i + v] + 1)] if std else []
            self.layers.append(lay)
        self.qtype, self.Q = None, 0
        if std:
            for k in range(3):
                if std[7 * i + 4 + k]:
                    self.qtype, self.Q = k, std[7 * i + 4 + k]

    # -- positions ----------------------------------------------------------
    def npoints(self, a, b) -> int:
        n = len(self.layers[a]) + len(self.layers[b])
        if self.qtype is not None and quad_type(a, b) != self.qtype:
            n += self.Q
        return n

    def point(self, a, b, k):
        """Name of the k-th point on edge ab counted from a."""
        if a < b:
            return ("E", a, b, k)
        return ("E", b, a, self.npoints(a, b) + 1 - k)

    def quad_pos(self, lev, a) -> int:
        side0 = QUAD_PAIRS[self.qtype][0]
        return len(self.layers[a]) + (lev if a in side0 else self.Q + 1 - lev)

    def arcs(self, f, a):
        """Discs cutting corner a of face f, ordered from a."""
        out = list(self.layers[a])
        if self.qtype is not None and quad_type(a, f) == self.qtype:
            side0 = QUAD_PAIRS[self.qtype][0]
            levels = range(1, self.Q + 1) if a in side0 else range(self.Q, 0, -1)
            out.extend(("Q", self.qtype, lev) for lev in levels)
        return out

    # -- cells ----------------------------------------------------------------
    def big_cell(self, v):
        if self.qtype is None:
            return ("Z",)
        return ("W", 0 if v in QUAD_PAIRS[self.qtype][0] else 1)

    def beyond(self, a, disc):
        """The cell on the far side of ``disc`` as seen from corner a."""
        if disc[0] in ("T", "X"):
            v = disc[1]
            m = self.layers[v].index(disc) + 1
            return ("L", v, m) if m < len(self.layers[v]) else self.big_cell(v)
        lev = disc[2]
        if a in QUAD_PAIRS[self.qtype][0]:
            return ("S", lev) if lev < self.Q else ("W", 1)
        return ("S", lev - 1) if lev > 1 else ("W", 0)

    def disc_sides(self, disc):
        """(cell before, cell beyond) for a disc; None marks a discarded corner."""
        if disc[0] in ("T", "X"):
            v = disc[1]
            m = self.layers[v].index(disc) + 1
            if m == 1:
                before = None if self.trunc[v] else ("C", v)
            else:
                before = ("L", v, m - 1)
            return before, self.beyond(v, disc)
        lev = disc[2]
        before = ("W", 0) if lev == 1 else ("S", lev - 1)
        after = ("S", lev) if lev < self.Q else ("W", 1)
        return before, after

    def disc_polygon(self, disc):
        if disc[0] in ("T", "X"):
            v = disc[1]
            m = self.layers[v].index(disc) + 1
            return [self.point(v, w, m) for w in _tri_cycle(v)]
        lev = disc[2]
        return [self.point(a, b, self.quad_pos(lev, a)) for a, b in quad_corner_cycle(self.qtype)]

    def discs(self):
        out = [d for lay in self.layers for d in lay]
        if self.qtype is not None:
            out += [("Q", self.qtype, lev) for lev in range(1, self.Q + 1)]
        return out

    def face_regions(self, f):
        """[(cell id or None, polygon)] for the regions of tetrahedron face f."""
        corners = [a for a in range(4) if a != f]
        out = []
        for a in corners:
            b, c = [x for x in corners if x != a]
            arcs = self.arcs(f, a)
            if not arcs:
                continue
            if self.trunc[a]:
                cid = None
            else:
                # no triangles at this corner means the first cut is a quad
                cid = ("C", a) if self.layers[a] else self.big_cell(a)
            out.append((cid, [("V", a), self.point(a, b, 1), self.point(a, c, 1)]))
            for m in range(1, len(arcs)):
                out.append((self.beyond(a, arcs[m - 1]),
                            [self.point(a, b, m), self.point(a, b, m + 1),
                             self.point(a, c, m + 1), self.point(a, c, m)]))
        # central region
        a, b, c = corners
        poly, cid = [], None
        for x, prev, nxt in ((a, c, b), (b, a, c), (c, b, a)):
            arcs = self.arcs(f, x)
            if arcs:
                m = len(arcs)
                poly += [self.point(x, prev, m), self.point(x, nxt, m)]
                cid = self.beyond(x, arcs[-1])
            else:
                poly.append(("V", x))
        if cid is None:
            cid = ("Z",)
        out.append((cid, poly))
        return out

    def cells(self) -> dict:
        cells = {}

        def get(cid):
            if cid not in cells:
                cells[cid] = Cell(cid)
            return cells[cid]

        for f in range(4):
            for cid, poly in self.face_regions(f):
                if cid is not None:
                    get(cid).faces.append(CellFace(poly, "region", f))
        for d in self.discs():
            poly = self.disc_polygon(d)
            for cid in self.disc_sides(d):
                if cid is not None:
                    get(cid).faces.append(CellFace(poly, "disc", d))
        return cells


def expected_cell_count(split: TetSplit) -> int:
    """Cells predicted from the disc counts alone (bookkeeping check)."""
    n = 0
    for v in range(4):
        L = len(split.layers[v])
        if L:
            n += (0 if split.trunc[v] else 1) + (L - 1)
    n += 1 if split.qtype is None else 2 + (split.Q - 1)
    return n


# ---------------------------------------------------------------------------

class _PointKeys:
    def __init__(self, tri: Triangulation, splits):
        self.sk = tri.skeleton
        self.splits = splits

    def key(self, i, pnt):
        if pnt[0] == "V":
            return ("v", self.sk.vertex_of[i][pnt[1]], 0)
        if pnt[0] == "C":
            return ("z", i, pnt[1])
        _, a, b, k = pnt
        e = EDGE_INDEX[a, b]
        pos = k if self.sk.edge_dir[i][e] > 0 else self.splits[i].npoints(a, b) + 1 - k
        return ("e", self.sk.edge_of[i][e], pos)


def _map_point(split_j, p, pnt):
    if pnt[0] == "V":
        return ("V", p[pnt[1]])
    _, a, b, k = pnt
    return split_j.point(p[a], p[b], k)


def _fan(poly, keyfun):
    n = len(poly)
    s = min(range(n), key=lambda t: keyfun(poly[t]))
    rot = poly[s:] + poly[:s]
    return [(rot[0], rot[t], rot[t + 1]) for t in range(1, n - 1)]


@dataclass
class Retriangulation:
    tri: Triangulation
    origin: list              # per new tet: (old tet, cell id)
    cells: int
    expected_cells: int


def retriangulate(tri: Triangulation, std=None, truncated=frozenset(), surface_label="S",
                  keep_cell=None) -> Retriangulation:
    """Build the triangulation of the complement of the discs (and truncated corners).

    Boundary faces of the result are labelled: ``surface_label`` for faces on
    discs of the surface, ``("V", vertex class)`` for truncation faces, and
    the original label (or ``"B"``) for faces in old boundary faces.
    """
    n = tri.size
    sk = tri.skeleton
    splits = [TetSplit(tri, i, std, set(truncated)) for i in range(n)]
    keys = _PointKeys(tri, splits)

    def region_triangles(i, f, poly):
        """Triangulate a polygon of face f of tet i consistently with the glued side."""
        g = tri.gluing(i, f)
        if g is None or (i, f) <= (g[0], g[1][f]):
            return _fan(poly, lambda q: (keys.key(i, q), q))
        j, p = g
        back = {}
        mapped = []
        for q in poly:
            mq = _map_point(splits[j], p, q)
            back[mq] = q
            mapped.append(mq)
        tris = _fan(mapped, lambda q: (keys.key(j, q), q))
        return [tuple(back[x] for x in t) for t in tris]

    new_tets = []         # [4 local names]
    origin = []           # (old tet, cell id)
    cell_of = []          # index into cell_faces
    cell_faces = []       # per cell: {frozenset of 3 names: CellFace}
    ncells = 0
    nexpected = 0
    for i in range(n):
        split = splits[i]
        cells = split.cells()
        ncells += len(cells)
        nexpected += expected_cell_count(split)
        for cid in sorted(cells, key=repr):
            if keep_cell is not None and not keep_cell(i, cid):
                continue
            cell = cells[cid]
            face_tris = []
            bnd = {}
            for face in cell.faces:
                if face.kind == "region":
                    tris = region_triangles(i, face.where, face.polygon)
                else:
                    tris = _fan(face.polygon, lambda q: (keys.key(i, q), q))
                face_tris.append((face, tris))
                for t in tris:
                    bnd[frozenset(t)] = face
            cell_faces.append(bnd)
            ks = sorted((keys.key(i, q), q) for q in cell.points())
            apex = ks[0][1]
            pull = ks[0][0] != ks[1][0]
            if pull:
                for face, tris in face_tris:
                    if apex in face.polygon and any(apex not in t for t in tris):
                        pull = False
                        break
            centre = apex if pull else ("C", len(new_tets))
            for face, tris in face_tris:
                if pull and apex in face.polygon:
                    continue
                for t in tris:
                    new_tets.append([centre, *t])
                    origin.append((i, cid))
                    cell_of.append(len(cell_faces) - 1)

    # gluings
    m = len(new_tets)
    rows = [[None] * 4 for _ in range(m)]
    labels = {}
    inner = {}       # (cell, frozenset of 3 names) -> (new tet, face)
    outer = {}       # (old tet, old face, frozenset) -> (new tet, face)
    outer_face = {}  # (new tet, face) -> old face
    for t, verts in enumerate(new_tets):
        i = origin[t][0]
        for r in range(4):
            tri_pts = frozenset(verts[:r] + verts[r + 1:])
            face = cell_faces[cell_of[t]].get(tri_pts)
            if face is None:
                key = (cell_of[t], tri_pts)
                if key in inner:
                    u, s = inner.pop(key)
                    rows[t][r] = (u, s)
                    rows[u][s] = (t, r)
                else:
                    inner[key] = (t, r)
            elif face.kind == "disc":
                d = face.where
                labels[t, r] = ("V", sk.vertex_of[i][d[1]]) if d[0] == "X" else surface_label
            elif tri.gluing(i, face.where) is None:
                labels[t, r] = tri.labels.get((i, face.where), "B")
            else:
                outer[i, face.where, tri_pts] = (t, r)
                outer_face[t, r] = face.where
    if inner:
        raise AssertionError("unmatched interior faces inside a cell")
    for (i, f, pts), (t, r) in outer.items():
        if rows[t][r] is not None:
            continue
        j, p = tri.gluing(i, f)
        mapped = frozenset(_map_point(splits[j], p, q) for q in pts)
        u, s = outer[j, p[f], mapped]
        rows[t][r] = (u, s)
        rows[u][s] = (t, r)
    # turn neighbour references into permutations
    glu = [[None] * 4 for _ in range(m)]
    for t in range(m):
        i = origin[t][0]
        for r in range(4):
            if rows[t][r] is None:
                continue
            u, s = rows[t][r]
            if (t, r) in outer_face:
                jj, p = tri.gluing(i, outer_face[t, r])
                conv = (lambda q, p=p, jj=jj: _map_point(splits[jj], p, q))
            else:
                conv = (lambda q: q)
            target = new_tets[u]
            img = {r: s}
            for k in range(4):
                if k != r:
                    img[k] = target.index(conv(new_tets[t][k]))
            glu[t][r] = (u, tuple(img[k] for k in range(4)))
    raw = Triangulation(glu, labels, check=False)
    return Retriangulation(orient(raw), origin, ncells, nexpected)


def orient(tri: Triangulation) -> Triangulation:
    """Relabel tetrahedra (swapping vertices 2 and 3 where needed) so every gluing is odd."""
    n = tri.size
    flip = [None] * n
    for s in range(n):
        if flip[s] is not None:
            continue
        flip[s] = False
        stack = [s]
        while stack:
            i = stack.pop()
            for g in tri.gluings[i]:
                if g is None:
                    continue
                j, p = g
                want = flip[i] if P.SIGN[p] == -1 else (not flip[i])
                if flip[j] is None:
                    flip[j] = want
                    stack.append(j)
                elif flip[j] != want:
                    raise ValueError("non-orientable result")
    swap = (0, 1, 3, 2)
    perms = [swap if fl else P.IDENTITY for fl in flip]
    return _relabel_unchecked(tri, perms)


def _relabel_unchecked(tri, perms):
    n = tri.size
    rows = [[None] * 4 for _ in range(n)]
    for i in range(n):
        s = perms[i]
        for f in range(4):
            g = tri.gluings[i][f]
            if g is None:
                continue
            j, p = g
            rows[i][s[f]] = (j, P.compose(perms[j], P.compose(p, P.inverse(s))))
    labels = {(i, perms[i][f]): lab for (i, f), lab in tri.labels.items()}
    return Triangulation(rows, labels)
