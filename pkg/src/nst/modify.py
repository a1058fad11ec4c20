"""Cutting along a normal surface, and crushing one."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import perm as P
from .cells import TetSplit, retriangulate
from .errors import PreconditionError
from .surface import NormalSurface
from .triangulation import Triangulation


@dataclass
class BoundaryInfo:
    kind: str          # "S" (copy of the cut surface), "V" (truncated vertex), "B" (old boundary)
    genus: int
    euler: int
    vertex: int | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "genus": self.genus, "euler": self.euler}


def boundary_profile(tri: Triangulation) -> list[BoundaryInfo]:
    out = []
    for bc in tri.skeleton.boundary_components:
        kinds = {lab if isinstance(lab, str) else lab[0] for lab in bc.labels} or {"B"}
        kind = "S" if "S" in kinds else ("V" if "V" in kinds else "B")
        vert = next((lab[1] for lab in bc.labels if isinstance(lab, tuple)), None)
        out.append(BoundaryInfo(kind, bc.genus, bc.euler, vert))
    return out


@dataclass
class CutPiece:
    tri: Triangulation
    boundary: list

    @property
    def has_truncation_boundary(self) -> bool:
        return any(b.kind == "V" for b in self.boundary)

    def to_json(self) -> dict:
        return {"tets": self.tri.size, "boundary": [b.to_json() for b in self.boundary]}


@dataclass
class CutResult:
    pieces: list
    cells: int
    expected_cells: int

    @property
    def surface_copies(self) -> int:
        return sum(1 for p in self.pieces for b in p.boundary if b.kind == "S")

    def to_json(self) -> dict:
        return {"pieces": [p.to_json() for p in self.pieces]}


def cut_along(tri: Triangulation, s: NormalSurface | None) -> CutResult:
    """Cut ``tri`` open along the closed two-sided surface ``s``.

    Ideal vertices are truncated in the same pass, so an ideal input gives
    compact pieces whose torus boundaries are labelled ``("V", vertex)``.
    Surface copies are labelled ``"S"``.
    """
    std = None
    if s is not None and not s.is_empty():
        cls = s.classify()
        if not cls.closed:
            raise PreconditionError("can only cut along a closed surface")
        if not cls.two_sided:
            raise PreconditionError("can only cut along a two-sided surface")
        std = s.std
    ideal = frozenset(tri.skeleton.ideal_vertices()) if tri.size else frozenset()
    if std is None and not ideal:
        return CutResult([CutPiece(tri, boundary_profile(tri))], tri.size, tri.size)
    rt = retriangulate(tri, std, ideal)
    if rt.cells != rt.expected_cells:
        raise AssertionError("cell count does not match the disc counts")
    out = rt.tri
    pieces = [out.sub(c) for c in out.components()]
    return CutResult([CutPiece(p, boundary_profile(p)) for p in pieces], rt.cells, rt.expected_cells)


# ---------------------------------------------------------------------------
# crushing

@dataclass
class CrushReport:
    valid: bool
    problems: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.valid, "problems": list(self.problems)}


def _collapsed(split: TetSplit, polygon):
    """Polygon after every disc is collapsed to a point; returns the distinct vertices."""
    owner = {}
    for d in split.discs():
        for pnt in split.disc_polygon(d):
            owner[pnt] = d
    seq = [owner.get(p, p) for p in polygon]
    out = []
    for x in seq:
        if not out or out[-1] != x:
            out.append(x)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _cell_shapes(split: TetSplit):
    """Classify each cell after crushing: "tet", ("pillow", c, d) or "football"."""
    shapes = {}
    for cid, cell in split.cells().items():
        tri_faces = [f.where for f in cell.faces
                     if f.kind == "region" and len(_collapsed(split, f.polygon)) == 3]
        if len(tri_faces) == 4:
            shapes[cid] = "tet"
        elif len(tri_faces) == 2:
            shapes[cid] = ("pillow", *sorted(tri_faces))
        elif not tri_faces:
            shapes[cid] = "football"
        else:
            raise AssertionError(f"unexpected crushed cell shape {cid}: {tri_faces}")
    return shapes


def crush(tri: Triangulation, s: NormalSurface):
    """Crush ``s`` and return ``(triangulation, report)``.

    Each cell becomes a tetrahedron, a pillow or a football once the surface
    copies are collapsed.  Footballs are flattened to edges and pillows to a
    triangle, which identifies their two triangular faces; surviving
    tetrahedra are reglued by following those identifications.
    """
    n = tri.size
    splits = [TetSplit(tri, i, s.std, set()) for i in range(n)]
    pillow = {}            # tet -> {face: (other face, transposition)}
    survivors = []
    for i, sp in enumerate(splits):
        shapes = _cell_shapes(sp)
        tets = [c for c, sh in shapes.items() if sh == "tet"]
        if tets:
            survivors.append(i)
        for sh in shapes.values():
            if isinstance(sh, tuple):
                _, c, d = sh
                tau = P.transposition(c, d)
                pillow.setdefault(i, {})[c] = (d, tau)
                pillow[i][d] = (c, tau)
    quad_free = [i for i in range(n) if splits[i].qtype is None]
    if survivors != quad_free:
        raise AssertionError("surviving tetrahedra differ from the quad-free ones")
    new = {old: k for k, old in enumerate(survivors)}
    rows = [[None] * 4 for _ in survivors]
    labels = {}
    problems = []
    for i in survivors:
        for f in range(4):
            cur = P.IDENTITY       # map from tet i labels to the current tet labels
            tet, face = i, f
            steps = 0
            while True:
                g = tri.gluing(tet, face)
                if g is None:
                    rows[new[i]][f] = None
                    if (tet, face) in tri.labels:
                        labels[new[i], f] = tri.labels[tet, face]
                    break
                j, p = g
                cur = P.compose(p, cur)
                face = p[face]
                tet = j
                if j in new:
                    if (j, face) == (i, f):
                        problems.append(f"face {f} of tetrahedron {new[i]} is glued to itself")
                        rows[new[i]][f] = None
                        labels[new[i], f] = "crushed"
                    else:
                        rows[new[i]][f] = (new[j], cur)
                    break
                other, tau = pillow[j][face]
                cur = P.compose(tau, cur)
                face = other
                steps += 1
                if steps > 4 * n + 4:
                    raise AssertionError("pillow chain does not terminate")
    out = Triangulation(rows, labels, check=False)
    try:
        out._check_gluings()
    except Exception as exc:     # pragma: no cover - defensive
        problems.append(str(exc))
    if not problems:
        sk = out.skeleton
        problems.extend(sk.problems)
        for k, v in enumerate(sk.vertices):
            if v.kind not in ("internal", "boundary"):
                problems.append(f"vertex {k} has link with chi={v.link_chi}")
    return out, CrushReport(not problems, problems)
