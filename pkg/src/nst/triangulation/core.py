"""The triangulation value type and its text format.

A triangulation is a list of tetrahedra; face ``f`` of a tetrahedron is the
face opposite vertex ``f``.  Each face is either on the boundary (``None``)
or glued to ``(j, p)``: face ``f`` of tetrahedron ``i`` is identified with
face ``p[f]`` of tetrahedron ``j`` so that vertex ``v`` goes to ``p[v]``.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .. import perm as P
from ..errors import FormatError, GluingError, IndexRangeError, InvalidTriangulation, OrientationError

Gluing = Optional[tuple]  # (j, perm) or None

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(EDGES):
    EDGE_INDEX[_a, _b] = _k
    EDGE_INDEX[_b, _a] = _k


class Triangulation:
    """Immutable oriented triangulation.

    ``labels`` optionally tags boundary faces, keyed by ``(tet, face)``; the
    tags survive the rewriting operations and are used to recognise which
    boundary component came from where.  Labels play no part in equality.
    """

    __slots__ = ("_glu", "labels", "__dict__")

    def __init__(self, gluings: Sequence[Sequence[Gluing]], labels: Mapping | None = None,
                 check: bool = True):
        glu = tuple(tuple(None if g is None else (int(g[0]), tuple(g[1])) for g in row)
                    for row in gluings)
        self._glu = glu
        self.labels = dict(labels) if labels else {}
        if check:
            self._check_gluings()

    # -- basic access -----------------------------------------------------
    @property
    def size(self) -> int:
        return len(self._glu)

    t = size

    def gluing(self, tet: int, face: int) -> Gluing:
        return self._glu[tet][face]

    @property
    def gluings(self):
        return self._glu

    def __len__(self):
        return len(self._glu)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._glu == other._glu

    def __hash__(self):
        return hash(self._glu)

    def __repr__(self):
        return f"Triangulation(t={self.size})"

    def _check_gluings(self):
        n = len(self._glu)
        for i, row in enumerate(self._glu):
            if len(row) != 4:
                raise FormatError(f"tetrahedron {i} has {len(row)} faces")
            for f, g in enumerate(row):
                if g is None:
                    continue
                j, p = g
                if not 0 <= j < n:
                    raise IndexRangeError(f"face ({i},{f}) glued to missing tetrahedron {j}")
                if p not in P.SIGN:
                    raise FormatError(f"bad permutation at ({i},{f})")
                if P.SIGN[p] != -1:
                    raise OrientationError(
                        f"gluing at ({i},{f}) is an even permutation; the triangulation is "
                        "not coherently oriented")
                back = self._glu[j][p[f]]
                if (j, p[f]) == (i, f):
                    raise GluingError(f"face ({i},{f}) glued to itself")
                if back is None or back[0] != i or back[1] != P.INVERSE[p]:
                    raise GluingError(
                        f"gluing ({i},{f}) -> ({j},{p[f]}) is not matched by the reverse gluing")

    # -- derived structure ------------------------------------------------
    @cached_property
    def skeleton(self):
        from .skeleton import compute_skeleton
        return compute_skeleton(self)

    @property
    def is_ideal(self) -> bool:
        return any(v.kind == "ideal" for v in self.skeleton.vertices)

    ideal_flag = is_ideal

    @property
    def has_boundary(self) -> bool:
        return any(g is None for row in self._glu for g in row)

    def is_valid(self) -> bool:
        return self.skeleton.valid

    def validate(self) -> "Triangulation":
        sk = self.skeleton
        if not sk.valid:
            raise InvalidTriangulation("; ".join(sk.problems))
        return self

    def boundary_faces(self):
        return [(i, f) for i, row in enumerate(self._glu) for f, g in enumerate(row) if g is None]

    def to_text(self) -> str:
        return format_triangulation(self)

    # -- structural helpers ----------------------------------------------
    def components(self) -> list[list[int]]:
        """Connected components as sorted lists of tetrahedron indices."""
        seen = [False] * self.size
        comps = []
        for s in range(self.size):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                i = stack.pop()
                comp.append(i)
                for g in self._glu[i]:
                    if g is not None and not seen[g[0]]:
                        seen[g[0]] = True
                        stack.append(g[0])
            comps.append(sorted(comp))
        return comps

    def sub(self, tets: Iterable[int]) -> "Triangulation":
        """The sub-triangulation on a union of components, renumbered in order."""
        tets = sorted(tets)
        new = {old: k for k, old in enumerate(tets)}
        rows = []
        for old in tets:
            row = []
            for g in self._glu[old]:
                if g is None:
                    row.append(None)
                elif g[0] not in new:
                    raise ValueError("tetrahedron set is not a union of components")
                else:
                    row.append((new[g[0]], g[1]))
            rows.append(row)
        labels = {(new[i], f): lab for (i, f), lab in self.labels.items() if i in new}
        return Triangulation(rows, labels, check=False)

    def relabel(self, tet_perm: Sequence[int], vertex_perms: Sequence) -> "Triangulation":
        """Isomorphic copy: old tet i becomes tet_perm[i] with vertices mapped by vertex_perms[i].

        Every vertex permutation must be even to keep the orientation convention.
        """
        n = self.size
        rows = [[None] * 4 for _ in range(n)]
        for i in range(n):
            s = vertex_perms[i]
            for f in range(4):
                g = self._glu[i][f]
                if g is None:
                    continue
                j, p = g
                # new gluing: s_j o p o s_i^-1
                q = P.compose(vertex_perms[j], P.compose(p, P.inverse(s)))
                rows[tet_perm[i]][s[f]] = (tet_perm[j], q)
        labels = {(tet_perm[i], vertex_perms[i][f]): lab for (i, f), lab in self.labels.items()}
        return Triangulation(rows, labels)


def empty_triangulation() -> Triangulation:
    return Triangulation([])


# ---------------------------------------------------------------------------
# text format

def parse_triangulation(text: str, validate: bool = True) -> Triangulation:
    """Parse the gluing-file format.

    Line 1 is ``tets <t>``; then ``t`` lines of four tokens, one per face,
    each ``-`` (boundary) or ``<j>:<p0p1p2p3>``.  ``#`` starts a comment.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise FormatError("empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tets" or not head[1].isdigit():
        raise FormatError(f"first line must be 'tets <t>', got {lines[0]!r}")
    n = int(head[1])
    body = lines[1:]
    if len(body) != n:
        raise FormatError(f"expected {n} tetrahedron lines, found {len(body)}")
    rows = []
    for lineno, line in enumerate(body):
        toks = line.split()
        if len(toks) != 4:
            raise FormatError(f"tetrahedron {lineno}: expected 4 tokens, got {len(toks)}")
        row = []
        for tok in toks:
            if tok == "-":
                row.append(None)
                continue
            j, sep, word = tok.partition(":")
            if not sep or not j.isdigit():
                raise FormatError(f"tetrahedron {lineno}: bad token {tok!r}")
            try:
                p = P.parse(word)
            except ValueError as exc:
                raise FormatError(f"tetrahedron {lineno}: {exc}") from None
            row.append((int(j), p))
        rows.append(row)
    tri = Triangulation(rows)
    if validate:
        tri.validate()
    return tri


def format_triangulation(tri: Triangulation) -> str:
    out = [f"tets {tri.size}"]
    for row in tri.gluings:
        out.append(" ".join("-" if g is None else f"{g[0]}:{P.fmt(g[1])}" for g in row))
    return "\n".join(out) + "\n"


def read_triangulation(path) -> Triangulation:
    with open(path, encoding="utf-8") as fh:
        return parse_triangulation(fh.read())
