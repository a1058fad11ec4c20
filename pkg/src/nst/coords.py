"""Normal coordinates, matching equations, boundary functionals and the Euler functional.

Layout conventions (frozen):

* quadrilateral coordinates: 3 per tetrahedron, tet-major; type 0 separates
  {0,1}|{2,3}, type 1 separates {0,2}|{1,3}, type 2 separates {0,3}|{1,2};
* standard coordinates: 7 per tetrahedron, the four triangle types (triangle
  at corner v) followed by the three quad types.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import PreconditionError
from .triangulation import EDGE_INDEX, EDGES, Triangulation

QUAD_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
_QUAD_OF = {}
for _k, (_x, _y) in enumerate(QUAD_PAIRS):
    for _a, _b in (_x, _y):
        _QUAD_OF[_a, _b] = _k
        _QUAD_OF[_b, _a] = _k

# Global sign applied to every Q-matching row.  Chosen once so that the
# figure-eight fixture reproduces p + p' - 2p'' + q + q' - 2q'' exactly.
_MATCHING_SIGN = 1


def quad_type(a: int, b: int) -> int:
    """Index of the quad type separating {a, b} from the other two vertices."""
    return _QUAD_OF[a, b]


def quad_edges(k: int) -> list[tuple[int, int]]:
    """The four tetrahedron edges met by a quad of type k (as vertex pairs)."""
    (a, b), (c, d) = QUAD_PAIRS[k]
    return [(a, c), (a, d), (b, c), (b, d)]


def quad_corner_cycle(k: int) -> list[tuple[int, int]]:
    """The edges met by quad type k, in cyclic order around the quad."""
    (a, b), (c, d) = QUAD_PAIRS[k]
    return [(a, c), (a, d), (b, d), (b, c)]


@dataclass
class MatchingSystem:
    rows: list
    provenance: list
    kind: str = "quad"          # "quad" or "std"
    ncols: int = 0

    def to_json(self) -> dict:
        return {"rows": [[int(x) for x in r] for r in self.rows], "provenance": list(self.provenance)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @property
    def rank(self) -> int:
        return linalg.rank(self.rows, self.ncols) if self.rows else 0

    def annihilates(self, x: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(r, x)) == 0 for r in self.rows)


def build_q_matching(tri: Triangulation) -> MatchingSystem:
    """One row per interior edge.

    For an incidence of the edge as tetrahedron edge (a, b), pick c, d with
    (a, b, c, d) an even permutation; the quad separating {a, c}|{b, d}
    contributes +1 and the quad separating {a, d}|{b, c} contributes -1.
    The rule does not depend on which end of the edge is called a.
    """
    sk = tri.skeleton
    n = tri.size
    rows, prov = [], []
    for k, edge in enumerate(sk.edges):
        if edge.boundary:
            continue
        row = [0] * (3 * n)
        for (i, e) in edge.members:
            a, b = EDGES[e]
            c, d = [x for x in range(4) if x not in (a, b)]
            if not _even((a, b, c, d)):
                c, d = d, c
            row[3 * i + _QUAD_OF[a, c]] += _MATCHING_SIGN
            row[3 * i + _QUAD_OF[a, d]] -= _MATCHING_SIGN
        rows.append(row)
        prov.append(f"edge:{k}")
    return MatchingSystem(rows, prov, "quad", 3 * n)


def _even(p) -> bool:
    inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
    return inv % 2 == 0


def build_std_matching(tri: Triangulation) -> MatchingSystem:
    """Three rows per internal face: t1 + q1 - t2 - q2 = 0 for each arc type."""
    n = tri.size
    rows, prov = [], []
    for k, face in enumerate(tri.skeleton.faces):
        if face.boundary:
            continue
        (i, f), _ = face.members
        j, p = tri.gluing(i, f)
        for a in range(4):
            if a == f:
                continue
            row = [0] * (7 * n)
            row[7 * i + a] += 1
            row[7 * i + 4 + _QUAD_OF[a, f]] += 1
            row[7 * j + p[a]] -= 1
            row[7 * j + 4 + _QUAD_OF[p[a], p[f]]] -= 1
            rows.append(row)
            prov.append(f"face:{k}:arc:{a}")
    return MatchingSystem(rows, prov, "std", 7 * n)


def project_std_to_q(x: Sequence[int]) -> list[int]:
    if len(x) % 7:
        raise PreconditionError("standard vector length must be a multiple of 7")
    return [x[7 * i + 4 + k] for i in range(len(x) // 7) for k in range(3)]


def is_admissible(x: Sequence[int], std: bool | None = None) -> bool:
    """Nonnegative with at most one positive quad coordinate per tetrahedron."""
    if any(v < 0 for v in x):
        return False
    if std is None:
        std = len(x) % 7 == 0 and len(x) % 3 != 0
    if std:
        quads = [x[7 * i + 4: 7 * i + 7] for i in range(len(x) // 7)]
    else:
        quads = [x[3 * i: 3 * i + 3] for i in range(len(x) // 3)]
    return all(sum(1 for v in q if v) <= 1 for q in quads)


# ---------------------------------------------------------------------------
# peripheral curves

@dataclass
class CuspCurve:
    """A closed walk through the link triangles of one vertex.

    Each step ``(tet, corner, face)`` leaves the link triangle at ``corner``
    of ``tet`` through its side lying in ``face``; the walk then continues
    in the triangle across that side.
    """
    vertex: int
    steps: list
    name: str = ""


def _next_triangle(tri: Triangulation, step):
    i, c, f = step
    g = tri.gluing(i, f)
    if g is None:
        raise PreconditionError(f"walk leaves through boundary face ({i},{f})")
    j, p = g
    return j, p[c], p[f]


def check_curve(tri: Triangulation, curve: CuspCurve) -> None:
    """Raise unless the walk is closed and stays inside one vertex link."""
    if not curve.steps:
        raise PreconditionError("empty walk")
    sk = tri.skeleton
    steps = curve.steps
    for k, (i, c, f) in enumerate(steps):
        if c == f or sk.vertex_of[i][c] != curve.vertex:
            raise PreconditionError(f"step {k} is not a side of a link triangle of vertex {curve.vertex}")
        j, c2, _ = _next_triangle(tri, (i, c, f))
        ni, nc, _ = steps[(k + 1) % len(steps)]
        if (j, c2) != (ni, nc):
            raise PreconditionError(f"walk is not closed/continuous after step {k}")


def reverse_curve(tri: Triangulation, curve: CuspCurve) -> CuspCurve:
    out = []
    for (i, c, f) in reversed(curve.steps):
        j, c2, f2 = _next_triangle(tri, (i, c, f))
        out.append((j, c2, f2))
    return CuspCurve(curve.vertex, out, curve.name)


_CURVE_RE = re.compile(r"^#@\s*curve\s+(\S+)\s+(.*)$")


def parse_curves(text: str, tri: Triangulation) -> dict[str, CuspCurve]:
    """Read ``#@ curve <name> <tet>.<corner>.<face> ...`` annotations from a file."""
    out = {}
    for line in text.splitlines():
        m = _CURVE_RE.match(line.strip())
        if not m:
            continue
        steps = []
        for tok in m.group(2).split():
            i, c, f = (int(x) for x in tok.split("."))
            steps.append((i, c, f))
        v = tri.skeleton.vertex_of[steps[0][0]][steps[0][1]]
        curve = CuspCurve(v, steps, m.group(1))
        check_curve(tri, curve)
        out[m.group(1)] = curve
    return out


@dataclass
class BoundaryFunctional:
    coeffs: list
    curve: CuspCurve | None = None

    def __call__(self, x: Sequence[int]):
        return sum(a * b for a, b in zip(self.coeffs, x))

    def to_json(self) -> dict:
        return {"rows": [[int(c) for c in self.coeffs]],
                "provenance": [f"curve:{self.curve.name or 'unnamed'}" if self.curve else "curve"]}


def boundary_functional(tri: Triangulation, curve: CuspCurve) -> BoundaryFunctional:
    """Signed crossing tally: crossing from triangle A into triangle B across a
    link edge adds ``q_B - q_A``, where ``q_X`` is the quad type of X's
    tetrahedron whose normal arc in that face is parallel to the crossed
    link edge (it separates the corner and the face's opposite vertex from
    the rest)."""
    check_curve(tri, curve)
    coeffs = [0] * (3 * tri.size)
    for (i, c, f) in curve.steps:
        j, c2, f2 = _next_triangle(tri, (i, c, f))
        coeffs[3 * i + _QUAD_OF[c, f]] -= 1
        coeffs[3 * j + _QUAD_OF[c2, f2]] += 1
    return BoundaryFunctional(coeffs, curve)


def vertex_loop(tri: Triangulation, tet: int, corner: int, other: int) -> CuspCurve:
    """Small loop in the link of ``corner`` around the end of edge (corner, other)."""
    v0, v1 = corner, other
    v2, v3 = [x for x in range(4) if x not in (v0, v1)]
    if not _even((v0, v1, v2, v3)):
        v2, v3 = v3, v2
    start = (tet, (v0, v1, v2, v3))
    steps = []
    cur = start
    while True:
        i, (a, b, c, d) = cur
        steps.append((i, a, d))
        g = tri.gluing(i, d)
        if g is None:
            raise PreconditionError("loop runs into the boundary")
        j, p = g
        cur = (j, (p[a], p[b], p[d], p[c]))
        if cur == start:
            break
        if len(steps) > 6 * tri.size:
            raise PreconditionError("loop did not close")
    return CuspCurve(tri.skeleton.vertex_of[tet][corner], steps, f"loop:{tet}.{corner}.{other}")


def boundary_basis(tri: Triangulation, v: int) -> list[CuspCurve]:
    """Two closed walks whose classes form a basis of H1 of the (torus) link of v.

    The dual graph of the link triangulation is spanned by a breadth-first
    tree from the smallest corner; each non-tree side gives a fundamental
    cycle through the root.  Small loops around link vertices give the
    relations among these cycles, and a Smith reduction picks integer
    combinations that form a basis; the combination is realised as a
    concatenation of fundamental cycles at the root.
    """
    from .triangulation import vertex_link

    link = vertex_link(tri, v)
    if not link.is_torus:
        raise PreconditionError(f"link of vertex {v} is not a torus (chi={link.chi})")
    tris = sorted(link.triangles)
    root = tris[0]
    parent = {root: None}    # triangle -> (parent triangle, step from parent)
    order = [root]
    for cur in order:
        i, c = cur
        for f in range(4):
            if f == c:
                continue
            j, c2, f2 = _next_triangle(tri, (i, c, f))
            if (j, c2) not in parent:
                parent[j, c2] = (cur, (i, c, f))
                order.append((j, c2))

    def side_key(step):
        a = step
        b = _next_triangle(tri, step)
        return min(a, b), (a < b)

    tree_sides = {side_key(s)[0] for tr, s in
                  ((t, parent[t][1]) for t in order if parent[t] is not None)}
    nontree = []
    for (i, c) in tris:
        for f in range(4):
            if f == c:
                continue
            key, fwd = side_key((i, c, f))
            if fwd and key not in tree_sides:
                nontree.append(key)
    index = {k: n for n, k in enumerate(nontree)}

    def path_from_root(t):
        steps = []
        while parent[t] is not None:
            pt, s = parent[t]
            steps.append(s)
            t = pt
        return steps[::-1]

    def reverse_steps(steps):
        return [_next_triangle(tri, s) for s in reversed(steps)]

    def fundamental(key):
        i, c, f = key
        return path_from_root((i, c)) + [key] + reverse_steps(path_from_root(_next_triangle(tri, key)[:2]))

    def tally(steps):
        vec = [0] * len(nontree)
        for s in steps:
            key, fwd = side_key(s)
            if key in index:
                vec[index[key]] += 1 if fwd else -1
        return vec

    relations = []
    seen = set()
    for (i, c) in tris:
        for w in range(4):
            if w == c:
                continue
            loop = vertex_loop(tri, i, c, w)
            sig = frozenset(loop.steps)
            if sig in seen:
                continue
            seen.add(sig)
            relations.append(tally(loop.steps))
    torsion, free = linalg.quotient_basis(relations, len(nontree))
    if torsion or len(free) != 2:
        raise PreconditionError("link homology is not Z^2")
    curves = []
    for name, combo in zip(("alpha", "beta"), free):
        steps = []
        for k, mult in enumerate(combo):
            cyc = fundamental(nontree[k])
            if mult < 0:
                cyc = reverse_steps(cyc)
            steps.extend(cyc * abs(mult))
        curves.append(CuspCurve(v, steps, name))
    return curves


def reduce_functional(coeffs: Sequence, matching: MatchingSystem) -> list[Fraction]:
    """Canonical representative modulo the row space of the matching rows."""
    return linalg.reduce_modulo(coeffs, matching.rows)


# ---------------------------------------------------------------------------
# Euler characteristic as a linear functional on standard coordinates

def euler_functional(tri: Triangulation) -> list[Fraction]:
    """Coefficients c with chi(S) = sum c[k] x[k] for every admissible integral x.

    Each disc contributes one face, minus its arcs (an arc in an internal face
    is shared by two discs, one in a boundary face is not), plus its corners
    (a corner on an edge class of degree d is shared by d discs).
    """
    sk = tri.skeleton
    if any(v.kind == "ideal" for v in sk.vertices):
        raise PreconditionError("euler_functional needs a compact triangulation")
    n = tri.size
    out = []
    for i in range(n):
        def arc(f):
            return Fraction(1) if tri.gluing(i, f) is None else Fraction(1, 2)

        def corner(a, b):
            return Fraction(1, sk.edges[sk.edge_of[i][EDGE_INDEX[a, b]]].degree)

        for v in range(4):
            val = Fraction(1)
            for w in range(4):
                if w != v:
                    val -= arc(w)
                    val += corner(v, w)
            out.append(val)
        for k in range(3):
            val = Fraction(1) - sum(arc(f) for f in range(4))
            for a, b in quad_edges(k):
                val += corner(a, b)
            out.append(val)
    return out


def evaluate(functional: Sequence, x: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(functional, x)), Fraction(0))
