"""Normal surfaces as explicit cell complexes, and their classification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .coords import (QUAD_PAIRS, boundary_basis, boundary_functional, build_q_matching,
                     is_admissible, project_std_to_q, quad_corner_cycle, quad_type)
from .errors import NotAdmissible, NotInKernel, NotSpun, PreconditionError
from .triangulation import EDGE_INDEX, EDGES, Triangulation


def _even(p) -> bool:
    return sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2 == 0


def _tri_cycle(v):
    ws = [w for w in range(4) if w != v]
    if not _even((v, *ws)):
        ws[1], ws[2] = ws[2], ws[1]
    return [(v, w) for w in ws]


def quad_side0(k: int) -> tuple[int, int]:
    """The pair of vertices on the side of quad type k containing vertex 0."""
    return QUAD_PAIRS[k][0]


@dataclass
class SurfaceClass:
    closed: bool
    connected: bool
    orientable: bool
    chi: int
    genus: int
    is_vertex_link: bool
    weight: int
    components: int = 1
    boundary_curves: int = 0

    @property
    def two_sided(self) -> bool:
        # valid because every triangulation here is oriented
        return self.orientable

    def to_json(self) -> dict:
        return {"closed": self.closed, "connected": self.connected, "orientable": self.orientable,
                "chi": self.chi, "genus": self.genus, "is_vertex_link": self.is_vertex_link,
                "weight": self.weight, "components": self.components}


class NormalSurface:
    """A normal surface given by standard coordinates in a triangulation.

    Discs are ``(tet, kind, type, level)`` with kind ``"T"`` (triangle at
    corner ``type``) or ``"Q"`` (quad of ``type``).  Triangles are stacked
    outwards from their corner; quads are stacked from the side containing
    vertex 0.
    """

    def __init__(self, tri: Triangulation, std: Sequence[int], q_origin=None):
        if len(std) != 7 * tri.size:
            raise PreconditionError("standard vector has the wrong length")
        if not is_admissible(std, std=True):
            raise NotAdmissible("standard vector is not admissible")
        self.tri = tri
        self.std = tuple(int(x) for x in std)
        self.q_origin = None if q_origin is None else tuple(q_origin)

    # -- coordinates ------------------------------------------------------
    def tri_count(self, i, v):
        return self.std[7 * i + v]

    def quad(self, i):
        """(type, count) of the quads in tetrahedron i, type None if none."""
        for k in range(3):
            if self.std[7 * i + 4 + k]:
                return k, self.std[7 * i + 4 + k]
        return None, 0

    @property
    def q(self) -> list[int]:
        return project_std_to_q(self.std)

    def is_empty(self) -> bool:
        return not any(self.std)

    # -- combinatorics ----------------------------------------------------
    def edge_points(self, i, a, b) -> int:
        k, Q = self.quad(i)
        n = self.tri_count(i, a) + self.tri_count(i, b)
        if k is not None and quad_type(a, b) != k:
            n += Q
        return n

    def position(self, disc, a, b) -> int:
        """1-based position of the disc's corner on edge (a, b), counted from a."""
        i, kind, t, lev = disc
        if kind == "T":
            if t == a:
                return lev
            return self.edge_points(i, a, b) + 1 - lev
        Q = self.quad(i)[1]
        side = quad_side0(t)
        off = lev if a in side else Q + 1 - lev
        return self.tri_count(i, a) + off

    def arcs_at(self, i, f, a) -> list:
        """Discs cutting corner a of face f of tetrahedron i, ordered from a."""
        out = [(i, "T", a, lev) for lev in range(1, self.tri_count(i, a) + 1)]
        k, Q = self.quad(i)
        if k is not None and quad_type(a, f) == k:
            levels = range(1, Q + 1) if a in quad_side0(k) else range(Q, 0, -1)
            out.extend((i, "Q", k, lev) for lev in levels)
        return out

    def discs(self) -> list:
        out = []
        for i in range(self.tri.size):
            for v in range(4):
                out.extend((i, "T", v, lev) for lev in range(1, self.tri_count(i, v) + 1))
            k, Q = self.quad(i)
            if k is not None:
                out.extend((i, "Q", k, lev) for lev in range(1, Q + 1))
        return out

    @staticmethod
    def disc_cycle(disc):
        """Corners of the disc, as tetrahedron edges (vertex pairs), in cyclic order."""
        _, kind, t, _ = disc
        return _tri_cycle(t) if kind == "T" else quad_corner_cycle(t)

    @cached_property
    def complex(self) -> "CellComplex":
        return CellComplex.build(self)

    def components(self) -> list["NormalSurface"]:
        cx = self.complex
        vecs = [[0] * len(self.std) for _ in range(cx.ncomp)]
        for d, c in zip(cx.discs, cx.comp):
            i, kind, t, _ = d
            vecs[c][7 * i + (t if kind == "T" else 4 + t)] += 1
        return [NormalSurface(self.tri, v) for v in vecs]

    def classify(self) -> SurfaceClass:
        return classify(self)


@dataclass
class CellComplex:
    discs: list
    comp: list               # component index per disc
    ncomp: int
    arc_pairs: list          # [(disc index, disc index)] glued arcs
    free_arcs: list          # [(disc index, tet, face, corner)] arcs in boundary faces
    vertices_per_comp: list
    edges_per_comp: list
    faces_per_comp: list
    orientable_per_comp: list
    boundary_curves_per_comp: list

    @staticmethod
    def build(s: NormalSurface) -> "CellComplex":
        tri = s.tri
        sk = tri.skeleton
        discs = s.discs()
        index = {d: n for n, d in enumerate(discs)}
        parent = list(range(len(discs)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        # arcs
        pairs, free, orient_constraints = [], [], []
        for i in range(tri.size):
            for f in range(4):
                g = tri.gluing(i, f)
                if g is not None and (g[0], g[1][f]) < (i, f):
                    continue
                for a in range(4):
                    if a == f:
                        continue
                    mine = s.arcs_at(i, f, a)
                    if g is None:
                        free.extend((index[d], i, f, a) for d in mine)
                        continue
                    j, p = g
                    theirs = s.arcs_at(j, p[f], p[a])
                    if len(theirs) != len(mine):
                        raise NotInKernel(f"matching fails across face ({i},{f})")
                    b, c = [x for x in range(4) if x not in (a, f)]
                    for d1, d2 in zip(mine, theirs):
                        x1, x2 = index[d1], index[d2]
                        pairs.append((x1, x2))
                        r1, r2 = find(x1), find(x2)
                        if r1 != r2:
                            parent[r1] = r2
                        s1 = _arc_dir(d1, (a, b), (a, c))
                        s2 = _arc_dir(d2, (p[a], p[b]), (p[a], p[c]))
                        # glued discs induce opposite directions on a shared arc
                        orient_constraints.append((x1, x2, -s1 * s2))
        roots = {}
        comp = []
        for x in range(len(discs)):
            r = find(x)
            if r not in roots:
                roots[r] = len(roots)
            comp.append(roots[r])
        ncomp = len(roots)

        # orientation propagation
        adj = [[] for _ in discs]
        for x1, x2, rel in orient_constraints:
            adj[x1].append((x2, rel))
            adj[x2].append((x1, rel))
        sign = [0] * len(discs)
        orientable = [True] * ncomp
        for s0 in range(len(discs)):
            if sign[s0]:
                continue
            sign[s0] = 1
            stack = [s0]
            while stack:
                x = stack.pop()
                for y, rel in adj[x]:
                    want = sign[x] * rel
                    if not sign[y]:
                        sign[y] = want
                        stack.append(y)
                    elif sign[y] != want:
                        orientable[comp[x]] = False

        # counts
        F = [0] * ncomp
        for c in comp:
            F[c] += 1
        E = [0] * ncomp
        for x1, _ in pairs:
            E[comp[x1]] += 1
        for x1, *_ in free:
            E[comp[x1]] += 1
        V = [0] * ncomp
        for edge in sk.edges:
            i, e = edge.members[0]
            a, b = EDGES[e]
            npts = s.edge_points(i, a, b)
            if not npts:
                continue
            by_pos = {}
            for d in discs_on_edge(s, i, a, b):
                by_pos[s.position(d, a, b)] = d
            for pos in range(1, npts + 1):
                V[comp[index[by_pos[pos]]]] += 1

        # boundary curves: free arcs chained through shared boundary points
        bparent = list(range(len(free)))

        def bfind(x):
            while bparent[x] != x:
                bparent[x] = bparent[bparent[x]]
                x = bparent[x]
            return x

        at_point = {}
        for n, (x, i, f, a) in enumerate(free):
            d = discs[x]
            for b in range(4):
                if b in (a, f):
                    continue
                ek = sk.edge_of[i][EDGE_INDEX[a, b]]
                pos = s.position(d, a, b)
                if sk.edge_dir[i][EDGE_INDEX[a, b]] * (1 if a < b else -1) < 0:
                    pos = s.edge_points(i, a, b) + 1 - pos
                key = (ek, pos)
                if key in at_point:
                    r1, r2 = bfind(n), bfind(at_point[key])
                    if r1 != r2:
                        bparent[r1] = r2
                else:
                    at_point[key] = n
        bcount = [0] * ncomp
        for r in {bfind(n) for n in range(len(free))}:
            bcount[comp[free[r][0]]] += 1
        return CellComplex(discs, comp, ncomp, pairs, free, V, E, F, orientable, bcount)

    def chi(self, c=None) -> int:
        if c is None:
            return sum(self.vertices_per_comp) - sum(self.edges_per_comp) + sum(self.faces_per_comp)
        return self.vertices_per_comp[c] - self.edges_per_comp[c] + self.faces_per_comp[c]


def discs_on_edge(s: NormalSurface, i, a, b):
    out = [(i, "T", a, lev) for lev in range(1, s.tri_count(i, a) + 1)]
    out += [(i, "T", b, lev) for lev in range(1, s.tri_count(i, b) + 1)]
    k, Q = s.quad(i)
    if k is not None and quad_type(a, b) != k:
        out += [(i, "Q", k, lev) for lev in range(1, Q + 1)]
    return out


def _arc_dir(disc, e1, e2) -> int:
    """+1 if the disc's corner cycle runs from edge e1 to edge e2, else -1."""
    cyc = [frozenset(e) for e in NormalSurface.disc_cycle(disc)]
    x, y = frozenset(e1), frozenset(e2)
    n = len(cyc)
    k = cyc.index(x)
    if cyc[(k + 1) % n] == y:
        return 1
    if cyc[(k - 1) % n] == y:
        return -1
    raise AssertionError("arc endpoints are not adjacent corners")


def is_vertex_link_vector(tri: Triangulation, std: Sequence[int]) -> bool:
    """No quads, and on each vertex class all corner triangle counts agree."""
    if not any(std) or any(project_std_to_q(std)):
        return False
    for vert in tri.skeleton.vertices:
        vals = {std[7 * i + c] for (i, c) in vert.members}
        if len(vals) > 1:
            return False
    return True


def classify(s: NormalSurface) -> SurfaceClass:
    if s.is_empty():
        return SurfaceClass(True, True, True, 0, 0, False, 0, 0, 0)
    cx = s.complex
    chi = cx.chi()
    orientable = all(cx.orientable_per_comp)
    b = sum(cx.boundary_curves_per_comp)
    if orientable:
        genus = (2 * cx.ncomp - chi - b) // 2
    else:
        genus = 2 * cx.ncomp - chi - b
    return SurfaceClass(
        closed=not cx.free_arcs,
        connected=cx.ncomp == 1,
        orientable=orientable,
        chi=chi,
        genus=genus,
        is_vertex_link=is_vertex_link_vector(s.tri, s.std),
        weight=sum(cx.vertices_per_comp),
        components=cx.ncomp,
        boundary_curves=b,
    )


# ---------------------------------------------------------------------------
# reconstruction from quad coordinates

@dataclass
class SpunReport:
    tri: Triangulation
    q: tuple
    nu: dict                  # vertex -> {curve name: value}
    curves: dict              # vertex -> {curve name: CuspCurve}

    def to_json(self) -> dict:
        return {"q": list(self.q), "spun": True,
                "nu": {str(v): vals for v, vals in self.nu.items()}}


def cusp_curves(tri: Triangulation, named: dict | None = None) -> dict:
    """Peripheral curves per torus cusp: the named ones when given, else a computed basis."""
    out = {}
    named = named or {}
    for v in tri.skeleton.ideal_vertices():
        mine = {k: c for k, c in named.items() if c.vertex == v}
        if len(mine) >= 2:
            out[v] = mine
        else:
            out[v] = {c.name: c for c in boundary_basis(tri, v)}
    return out


def reconstruct_from_q(tri: Triangulation, x: Sequence[int], curves: dict | None = None):
    """Closed surface with minimal triangle coordinates, or a report of spinning."""
    x = tuple(int(v) for v in x)
    if len(x) != 3 * tri.size:
        raise PreconditionError("quad vector has the wrong length")
    if not is_admissible(x, std=False):
        raise NotAdmissible("quad vector is not admissible")
    if not build_q_matching(tri).annihilates(x):
        raise NotInKernel("quad vector violates the Q-matching equations")
    per_cusp = cusp_curves(tri, curves)
    nu = {}
    for v, cs in per_cusp.items():
        nu[v] = {name: boundary_functional(tri, c)(x) for name, c in cs.items()}
    if any(val for d in nu.values() for val in d.values()):
        return SpunReport(tri, x, nu, per_cusp)
    return NormalSurface(tri, triangles_from_quads(tri, x), q_origin=x)


def triangles_from_quads(tri: Triangulation, x: Sequence[int]) -> list[int]:
    """Standard coordinates with the fewest triangles having the given quads.

    Triangle counts at the corners of one vertex are propagated through face
    gluings (crossing face f from corner a of tet i into tet j forces
    t_j(p a) = t_i(a) + q_i(a|f) - q_j(pa|pf)), then shifted so the minimum
    at each vertex is 0.
    """
    sk = tri.skeleton
    std = [0] * (7 * tri.size)
    for i in range(tri.size):
        for k in range(3):
            std[7 * i + 4 + k] = x[3 * i + k]
    for vert in sk.vertices:
        val = {}
        root = vert.members[0]
        val[root] = 0
        stack = [root]
        while stack:
            i, a = stack.pop()
            for f in range(4):
                if f == a:
                    continue
                g = tri.gluing(i, f)
                if g is None:
                    continue
                j, p = g
                want = val[i, a] + x[3 * i + quad_type(a, f)] - x[3 * j + quad_type(p[a], p[f])]
                if (j, p[a]) in val:
                    if val[j, p[a]] != want:
                        raise PreconditionError(
                            "triangle offsets are inconsistent around a vertex link "
                            "(the quad vector is not a closed surface)")
                else:
                    val[j, p[a]] = want
                    stack.append((j, p[a]))
        lo = min(val.values())
        for (i, a), t in val.items():
            std[7 * i + a] = t - lo
    return std


def double(x: Sequence[int]) -> list[int]:
    return [2 * v for v in x]


def two_sided_representative(tri: Triangulation, x: Sequence[int], curves=None):
    """The surface on the ray of x: the primitive one, or its double if one-sided."""
    s = reconstruct_from_q(tri, x, curves)
    if isinstance(s, SpunReport):
        raise PreconditionError("ray is spun, not closed")
    if s.classify().orientable:
        return s, False
    return reconstruct_from_q(tri, double(x), curves), True


INFINITE_SLOPE = math.inf


def boundary_slope(report: SpunReport, mu, lam):
    """-nu(lambda)/nu(mu) at the reported vector; ``math.inf`` when nu(mu) = 0."""
    if not isinstance(report, SpunReport):
        raise NotSpun("surface is closed; it has no boundary slope")
    num = boundary_functional(report.tri, lam)(report.q)
    den = boundary_functional(report.tri, mu)(report.q)
    if den == 0:
        if num == 0:
            raise NotSpun("both boundary functionals vanish")
        return INFINITE_SLOPE
    return Fraction(-num, den)
