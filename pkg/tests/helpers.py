"""Fixture loading, random triangulations and independent test oracles."""
from __future__ import annotations

import random
from importlib import resources

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from nst import perm as P
from nst.coords import parse_curves
from nst.triangulation import EDGES, Triangulation, parse_triangulation

KNOTS = ["3_1", "4_1", "5_2", "8_16", "8_17"]


def fixture_text(name: str) -> str:
    return resources.files("nst").joinpath("data", f"{name}.tri").read_text(encoding="utf-8")


def load_fixture(name: str) -> Triangulation:
    return parse_triangulation(fixture_text(name))


def fig8():
    text = fixture_text("figure8")
    tri = parse_triangulation(text)
    return tri, parse_curves(text, tri)


def free_tet() -> Triangulation:
    return Triangulation([[None] * 4])


def std_spec(tri: Triangulation):
    """The standard-coordinate cone with one quad triple per tetrahedron."""
    from nst.coords import build_std_matching
    from nst.enumerate import ConeSpec

    n = tri.size
    return ConeSpec.make(7 * n, build_std_matching(tri).rows,
                         [(7 * i + 4, 7 * i + 5, 7 * i + 6) for i in range(n)])


def random_surface_pair(seed: int):
    """A compact triangulation with a two-sided vertex surface of its standard cone."""
    from nst.enumerate import enumerate_admissible_rays
    from nst.surface import NormalSurface, double

    rng = random.Random(seed)
    for _ in range(40):
        tri = random_triangulation(rng, rng.randint(1, 3), free_prob=rng.choice([0.1, 0.2, 0.3]))
        if tri is None or tri.is_ideal:
            continue
        rays = enumerate_admissible_rays(std_spec(tri))
        if not rays:
            continue
        x = list(rng.choice(rays).vector)
        s = NormalSurface(tri, x)
        if not s.classify().two_sided:
            s = NormalSurface(tri, double(x))
        return tri, s
    return None


def random_triangulation(rng: random.Random, n: int, free_prob: float = 0.0,
                         valid: bool = True, tries: int = 2000) -> Triangulation | None:
    """Random oriented gluing of n tetrahedra; each face stays free with probability free_prob."""
    for _ in range(tries):
        faces = [(i, f) for i in range(n) for f in range(4)]
        rng.shuffle(faces)
        free = [x for x in faces if rng.random() < free_prob]
        paired = [x for x in faces if x not in free]
        if len(paired) % 2:
            free.append(paired.pop())
        rows = [[None] * 4 for _ in range(n)]
        for (i, f), (j, g) in zip(paired[::2], paired[1::2]):
            p = rng.choice([q for q in P.ODD if q[f] == g])
            rows[i][f] = (j, p)
            rows[j][g] = (i, P.inverse(p))
        tri = Triangulation(rows)
        if len(tri.components()) != 1:
            continue
        if not valid or tri.is_valid():
            return tri
    return None


# -- skeleton by plain union-find over (tet, edge) and (tet, vertex) pairs --------

def union_find_classes(tri: Triangulation):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for i in range(tri.size):
        for e in EDGES:
            find(("e", i, e))
        for v in range(4):
            find(("v", i, v))
        for f in range(4):
            g = tri.gluing(i, f)
            if g is None:
                continue
            j, p = g
            for v in range(4):
                if v != f:
                    union(("v", i, v), ("v", j, p[v]))
            for a, b in EDGES:
                if f not in (a, b):
                    union(("e", i, (a, b)), ("e", j, tuple(sorted((p[a], p[b])))))
    edges, verts = {}, {}
    for x in list(parent):
        (edges if x[0] == "e" else verts).setdefault(find(x), []).append(x[1:])
    return list(edges.values()), list(verts.values())


# -- first homology from the dual spine -----------------------------------------

def _invariant_factors(rows, ncols):
    if not rows:
        return []
    m = smith_normal_form(Matrix(rows), domain=ZZ)
    return [abs(int(m[k, k])) for k in range(min(m.shape)) if m[k, k] != 0]


def dual_spine_h1(tri: Triangulation):
    """(rank, torsion) of H1 from the complex dual to interior edges, internal faces and tets.

    This complex is a spine of the manifold with small balls removed around
    the vertices, which does not change H1.
    """
    faces = {}
    for i in range(tri.size):
        for f in range(4):
            g = tri.gluing(i, f)
            if g is not None and (i, f) <= (g[0], g[1][f]):
                faces[i, f] = len(faces)

    def crossing(i, f):
        g = tri.gluing(i, f)
        if (i, f) in faces:
            return faces[i, f], 1
        return faces[g[0], g[1][f]], -1

    d1 = [[0] * len(faces) for _ in range(tri.size)]
    for (i, f), k in faces.items():
        j = tri.gluing(i, f)[0]
        d1[j][k] += 1
        d1[i][k] -= 1
    d2 = []
    edge_classes, _ = union_find_classes(tri)
    for members in edge_classes:
        i, (a, b) = members[0]
        x = next(v for v in range(4) if v not in (a, b))
        row = _ring_row(tri, (i, a, b, x), crossing, len(faces))
        if row is not None:
            d2.append(row)
    nf = len(faces)
    r1 = Matrix(d1).rank() if faces and tri.size else 0
    inv2 = _invariant_factors(d2, nf)
    rank = nf - r1 - len(inv2)
    return rank, sorted(v for v in inv2 if v > 1)


def _ring_row(tri, start, crossing, nf):
    """Signed faces crossed walking once around an edge; None for a boundary edge."""
    row = [0] * nf
    state = start
    for _ in range(6 * tri.size + 1):
        i, a, b, x = state
        g = tri.gluing(i, x)
        if g is None:
            return None
        k, s = crossing(i, x)
        row[k] += s
        j, p = g
        y = next(v for v in range(4) if v not in (a, b, x))
        state = (j, p[a], p[b], p[y])
        if state == start:
            return row
    raise AssertionError("edge walk did not close up")


# -- isomorphism by propagation from every choice of image for tetrahedron 0 ------

def isomorphic(s: Triangulation, t: Triangulation) -> bool:
    if s.size != t.size:
        return False
    if s.size == 0:
        return True
    for j0 in range(t.size):
        for p0 in P.ALL:
            tet_map = {0: (j0, p0)}
            stack = [0]
            ok = True
            while stack and ok:
                i = stack.pop()
                j, p = tet_map[i]
                for f in range(4):
                    gs, gt = s.gluing(i, f), t.gluing(j, p[f])
                    if (gs is None) != (gt is None):
                        ok = False
                        break
                    if gs is None:
                        continue
                    i2, q = gs
                    j2, r = gt
                    want = P.compose(r, P.compose(p, P.inverse(q)))   # image of tet i2's vertices
                    if i2 in tet_map:
                        if tet_map[i2] != (j2, want):
                            ok = False
                            break
                    else:
                        tet_map[i2] = (j2, want)
                        stack.append(i2)
            if ok and len({v[0] for v in tet_map.values()}) == s.size == len(tet_map):
                return True
    return False
