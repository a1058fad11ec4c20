"""Branch and bound search for a normal surface of positive Euler characteristic.

The polytope is ``{x >= 0 : x satisfies the standard matching equations,
sum(x) = 1}`` and the objective is the Euler characteristic functional.
Each search node forces some coordinates to zero.  Nodes branch in two ways:

* quad branching: a tetrahedron whose LP optimum uses two or more quad types
  gets three children, each allowing only one quad type;
* vertex branching: an admissible optimum whose only positive-chi pieces are
  vertex links gets one child per corner of that vertex, forcing the
  triangle at that corner to zero (a connected surface other than the link
  always misses some corner triangle of each vertex).

A node is pruned only when an exact certificate shows its maximum is <= 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from ..coords import EDGE_INDEX, build_std_matching, euler_functional, quad_edges
from ..errors import PreconditionError
from ..triangulation import Triangulation
from .lp import NormalisedLP, exact_simplex

_EPS = 1e-9


@dataclass
class SearchStats:
    nodes: int = 0
    lps: int = 0
    exact: int = 0
    vertex_branches: int = 0
    log: list = field(default_factory=list)


def tetrahedron_order(tri: Triangulation) -> list[int]:
    """Tetrahedra by descending sum of incident edge degrees, then by index."""
    sk = tri.skeleton
    score = [sum(sk.edges[k].degree for k in sk.edge_of[i]) for i in range(tri.size)]
    return sorted(range(tri.size), key=lambda i: (-score[i], i))


def excluded_columns(tri: Triangulation, component: int) -> set[int]:
    """Disc types with a corner on an edge of the given boundary component."""
    sk = tri.skeleton
    edges = sk.boundary_components[component].edges
    out = set()
    for i in range(tri.size):
        def on(a, b):
            return sk.edge_of[i][EDGE_INDEX[a, b]] in edges

        for v in range(4):
            if any(on(v, w) for w in range(4) if w != v):
                out.add(7 * i + v)
        for k in range(3):
            if any(on(a, b) for a, b in quad_edges(k)):
                out.add(7 * i + 4 + k)
    return out


def _exact_on_support(rows, chi, support):
    """Exact optimum of the node restricted to a support set of columns."""
    cols = sorted(support)
    sub = [[r[j] for j in cols] for r in rows if any(r[j] for j in cols)]
    sub.append([1] * len(cols))
    rhs = [0] * (len(sub) - 1) + [1]
    val, x = exact_simplex(sub, rhs, [chi[j] for j in cols])
    if val is None:
        return None, None
    full = [Fraction(0)] * len(chi)
    for j, v in zip(cols, x):
        full[j] = v
    return val, full


def _integral(x) -> list[int]:
    den = lcm(*[v.denominator for v in x if v])
    return [int(v * den) for v in x]


def find_positive_chi_surface(tri: Triangulation, excluded_boundary: int | None = None,
                              strict: bool = False, stats: SearchStats | None = None):
    """Standard coordinates of a connected, non-vertex-link normal surface with chi > 0.

    ``excluded_boundary`` names a boundary component (index into
    ``tri.skeleton.boundary_components``) that the surface must avoid.
    Returns None when no such surface exists.  With ``strict`` the
    triangulation must have no internal vertices and one vertex per
    boundary component.
    """
    from ..surface import NormalSurface

    if tri.size and tri.is_ideal:
        raise PreconditionError("the search needs a compact triangulation")
    if strict and not tri.skeleton.satisfies_vertex_condition():
        raise PreconditionError("triangulation does not satisfy the vertex condition")
    stats = stats if stats is not None else SearchStats()
    if tri.size == 0:
        return None
    n = tri.size
    rows = build_std_matching(tri).rows
    chi = euler_functional(tri)
    lp = NormalisedLP(rows, chi)
    base = excluded_columns(tri, excluded_boundary) if excluded_boundary is not None else set()
    order = tetrahedron_order(tri)
    sk = tri.skeleton
    corners_of = [list(v.members) for v in sk.vertices]
    vertex_of = sk.vertex_of

    stack = [frozenset(base)]
    seen = set()
    while stack:
        fixed = stack.pop()
        if fixed in seen:
            continue
        seen.add(fixed)
        stats.nodes += 1
        res = lp.solve(set(fixed))
        stats.lps += 1
        if not res.positive:
            continue
        x = res.x
        bad = None
        for i in order:
            used = [k for k in range(3) if x[7 * i + 4 + k] > _EPS]
            if len(used) > 1:
                bad = i
                break
        if bad is not None:
            kids = []
            for k in range(3):
                others = {7 * bad + 4 + q for q in range(3) if q != k}
                if not others <= fixed:
                    kids.append(fixed | others)
            # explore the child keeping the largest quad value first
            kids.sort(key=lambda s: -sum(x[j] for j in range(7 * bad + 4, 7 * bad + 7) if j not in s))
            stack.extend(reversed(kids))
            continue
        # admissible optimum: make it exact and look at its components
        support = {j for j in range(7 * n) if x[j] > _EPS}
        val, xe = _exact_on_support(rows, lp.c, support)
        stats.exact += 1
        if val is None or val <= 0:
            free = [j for j in range(7 * n) if j not in fixed]
            val, xe = _exact_on_support(rows, lp.c, set(free)) if _admissible_support(free, n) \
                else (None, None)
            if val is None or val <= 0:
                # cannot make progress exactly here; branch on the first tetrahedron
                # that still allows several quad types
                i = next((i for i in order if sum(7 * i + 4 + k not in fixed for k in range(3)) > 1), None)
                if i is None:
                    continue
                for k in range(3):
                    others = {7 * i + 4 + q for q in range(3) if q != k}
                    stack.append(fixed | others)
                continue
        vec = _integral(xe)
        surf = NormalSurface(tri, vec)
        link_vertices = set()
        for comp in surf.components():
            cls = comp.classify()
            if cls.chi > 0 and not cls.is_vertex_link:
                stats.log.append(("found", stats.nodes))
                return list(comp.std)
            if cls.chi > 0:
                i, c = next((j // 7, j % 7) for j, v in enumerate(comp.std) if v)
                link_vertices.add(vertex_of[i][c])
        if not link_vertices:
            raise AssertionError("positive optimum without a positive-chi component")
        v = min(link_vertices)
        stats.vertex_branches += 1
        kids = []
        for (i, c) in corners_of[v]:
            col = 7 * i + c
            if col not in fixed:
                kids.append(fixed | {col})
        stack.extend(reversed(kids))
    return None


def _admissible_support(free, n) -> bool:
    fs = set(free)
    return all(sum(7 * i + 4 + k in fs for k in range(3)) <= 1 for i in range(n))
