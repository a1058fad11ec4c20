"""Admissible extreme rays of {x >= 0, A x = 0} by double description.

The cone starts as the nonnegative orthant (extreme rays = unit vectors) and
is cut by one hyperplane at a time.  Intermediate rays whose support breaks
admissibility are dropped straight away: combining two rays takes the union
of their supports, so such a ray can never lead back to an admissible one.
Adjacency is decided combinatorially: two rays are adjacent when no third
ray has support inside the union of theirs.  A ray that could witness
non-adjacency of an admissible pair is itself admissible, so pruning never
removes a needed witness.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from .. import linalg
from ..errors import DimensionGuard


@dataclass(frozen=True)
class ConeSpec:
    dimension: int
    rows: tuple
    triples: tuple = ()

    @staticmethod
    def make(dimension: int, rows: Sequence[Sequence[int]], triples=()) -> "ConeSpec":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        triples = tuple(tuple(t) for t in triples)
        seen = set()
        for t in triples:
            for k in t:
                if not 0 <= k < dimension or k in seen:
                    raise ValueError("admissibility triples must be disjoint coordinate sets")
                seen.add(k)
        for r in rows:
            if len(r) != dimension:
                raise ValueError("row length does not match the dimension")
        return ConeSpec(dimension, rows, triples)

    def admissible_support(self, mask: int) -> bool:
        for t in self.triples:
            c = 0
            for k in t:
                if mask >> k & 1:
                    c += 1
            if c > 1:
                return False
        return True


@dataclass(frozen=True)
class Ray:
    vector: tuple

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, x in enumerate(self.vector) if x)

    def to_json(self) -> list:
        return list(self.vector)


def q_cone(tri, closed: bool = False) -> ConeSpec:
    """The cone Q(T) in quad coordinates, or Q0(T) when ``closed`` (adds the
    two boundary-functional rows for every torus cusp)."""
    from ..coords import boundary_basis, boundary_functional, build_q_matching

    rows = [list(r) for r in build_q_matching(tri).rows]
    if closed:
        for v in tri.skeleton.ideal_vertices():
            for c in boundary_basis(tri, v):
                rows.append(boundary_functional(tri, c).coeffs)
    n = tri.size
    return ConeSpec.make(3 * n, rows, [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(n)])


def _mask(vec) -> int:
    m = 0
    for k, x in enumerate(vec):
        if x:
            m |= 1 << k
    return m


def _normalise(vec) -> tuple:
    g = 0
    for x in vec:
        g = gcd(g, x)
    return tuple(x // g for x in vec) if g > 1 else tuple(vec)


def _order_rows(rows, dim):
    # Sparse rows first keeps intermediate ray sets small; ties by original order.
    return sorted(rows, key=lambda r: (sum(1 for x in r if x), rows.index(r)))


def enumerate_admissible_rays(spec: ConeSpec) -> list[Ray]:
    dim = spec.dimension
    rays = [tuple(int(k == j) for k in range(dim)) for j in range(dim)]
    rays = [r for r in rays if spec.admissible_support(_mask(r))]
    masks = [_mask(r) for r in rays]
    rows = [r for r in spec.rows if any(r)]
    for row in _order_rows(rows, dim):
        vals = [sum(a * b for a, b in zip(row, r) if a) for r in rays]
        zero = [k for k, s in enumerate(vals) if s == 0]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        new_rays = [rays[k] for k in zero]
        new_masks = [masks[k] for k in zero]
        for p in pos:
            mp, sp, rp = masks[p], vals[p], rays[p]
            for q in neg:
                union = mp | masks[q]
                if not spec.admissible_support(union):
                    continue
                adjacent = True
                for k, mk in enumerate(masks):
                    if k != p and k != q and mk | union == union:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sq, rq = vals[q], rays[q]
                vec = _normalise([sp * b - sq * a for a, b in zip(rp, rq)])
                new_rays.append(vec)
                new_masks.append(union)
        rays, masks = new_rays, new_masks
    out = sorted(set(rays), reverse=True)
    return [Ray(r) for r in out]


def is_extreme(spec: ConeSpec, vec: Sequence[int]) -> bool:
    """Certificate check: rank of the rows restricted to the support is |support| - 1."""
    supp = [k for k, x in enumerate(vec) if x]
    if not supp:
        return False
    sub = [[r[k] for k in supp] for r in spec.rows]
    rk = linalg.rank(sub, len(supp)) if sub else 0
    return rk == len(supp) - 1


def brute_force_rays(spec: ConeSpec, max_dimension: int = 12) -> list[Ray]:
    """Test oracle: try every admissible support and keep the minimal ones.

    A nonzero x >= 0 in the cone spans an extreme ray iff the rows restricted
    to its support have a one-dimensional kernel; the kernel vector must then
    be strictly positive on the support.
    """
    dim = spec.dimension
    if dim > max_dimension:
        raise DimensionGuard(f"brute force limited to dimension {max_dimension}, got {dim}")
    out = set()
    for size in range(1, dim + 1):
        for supp in combinations(range(dim), size):
            m = 0
            for k in supp:
                m |= 1 << k
            if not spec.admissible_support(m):
                continue
            sub = [[r[k] for k in supp] for r in spec.rows]
            basis = linalg.nullspace(sub, size) if sub else [
                [int(i == j) for j in range(size)] for i in range(size)]
            if len(basis) != 1:
                continue
            vec = linalg.primitive(basis[0])
            if all(x < 0 for x in vec):
                vec = [-x for x in vec]
            if not all(x > 0 for x in vec):
                continue
            full = [0] * dim
            for k, x in zip(supp, vec):
                full[k] = x
            out.add(tuple(full))
    return [Ray(r) for r in sorted(out, reverse=True)]


def rays_to_json(rays: Sequence[Ray]) -> str:
    return json.dumps([list(r.vector) for r in rays])
