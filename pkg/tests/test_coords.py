from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nst import perm as P
from nst.coords import (
    EDGE_INDEX, build_q_matching, build_std_matching, boundary_basis, boundary_functional,
    euler_functional, evaluate, is_admissible, project_std_to_q, quad_type, reduce_functional,
    reverse_curve, vertex_loop,
)
from nst.enumerate import enumerate_admissible_rays, q_cone
from nst.errors import PreconditionError
from nst.surface import NormalSurface
from nst.triangulation import Triangulation
from nst.triangulation.truncate import truncate_ideal_vertices

from helpers import KNOTS, fig8, free_tet, load_fixture, random_triangulation, union_find_classes

# fixed sign choice for the two peripheral curves on the shipped figure-eight file
EPS_MU = EPS_LAMBDA = -1


def _brute_force_q_rows(tri):
    """One row per interior edge: +1 / -1 for the two quads tilting either way at each occurrence."""
    sk = tri.skeleton
    rows = []
    for members in union_find_classes(tri)[0]:
        i0, e0 = members[0]
        if sk.edges[sk.edge_of[i0][EDGE_INDEX[e0]]].boundary:
            continue
        row = [0] * (3 * tri.size)
        for i, (a, b) in members:
            c, d = [v for v in range(4) if v not in (a, b)]
            if P.sign((a, b, c, d)) < 0:
                c, d = d, c
            row[3 * i + quad_type(a, c)] += 1
            row[3 * i + quad_type(a, d)] -= 1
        rows.append(row)
    return rows


def _same_rows_up_to_sign(ours, theirs):
    ours = sorted(list(r) for r in ours)
    return ours == sorted(theirs) or ours == sorted([-x for x in r] for r in theirs)


# -- Q-matching -------------------------------------------------------------------

def test_figure_eight_matching_rows():
    tri, _ = fig8()
    m = build_q_matching(tri)
    target = [1, 1, -2, 1, 1, -2]
    assert len(m.rows) == 2 and m.rank == 1
    for row in m.rows:
        assert list(row) in (target, [-x for x in target])


def test_free_tetrahedron_has_no_equations():
    assert build_q_matching(free_tet()).rows == []
    assert build_std_matching(free_tet()).rows == []


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_q_rows_match_brute_force(seed):
    rng = random.Random(seed)
    tri = random_triangulation(rng, rng.randint(1, 3), free_prob=rng.choice([0.0, 0.2]))
    if tri is None:
        return
    m = build_q_matching(tri)
    assert _same_rows_up_to_sign(m.rows, _brute_force_q_rows(tri))
    assert all(abs(x) <= 2 for r in m.rows for x in r)


# -- standard matching ------------------------------------------------------------

def _internal_faces(tri):
    return sum(g is not None for row in tri.gluings for g in row) // 2


def test_std_rows_two_tets_one_face():
    tri = Triangulation([[(1, (1, 0, 2, 3)), None, None, None], [None, (0, (1, 0, 2, 3)), None, None]])
    assert len(build_std_matching(tri).rows) == 3


def test_std_rows_truncated_figure_eight():
    t = truncate_ideal_vertices(fig8()[0])
    assert len(build_std_matching(t).rows) == 3 * _internal_faces(t)


def test_std_row_shape():
    t = truncate_ideal_vertices(fig8()[0])
    for row in build_std_matching(t).rows:
        nz = sorted(x for x in row if x)
        assert nz == [-1, -1, 1, 1]


# -- projection and admissibility ---------------------------------------------------

def test_projection_basics():
    assert project_std_to_q([0] * 14) == [0] * 6
    assert project_std_to_q([1, 1, 1, 1, 0, 0, 0] * 2) == [0] * 6
    assert project_std_to_q([0, 0, 0, 0, 1, 2, 3]) == [1, 2, 3]


@pytest.mark.parametrize("x, expected", [
    ((2, 0, 0, 0, 0, 1), True),
    ((1, 1, 0, 0, 0, 0), False),
    ((0, 0, -1, 0, 0, 1), False),
    ((0, 0, 0, 0, 0, 0), True),
])
def test_is_admissible_quad(x, expected):
    assert is_admissible(x, std=False) is expected


def test_is_admissible_standard():
    assert is_admissible([3, 1, 0, 2, 0, 5, 0], std=True)
    assert not is_admissible([0, 0, 0, 0, 1, 0, 1], std=True)
    assert not is_admissible([-1, 0, 0, 0, 0, 0, 0], std=True)


# -- peripheral curves ------------------------------------------------------------

def test_figure_eight_functionals():
    tri, curves = fig8()
    m = build_q_matching(tri)
    lam = boundary_functional(tri, curves["longitude"])
    mu = boundary_functional(tri, curves["meridian"])
    want_lam = [EPS_LAMBDA * c for c in (2, 2, -4, 0, 0, 0)]
    want_mu = [EPS_MU * c for c in (0, -1, 1, -1, 0, 1)]
    assert reduce_functional(lam.coeffs, m) == reduce_functional(want_lam, m)
    assert reduce_functional(mu.coeffs, m) == reduce_functional(want_mu, m)


def test_reversed_curve_negates():
    tri, curves = fig8()
    for c in curves.values():
        fwd = boundary_functional(tri, c).coeffs
        back = boundary_functional(tri, reverse_curve(tri, c)).coeffs
        assert back == [-x for x in fwd]


def test_figure_eight_basis_rank():
    from nst import linalg
    tri, _ = fig8()
    basis = boundary_basis(tri, 0)
    assert len(basis) == 2
    rows = [boundary_functional(tri, c).coeffs for c in basis]
    m = build_q_matching(tri)
    reduced = [reduce_functional(r, m) for r in rows]
    assert linalg.rank(reduced, 6) <= 2
    # on the cone the two functionals detect spinning, so together they are nonzero
    assert any(any(r) for r in reduced)


@pytest.mark.parametrize("name", KNOTS)
def test_vertex_loops_give_matching_rows(name):
    tri = load_fixture(name)
    m = build_q_matching(tri)
    rows = {tuple(r) for r in m.rows} | {tuple(-x for x in r) for r in m.rows}
    for i in range(min(tri.size, 3)):
        for other in range(1, 4):
            loop = vertex_loop(tri, i, 0, other)
            assert tuple(boundary_functional(tri, loop).coeffs) in rows


def test_homologous_curves_agree_on_cone():
    tri, curves = fig8()
    m = build_q_matching(tri)
    lam = boundary_functional(tri, curves["longitude"]).coeffs
    loop = boundary_functional(tri, vertex_loop(tri, 0, 0, 1)).coeffs
    shifted = [a + b for a, b in zip(lam, loop)]
    for ray in enumerate_admissible_rays(q_cone(tri)):
        assert m.annihilates(ray.vector)
        assert evaluate(shifted, ray.vector) == evaluate(lam, ray.vector)


def test_basis_needs_a_torus_link():
    with pytest.raises(PreconditionError):
        boundary_basis(free_tet(), 0)


# -- Euler characteristic -----------------------------------------------------------

def test_euler_on_vertex_links_of_truncated_figure_eight():
    t = truncate_ideal_vertices(fig8()[0])
    sk = t.skeleton
    chi = euler_functional(t)
    for vert in sk.vertices:
        std = [0] * (7 * t.size)
        for i, c in vert.members:
            std[7 * i + c] = 1
        # boundary vertex links are discs, interior ones spheres
        want = 1 if vert.boundary else 2
        assert evaluate(chi, std) == want == NormalSurface(t, std).classify().chi
    # the surface separating boundary vertices from interior ones, disc by disc
    x = [0] * (7 * t.size)
    for i in range(t.size):
        on = [v for v in range(4) if sk.vertices[sk.vertex_of[i][v]].boundary]
        if len(on) == 1:
            x[7 * i + on[0]] = 1
        elif len(on) == 3:
            x[7 * i + next(v for v in range(4) if v not in on)] = 1
        elif len(on) == 2:
            x[7 * i + 4 + quad_type(*on)] = 1
    assert build_std_matching(t).annihilates(x)
    assert evaluate(chi, x) == NormalSurface(t, x).classify().chi


def test_euler_single_quad():
    chi = euler_functional(free_tet())
    assert evaluate(chi, [0, 0, 0, 0, 1, 0, 0]) == 1
    assert chi[4] == Fraction(1)


def test_euler_rejects_ideal():
    with pytest.raises(PreconditionError):
        euler_functional(fig8()[0])
