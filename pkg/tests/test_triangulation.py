from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from nst import perm as P
from nst.errors import FormatError, GluingError, InvalidTriangulation, OrientationError, PreconditionError
from nst.triangulation import (
    Triangulation, compute_skeleton, format_triangulation, parse_triangulation, vertex_link,
)
from nst.triangulation.truncate import truncate_ideal_vertices

from helpers import KNOTS, fig8, free_tet, load_fixture, random_triangulation, union_find_classes


def _random(seed, n=None, free_prob=0.0):
    rng = random.Random(seed)
    return random_triangulation(rng, n or rng.randint(1, 3), free_prob=free_prob)


# -- parsing ---------------------------------------------------------------------

def test_parse_figure_eight():
    tri, _ = fig8()
    sk = tri.skeleton
    assert tri.size == 2
    assert sorted(e.degree for e in sk.edges) == [6, 6]
    assert len(sk.vertices) == 1 and sk.vertices[0].kind == "ideal"
    assert tri.is_ideal and not tri.has_boundary


def test_parse_free_tetrahedron():
    tri = parse_triangulation("tets 1\n- - - -\n")
    assert tri.size == 1 and tri.boundary_faces() == [(0, f) for f in range(4)]


@pytest.mark.parametrize("text, err", [
    ("tets 2\n1:1023 - - -\n0:0123 - - -\n", GluingError),      # reverse gluing lands on the wrong face
    ("tets 2\n1:1023 - - -\n- 0:0132 - -\n", GluingError),      # (0,0) -> (1,1) but (1,1) -> (0,1)
    ("tets 2\n1:0123 - - -\n0:0123 - - -\n", OrientationError),  # even permutation
    ("tets 1\n3:1023 - - -\n", Exception),
    ("tets x\n", FormatError),
    ("tets 2\n- - - -\n", FormatError),
    ("tets 1\n- - -\n", FormatError),
    ("tets 1\n0:0113 - - -\n", FormatError),
    ("", FormatError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_triangulation(text)


def test_out_of_range_index_is_reported():
    from nst.errors import IndexRangeError
    with pytest.raises((IndexRangeError, GluingError)):
        parse_triangulation("tets 1\n3:1023 - - -\n")


@pytest.mark.parametrize("name", KNOTS + ["figure8"])
def test_format_round_trip(name):
    tri = load_fixture(name)
    assert parse_triangulation(format_triangulation(tri)) == tri


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_gluing_involution_and_parity(seed):
    tri = _random(seed, free_prob=0.2)
    if tri is None:
        return
    for i in range(tri.size):
        for f in range(4):
            g = tri.gluing(i, f)
            if g is None:
                continue
            j, p = g
            assert P.sign(p) == -1
            assert tri.gluing(j, p[f]) == (i, P.inverse(p))


# -- skeleton --------------------------------------------------------------------

def _class_sizes(classes):
    return sorted(len(c) for c in classes)


def test_skeleton_figure_eight_matches_union_find():
    tri, _ = fig8()
    edges, verts = union_find_classes(tri)
    assert _class_sizes(edges) == [6, 6]
    assert len(verts) == 1
    assert len(tri.skeleton.edges) == 2


def test_skeleton_free_tetrahedron():
    sk = free_tet().skeleton
    assert len(sk.edges) == 6 and all(e.boundary for e in sk.edges)
    assert len(sk.vertices) == 4


def test_two_tets_glued_along_one_face():
    tri = Triangulation([[(1, (1, 0, 2, 3)), None, None, None], [None, (0, (1, 0, 2, 3)), None, None]])
    assert len(tri.skeleton.edges) == 9
    edges, _ = union_find_classes(tri)
    assert len(edges) == 9


@given(st.integers(0, 10**6), st.sampled_from([0.0, 0.25]))
@settings(max_examples=60, deadline=None)
def test_skeleton_agrees_with_union_find(seed, free_prob):
    tri = _random(seed, free_prob=free_prob)
    if tri is None:
        return
    sk = tri.skeleton
    edges, verts = union_find_classes(tri)
    assert sorted(len(e.members) for e in sk.edges) == _class_sizes(edges)
    assert sorted(len(v.members) for v in sk.vertices) == _class_sizes(verts)
    # interior degrees plus boundary incidences account for all 6t tet-edges
    assert sum(len(e.members) for e in sk.edges) == 6 * tri.size


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_skeleton_stable_under_relabelling(seed):
    tri = _random(seed, free_prob=0.2)
    if tri is None:
        return
    rng = random.Random(seed)
    order = list(range(tri.size))
    rng.shuffle(order)
    perms = [rng.choice(P.EVEN) for _ in range(tri.size)]
    other = tri.relabel(order, perms)
    a, b = tri.skeleton, other.skeleton
    assert sorted(len(e.members) for e in a.edges) == sorted(len(e.members) for e in b.edges)
    assert sorted((v.kind, len(v.members)) for v in a.vertices) == \
        sorted((v.kind, len(v.members)) for v in b.vertices)
    assert compute_skeleton(tri).edge_of == a.edge_of


# -- vertex links -----------------------------------------------------------------

def test_figure_eight_link_is_torus_with_eight_triangles():
    tri, _ = fig8()
    link = vertex_link(tri, 0)
    assert len(link.triangles) == 8
    assert link.is_torus and link.genus == 1


def test_free_tetrahedron_links_are_discs():
    tri = free_tet()
    for v in range(4):
        link = vertex_link(tri, v)
        assert len(link.triangles) == 1 and link.is_disc


@pytest.mark.parametrize("name", KNOTS)
def test_knot_fixtures_have_one_torus_cusp(name):
    tri = load_fixture(name)
    ideal = tri.skeleton.ideal_vertices()
    assert len(ideal) == 1
    assert vertex_link(tri, ideal[0]).is_torus


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_link_chi_two_ways(seed):
    tri = _random(seed, free_prob=0.2)
    if tri is None:
        return
    for v in range(len(tri.skeleton.vertices)):
        link = vertex_link(tri, v)
        summary = tri.skeleton.vertices[v]
        assert len(link.triangles) == len(summary.members)
        # the link walk and the skeleton's own link summary are computed separately
        assert link.chi == summary.link_chi
        assert link.closed == summary.link_closed
        assert link.orientable and summary.link_orientable


def test_unknown_vertex():
    with pytest.raises(PreconditionError):
        vertex_link(free_tet(), 7)


# -- truncation -------------------------------------------------------------------

def test_truncate_figure_eight():
    tri, _ = fig8()
    t = truncate_ideal_vertices(tri)
    assert t.is_valid() and not t.is_ideal
    comps = t.skeleton.boundary_components
    assert len(comps) == 1 and comps[0].euler == 0
    assert all(lab == ("V", 0) for lab in t.labels.values())


@pytest.mark.parametrize("name", ["3_1", "5_2"])
def test_truncate_knots(name):
    t = truncate_ideal_vertices(load_fixture(name))
    assert t.skeleton.boundary_genera() == [1]


def test_truncate_compact_input_is_an_error():
    with pytest.raises(PreconditionError):
        truncate_ideal_vertices(free_tet())
    t = truncate_ideal_vertices(fig8()[0])
    with pytest.raises(PreconditionError):
        truncate_ideal_vertices(t)


def test_invalid_vertex_link_is_rejected():
    # one vertex link has boundary but is not a disc
    text = "tets 2\n1:3120 1:1230 - -\n1:1230 1:3012 0:3012 0:3120\n"
    tri = parse_triangulation(text, validate=False)
    assert not tri.is_valid()
    with pytest.raises(InvalidTriangulation):
        parse_triangulation(text)
