from __future__ import annotations

import json
import random

import pytest

from nst import pipeline
from nst.enumerate import enumerate_admissible_rays, q_cone
from nst.errors import InvalidTriangulation, PreconditionError
from nst.pipeline import (
    COMPRESSIBLE, INCOMPRESSIBLE, CrushStep, IncompressibilityResult, check_knot_complement,
    decide_largeness,
)
from nst.surface import NormalSurface, SurfaceClass, two_sided_representative
from nst.triangulation import parse_triangulation

from helpers import fig8, free_tet, load_fixture, random_triangulation

BAD_LINK = "tets 2\n1:3120 1:1230 - -\n1:1230 1:3012 0:3012 0:3120\n"


@pytest.fixture(scope="module")
def trefoil_surface():
    tri = load_fixture("3_1")
    (ray,) = enumerate_admissible_rays(q_cone(tri, closed=True))
    surf, doubled = two_sided_representative(tri, ray.vector)
    return tri, surf


def test_trefoil_genus_two_surface_compresses(trefoil_surface):
    tri, surf = trefoil_surface
    assert surf.classify().genus == 2
    res = pipeline.test_incompressible(tri, surf)
    assert res.verdict == COMPRESSIBLE and not res.incompressible
    assert len(res.pieces) == 2
    assert res.trace, "a compression must come from at least one crush"
    for step in res.trace:
        assert step.tets_after < step.tets_before
    cert = res.certificate
    assert cert["genus"] == 2 and cert["surface_chi"] in (1, 2)
    assert cert["genera_before"] in ([2], [1, 2])
    assert cert["genera_after"] != [cert["genera_before"]]
    json.dumps(res.to_json())


def test_trefoil_is_deterministic(trefoil_surface):
    tri, surf = trefoil_surface
    a = pipeline.test_incompressible(tri, surf, seed=3).to_json()
    b = pipeline.test_incompressible(tri, surf, seed=3).to_json()
    for d in (a, b):
        d.pop("seconds")
    assert a == b


def test_cusp_torus_is_incompressible():
    tri, _ = fig8()
    res = pipeline.test_incompressible(tri, NormalSurface(tri, [1, 1, 1, 1, 0, 0, 0] * 2))
    assert res.verdict == INCOMPRESSIBLE
    assert len(res.pieces) == 2
    assert res.certificate == {"genus": 1}


@pytest.mark.parametrize("make, message", [
    (lambda: (free_tet(), NormalSurface(free_tet(), [0, 0, 0, 0, 0, 1, 0])), "not closed"),
    (lambda: (fig8()[0], NormalSurface(fig8()[0], [2, 2, 2, 2, 0, 0, 0] * 2)), "not connected"),
])
def test_surface_preconditions(make, message):
    tri, s = make()
    with pytest.raises(PreconditionError, match=message):
        pipeline.test_incompressible(tri, s)


def test_sphere_is_rejected():
    rng = random.Random(1)
    for _ in range(200):
        tri = random_triangulation(rng, 1)
        if tri is None or tri.is_ideal:
            continue
        std = [0] * 7
        for i, c in tri.skeleton.vertices[0].members:
            std[7 * i + c] += 1
        with pytest.raises(PreconditionError, match="sphere"):
            pipeline.test_incompressible(tri, NormalSurface(tri, std))
        return
    pytest.fail("no closed one-tetrahedron triangulation found")


def test_trace_checker():
    ok = [CrushStep(1, 9, 5, 1, True, [[2]]), CrushStep(1, 5, 3, 2, True, [[2]])]
    pipeline._check_trace(ok)
    with pytest.raises(AssertionError):
        pipeline._check_trace([CrushStep(1, 5, 5, 1, True, [[2]])])
    with pytest.raises(AssertionError):
        pipeline._check_trace([CrushStep(1, 9, 5, 1, True, [[2]]), CrushStep(1, 7, 3, 1, True, [[2]])])


# -- knot complement checks ---------------------------------------------------------

def test_knot_complement_checks():
    check_knot_complement(fig8()[0])
    with pytest.raises(PreconditionError, match="one cusp"):
        check_knot_complement(free_tet())
    with pytest.raises(InvalidTriangulation):
        check_knot_complement(parse_triangulation(BAD_LINK))


# -- largeness ----------------------------------------------------------------------

def test_figure_eight_is_small():
    v = decide_largeness(fig8()[0], knot="4_1")
    assert v.verdict == pipeline.SMALL and v.rays == 0 and v.witness is None
    assert set(v.timings) == {"enumerate", "test", "total"}
    out = v.to_json()
    assert out["knot"] == "4_1" and out["candidates"] == []


def test_trefoil_is_small():
    v = decide_largeness(load_fixture("3_1"), knot="3_1")
    assert v.verdict == pipeline.SMALL and v.rays == 1
    (c,) = v.candidates
    assert c.result.verdict == COMPRESSIBLE and not c.doubled
    assert c.to_json()["test"]["verdict"] == COMPRESSIBLE


def _fake_result(verdict):
    return IncompressibilityResult(verdict, {})


def _patched(monkeypatch, genera, verdicts):
    """Replace the surface list and the per-surface test with canned answers."""
    cands = []
    for k, g in enumerate(genera):
        cls = SurfaceClass(True, True, True, 2 - 2 * g, g, False, 1, 1, 0)
        c = pipeline.Candidate(k, [k], False, cls)
        c._surface = None
        cands.append(c)
    monkeypatch.setattr(pipeline, "candidate_surfaces", lambda tri, rays: cands)
    answers = iter(verdicts)
    monkeypatch.setattr(pipeline, "test_incompressible", lambda tri, s, seed=0: _fake_result(next(answers)))
    return cands


@pytest.mark.parametrize("genera, verdicts, expected, tested", [
    ([2, 3], [COMPRESSIBLE, COMPRESSIBLE], pipeline.SMALL, 2),
    ([2, 3], [INCOMPRESSIBLE, COMPRESSIBLE], pipeline.LARGE, 1),
    ([1, 2], [INCOMPRESSIBLE, COMPRESSIBLE], pipeline.INCONCLUSIVE_TORUS, 2),
    ([1, 2], [INCOMPRESSIBLE, INCOMPRESSIBLE], pipeline.LARGE, 2),
    ([0, 2], [COMPRESSIBLE], pipeline.SMALL, 1),
])
def test_verdict_logic(monkeypatch, genera, verdicts, expected, tested):
    cands = _patched(monkeypatch, genera, verdicts)
    v = decide_largeness(fig8()[0])
    assert v.verdict == expected
    assert sum(c.result is not None for c in cands) == tested
    if 0 in genera:
        assert cands[genera.index(0)].skipped == "sphere"
    if expected == pipeline.LARGE:
        assert v.witness.surface.genus >= 2


def test_parallel_worker_matches_serial(trefoil_surface):
    tri, surf = trefoil_surface
    c = pipeline.Candidate(0, [], False, surf.classify())
    c._surface = surf
    par = pipeline._run_parallel(tri, [c], 0, 2)[0]
    ser = pipeline.test_incompressible(tri, surf, 0)
    assert par.verdict == ser.verdict and par.pieces == ser.pieces
    assert [s.to_json() for s in par.trace] == [s.to_json() for s in ser.trace]
