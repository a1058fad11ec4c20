"""Acceptance gate: one group of checks per criterion, summarised at the end of the run.

The census spot-check runs the full largeness decision on five knots and
takes about a quarter of an hour on one core.
"""
from __future__ import annotations

import random
import time

import pytest

from nst import pipeline
from nst.coords import build_q_matching, euler_functional, evaluate, is_admissible
from nst.enumerate import brute_force_rays, enumerate_admissible_rays, q_cone
from nst.modify import crush
from nst.surface import NormalSurface, boundary_slope, reconstruct_from_q
from nst.triangulation.simplify import simplify
from nst.triangulation.truncate import truncate_ideal_vertices

from conftest import note
from helpers import KNOTS, fig8, load_fixture, random_surface_pair, random_triangulation, std_spec

FIG8_ROW = [1, 1, -2, 1, 1, -2]
FIG8_TABLE = [  # q vector, (nu(mu), nu(lambda)), slope
    ((2, 0, 0, 0, 0, 1), (1, 4), -4),
    ((0, 2, 0, 0, 0, 1), (-1, 4), 4),
    ((0, 0, 1, 2, 0, 0), (-1, -4), -4),
    ((0, 0, 1, 0, 2, 0), (1, -4), 4),
]
EXPECTED = {"3_1": pipeline.SMALL, "4_1": pipeline.SMALL, "5_2": pipeline.SMALL,
            "8_16": pipeline.LARGE, "8_17": pipeline.LARGE}
BUDGET_SECONDS = 30 * 60

C1 = pytest.mark.criterion(1, "figure-eight golden test")
C2 = pytest.mark.criterion(2, "census spot-check verdicts")
C3 = pytest.mark.criterion(3, "enumeration agrees with brute force")
C4 = pytest.mark.criterion(4, "Euler functional equals cell-complex chi")
C5 = pytest.mark.criterion(5, "crushing keeps exactly the quad-free tetrahedra")
C6 = pytest.mark.criterion(6, "crush loops shrink and cuts give two pieces")
C7 = pytest.mark.criterion(7, "figure-eight enumeration time and stage timings")


class _Runs:
    """Largeness runs shared by criteria 1, 2, 6 and 7, computed once per knot."""

    def __init__(self):
        self.done = {}

    def get(self, name):
        if name not in self.done:
            tri = fig8()[0] if name == "figure8" else load_fixture(name)
            start = time.perf_counter()
            verdict = pipeline.decide_largeness(tri, seed=0, knot=name)
            self.done[name] = (verdict, time.perf_counter() - start)
        return self.done[name]


@pytest.fixture(scope="module")
def runs():
    return _Runs()


# -- criterion 1 ---------------------------------------------------------------------

@C1
def test_figure_eight_golden(runs):
    start = time.perf_counter()
    tri, curves = fig8()
    m = build_q_matching(tri)
    assert m.rank == 1
    assert all(list(r) in (FIG8_ROW, [-x for x in FIG8_ROW]) for r in m.rows)

    rays = enumerate_admissible_rays(q_cone(tri))
    assert {r.vector for r in rays} == {q for q, _, _ in FIG8_TABLE}

    # one sign per basis curve, fixed once for this triangulation file
    eps_mu = eps_lambda = -1
    by_vector = {r.vector: r for r in rays}
    for q, (nu_mu, nu_lam), slope in FIG8_TABLE:
        rep = reconstruct_from_q(tri, by_vector[q].vector, curves)
        nu = rep.nu[0]
        assert (eps_mu * nu["meridian"], eps_lambda * nu["longitude"]) == (nu_mu, nu_lam)
        assert boundary_slope(rep, curves["meridian"], curves["longitude"]) == slope

    assert enumerate_admissible_rays(q_cone(tri, closed=True)) == []
    verdict, _ = runs.get("figure8")
    assert verdict.verdict == pipeline.SMALL
    elapsed = time.perf_counter() - start
    note(1, f"figure-eight checks took {elapsed * 1000:.0f} ms")
    assert elapsed < 5


# -- criterion 2 ---------------------------------------------------------------------

@C2
@pytest.mark.parametrize("name", KNOTS)
def test_census_verdict(runs, name):
    verdict, seconds = runs.get(name)
    witness = f", witness ray {verdict.witness.ray} genus {verdict.witness.surface.genus}" if verdict.witness else ""
    note(2, f"{name}: {verdict.verdict} with {verdict.rays} closed rays in {seconds:.1f} s{witness}")
    assert verdict.verdict == EXPECTED[name]
    assert seconds <= BUDGET_SECONDS


# -- criterion 3 ---------------------------------------------------------------------

def _random_triangulations(count):
    out = []
    seed = 0
    while len(out) < count:
        rng = random.Random(seed)
        seed += 1
        tri = random_triangulation(rng, rng.randint(1, 3), free_prob=rng.choice([0.0, 0.15, 0.3]))
        if tri is not None:
            out.append(tri)
    return out


@C3
def test_enumeration_oracle_equivalence():
    start = time.perf_counter()
    tris = _random_triangulations(100)
    total = 0
    for tri in tris:
        spec = q_cone(tri)
        fast = {r.vector for r in enumerate_admissible_rays(spec)}
        slow = {r.vector for r in brute_force_rays(spec)}
        assert fast == slow
        total += len(fast)
    elapsed = time.perf_counter() - start
    note(3, f"100 triangulations, {total} rays, {elapsed:.1f} s")
    assert elapsed < 120


# -- criterion 4 ---------------------------------------------------------------------

def _random_solutions(tri, rays, rng, count):
    """Random admissible sums of compatible vertex solutions with small multiplicities."""
    out = []
    vecs = [list(r.vector) for r in rays]
    while len(out) < count:
        x = [0] * len(vecs[0])
        for _ in range(rng.randint(1, 4)):
            v = rng.choice(vecs)
            k = rng.randint(1, 3)
            y = [a + k * b for a, b in zip(x, v)]
            if is_admissible(y, std=True):
                x = y
        if any(x):
            out.append(x)
    return out


@C4
def test_euler_functional_property():
    rng = random.Random(4)
    samples = []
    fixture = simplify(truncate_ideal_vertices(load_fixture("3_1")), seed=0).tri
    samples += [(fixture, x) for x in _random_solutions(fixture, enumerate_admissible_rays(std_spec(fixture)), rng, 50)]
    seed = 0
    while len(samples) < 100:
        pair = random_surface_pair(seed)
        seed += 1
        if pair is None:
            continue
        tri = pair[0]
        rays = enumerate_admissible_rays(std_spec(tri))
        samples += [(tri, x) for x in _random_solutions(tri, rays, rng, 2)]
    samples = samples[:100]
    multi = 0
    for tri, x in samples:
        cls = NormalSurface(tri, x).classify()
        assert evaluate(euler_functional(tri), x) == cls.chi
        multi += cls.components > 1
    note(4, f"100 solutions ({multi} disconnected), 50 on the simplified truncated 3_1 complement")


# -- criterion 5 ---------------------------------------------------------------------

@C5
def test_crush_postcondition():
    pairs = []
    seed = 0
    while len(pairs) < 50:
        pair = random_surface_pair(10_000 + seed)
        seed += 1
        if pair is not None:
            pairs.append(pair)
    removed = 0
    for tri, s in pairs:
        assert s.classify().two_sided
        out, _ = crush(tri, s)
        quad_free = sum(1 for i in range(tri.size) if not any(s.std[7 * i + 4:7 * i + 7]))
        assert out.size == quad_free
        removed += tri.size - out.size
    note(5, f"50 pairs, {removed} tetrahedra removed in total")


# -- criterion 6 ---------------------------------------------------------------------

@C6
def test_crush_traces_and_two_pieces(runs):
    tested = steps = 0
    for name in ["figure8"] + KNOTS:
        verdict, _ = runs.get(name)
        for cand in verdict.candidates:
            if cand.result is None:
                continue
            tested += 1
            assert len(cand.result.pieces) == 2
            pipeline._check_trace(cand.result.trace)
            for step in cand.result.trace:
                assert step.tets_after < step.tets_before
                steps += 1
    note(6, f"{tested} surfaces tested, {steps} crush steps, every cut gave two pieces")
    assert tested > 0


# -- criterion 7 ---------------------------------------------------------------------

@C7
def test_enumeration_speed_and_stage_timings(runs):
    tri, _ = fig8()
    start = time.perf_counter()
    enumerate_admissible_rays(q_cone(tri))
    enumerate_admissible_rays(q_cone(tri, closed=True))
    elapsed = time.perf_counter() - start
    note(7, f"figure-eight enumeration {elapsed * 1000:.1f} ms")
    assert elapsed < 1
    for name in KNOTS:
        verdict, _ = runs.get(name)
        t = verdict.timings
        assert set(t) == {"enumerate", "test", "total"}
        note(7, f"{name}: enumerate {t['enumerate']:.3f} s, test {t['test']:.1f} s, total {t['total']:.1f} s")
