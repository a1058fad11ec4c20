"""Seeded greedy simplification."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import EDGES, Triangulation
from .moves import Builder


@dataclass
class SimplifyResult:
    tri: Triangulation
    vertex_condition: bool
    moves: int

    def __iter__(self):
        # allows ``tri, ok = simplify(...)`` unpacking
        yield self.tri
        yield self.vertex_condition


def _edges(b: Builder, rng):
    seen = set()
    out = []
    for t in b.live():
        for a, c in EDGES:
            if (t, a, c) in seen:
                continue
            ring, _ = b.edge_ring(t, a, c)
            for tt, lab in ring:
                seen.add((tt, min(lab[:2]), max(lab[:2])))
            out.append((t, a, c, len(ring)))
    rng.shuffle(out)
    return out


def _reduce_once(b: Builder, rng, want_fewer_vertices: bool) -> bool:
    """Apply one move that removes tetrahedra; False if there is none."""
    edges = _edges(b, rng)
    for t, a, c, deg in edges:
        if deg == 3 and b.alive[t] and b.try_32(t, a, c):
            return True
    for t, a, c, deg in edges:
        if deg == 2 and b.alive[t] and b.try_20_edge(t, a, c):
            return True
    tets = b.live()
    rng.shuffle(tets)
    for t in tets:
        for v in range(4):
            if b.alive[t] and b.try_20_vertex(t, v):
                return True
    for t in tets:
        if b.alive[t] and any(g is None for g in b.adj[t]) and b.try_shell(t):
            return True
    if want_fewer_vertices:
        for t, a, c, deg in sorted(edges, key=lambda e: e[3]):
            if b.alive[t] and b.try_collapse_edge(t, a, c):
                return True
        for t, a, c, deg in edges:
            if b.alive[t] and b.try_close_book(t, a, c):
                return True
    return False


def _vertex_condition(tri: Triangulation) -> bool:
    return tri.skeleton.satisfies_vertex_condition()


def _local_minimum(b: Builder, rng, moves: list) -> None:
    want = True
    while True:
        if _reduce_once(b, rng, want):
            moves[0] += 1
            continue
        if want:
            # the vertex-reducing moves are only tried while they are needed
            want = False
            continue
        break


def simplify(tri: Triangulation, seed: int = 0, attempts: int | None = None) -> SimplifyResult:
    """Greedy descent over local moves, with random 4-4 and 2-3 excursions.

    Never returns more tetrahedra than it was given.  The same seed always
    gives the same output.
    """
    rng = random.Random(seed)
    moves = [0]
    b = Builder(tri)
    _local_minimum(b, rng, moves)
    best = b.freeze()
    if attempts is None:
        attempts = 5 * best.size + 10
    stall = 0
    while stall < attempts and best.size > 1:
        b = Builder(best)
        edges = _edges(b, rng)
        did = False
        if rng.random() < 0.7:
            for t, a, c, deg in edges:
                if deg == 4 and b.try_44(t, a, c, rng.randrange(2)):
                    did = True
                    break
        if not did:
            t = rng.choice(b.live())
            f = rng.randrange(4)
            did = b.try_23(t, f)
        if not did:
            stall += 1
            continue
        _local_minimum(b, rng, moves)
        cand = b.freeze()
        better = cand.size < best.size or (
            cand.size == best.size and not _vertex_condition(best) and _vertex_condition(cand))
        if better:
            best = cand
            stall = 0
        else:
            stall += 1
    if not _vertex_condition(best):
        b = Builder(best)
        _local_minimum(b, rng, moves)
        best = b.freeze()
    best.validate()
    return SimplifyResult(best, _vertex_condition(best), moves[0])
