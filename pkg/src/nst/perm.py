"""Permutations of {0, 1, 2, 3} stored as 4-tuples.

``p[i]`` is the image of ``i``.  All 24 permutations are precomputed so that
composition and inversion are dictionary lookups on the hot paths of the
rewriting code.
"""
from __future__ import annotations

from itertools import permutations

Perm = tuple  # tuple[int, int, int, int]

ALL: list[tuple[int, ...]] = list(permutations(range(4)))
IDENTITY = (0, 1, 2, 3)


def _sign(p) -> int:
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


SIGN = {p: _sign(p) for p in ALL}
INVERSE = {}
for _p in ALL:
    _inv = [0] * 4
    for _i, _v in enumerate(_p):
        _inv[_v] = _i
    INVERSE[_p] = tuple(_inv)
# COMPOSE[p, q] is p after q
COMPOSE = {(p, q): (p[q[0]], p[q[1]], p[q[2]], p[q[3]]) for p in ALL for q in ALL}

EVEN = [p for p in ALL if SIGN[p] == 1]
ODD = [p for p in ALL if SIGN[p] == -1]


def sign(p) -> int:
    return SIGN[p]


def inverse(p):
    return INVERSE[p]


def compose(p, q):
    """Return ``p o q``."""
    return COMPOSE[p, q]


def transposition(a: int, b: int):
    t = list(IDENTITY)
    t[a], t[b] = b, a
    return tuple(t)


def parse(word: str):
    if len(word) != 4 or sorted(word) != ["0", "1", "2", "3"]:
        raise ValueError(f"not a permutation of 0123: {word!r}")
    return tuple(int(c) for c in word)


def fmt(p) -> str:
    return "".join(str(i) for i in p)


def complete(partial: dict):
    """Extend a map defined on three points of {0,1,2,3} to a permutation."""
    src = [i for i in range(4) if i not in partial]
    dst = [i for i in range(4) if i not in partial.values()]
    out = dict(partial)
    out[src[0]] = dst[0]
    return tuple(out[i] for i in range(4))
