"""Small exact linear-algebra helpers over the integers and rationals.

Everything works on lists of Python ints / Fractions.  Sizes in this package
are modest (at most a few hundred columns), so plain Gaussian elimination is
adequate and keeps every decision exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def primitive(vec: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q with pivots chosen left to right.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    mat = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for k in range(r, len(mat)):
            if mat[k][c] != 0:
                piv = k
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c] != 0:
                fac = mat[k][c]
                rowr = mat[r]
                mat[k] = [a - fac * b for a, b in zip(mat[k], rowr)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def reduce_modulo(vec: Sequence, rows: Sequence[Sequence]) -> list[Fraction]:
    """Canonical representative of ``vec`` modulo the row space of ``rows``.

    The representative vanishes on the pivot columns of the reduced row
    echelon form, so two vectors agree modulo the row space iff their
    representatives are equal.
    """
    n = len(vec)
    red, pivots = rref(rows, n)
    out = [Fraction(x) for x in vec]
    for r, pc in enumerate(pivots):
        if out[pc] != 0:
            fac = out[pc]
            out = [a - fac * b for a, b in zip(out, red[r])]
    return out


def smith_diagonal(mat: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form diagonal)."""
    a = [list(map(int, r)) for r in mat if any(r)]
    diag = []
    while a and a[0]:
        # pick the entry of smallest absolute value as pivot
        best = None
        for i, r in enumerate(a):
            for j, x in enumerate(r):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[0], a[pi] = a[pi], a[0]
        for r in a:
            r[0], r[pj] = r[pj], r[0]
        while True:
            p = a[0][0]
            done = True
            for i in range(1, len(a)):
                if a[i][0]:
                    q = a[i][0] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[0])]
                    if a[i][0]:
                        done = False
            for j in range(1, len(a[0])):
                if a[0][j]:
                    q = a[0][j] // p
                    if q:
                        for r in a:
                            r[j] -= q * r[0]
                    if a[0][j]:
                        done = False
            if done:
                # ensure p divides everything left, else fold a row in
                bad = None
                for i in range(1, len(a)):
                    for x in a[i][1:]:
                        if x % p:
                            bad = i
                            break
                    if bad:
                        break
                if bad is None:
                    break
                a[0] = [x + y for x, y in zip(a[0], a[bad])]
                continue
            # move the smallest nonzero entry of row 0 / column 0 to the pivot spot
            best = (abs(p), 0, 0)
            for i in range(len(a)):
                if a[i][0] and abs(a[i][0]) < best[0]:
                    best = (abs(a[i][0]), i, 0)
            for j in range(len(a[0])):
                if a[0][j] and abs(a[0][j]) < best[0]:
                    best = (abs(a[0][j]), 0, j)
            _, bi, bj = best
            if bi:
                a[0], a[bi] = a[bi], a[0]
            if bj:
                for r in a:
                    r[0], r[bj] = r[bj], r[0]
        diag.append(abs(a[0][0]))
        a = [r[1:] for r in a[1:] if any(r[1:])]
        if a and not a[0]:
            break
    return diag


def quotient_basis(relations: Sequence[Sequence[int]], ncols: int):
    """Smith reduction of Z^ncols / (row lattice of ``relations``).

    Returns ``(invariant_factors, free_basis)`` where ``free_basis`` lists
    integer vectors whose images form a basis of the free part of the
    quotient.  Only column operations are recorded; row operations do not
    change the lattice.
    """
    a = [list(map(int, r)) for r in relations if any(r)]
    vinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def col_sub(dst, src_, q):      # column dst -= q * column src
        if not q:
            return
        for r in a:
            r[dst] -= q * r[src_]
        rs, rd = vinv[src_], vinv[dst]
        vinv[src_] = [x + q * y for x, y in zip(rs, rd)]

    def col_swap(x, y):
        for r in a:
            r[x], r[y] = r[y], r[x]
        vinv[x], vinv[y] = vinv[y], vinv[x]

    t = 0
    factors = []
    while t < ncols:
        entries = [(abs(r[j]), i, j) for i, r in enumerate(a) if i >= t
                   for j in range(t, ncols) if r[j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        col_swap(t, pj)
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, len(a)):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        changed = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
                    if a[t][j]:
                        changed = True
            if changed:
                cand = [(abs(a[i][t]), i, t) for i in range(t, len(a)) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, ncols) if a[t][j]]
                _, bi, bj = min(cand)
                a[t], a[bi] = a[bi], a[t]
                col_swap(t, bj)
                continue
            bad = next((i for i in range(t + 1, len(a))
                        if any(x % p for x in a[i][t + 1:])), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        factors.append(abs(a[t][t]))
        t += 1
    free = [vinv[j] for j in range(t, ncols)]
    return [f for f in factors if f != 1], free
