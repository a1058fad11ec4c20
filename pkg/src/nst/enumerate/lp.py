"""Linear programs over the normalised normal surface polytope.

The search only ever needs one question answered exactly: is the maximum of
a rational objective over ``{x >= 0, A x = 0, sum(x) = 1}`` positive?  A
floating point solve (HiGHS through scipy) supplies a candidate point and
dual values; the duals are rounded to rationals and turned into an exact
upper bound, because for any y

    c.x = (c - A^T y).x <= max_j (c - A^T y)_j        whenever A x = 0, sum(x) = 1.

If the rounded certificate is not good enough the exact simplex below
settles the question.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

_EPS = 1e-9


def exact_simplex(rows: Sequence[Sequence], rhs: Sequence, c: Sequence):
    """Maximise c.x subject to rows.x = rhs, x >= 0, in exact arithmetic.

    Two-phase tableau simplex with Bland's rule.  Returns ``(value, x)`` or
    ``(None, None)`` when infeasible.  The objective must be bounded.
    """
    m = len(rows)
    n = len(c)
    A = [[Fraction(v) for v in r] for r in rows]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n originals, m artificials, then rhs
    T = [A[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(r, col):
        pr = T[r]
        pv = pr[col]
        if pv != 1:
            T[r] = pr = [v / pv for v in pr]
        for i in range(m):
            if i != r:
                f = T[i][col]
                if f:
                    row = T[i]
                    T[i] = [x - f * y for x, y in zip(row, pr)]
        basis[r] = col

    def run(obj, allowed):
        # obj: list over all tableau columns (without rhs); maximise
        while True:
            # reduced costs
            best = None
            for col in allowed:
                if col in basis:
                    continue
                rc = obj[col] - sum(obj[basis[i]] * T[i][col] for i in range(m))
                if rc > 0:
                    best = col
                    break
            if best is None:
                return True
            col = best
            ratio = None
            r = None
            for i in range(m):
                a = T[i][col]
                if a > 0:
                    q = T[i][-1] / a
                    if ratio is None or q < ratio or (q == ratio and basis[i] < basis[r]):
                        ratio, r = q, i
            if r is None:
                return False    # unbounded
            pivot(r, col)

    width = n + m
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, range(width))
    if any(basis[i] >= n and T[i][-1] != 0 for i in range(m)):
        return None, None
    # drive zero artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for col in range(n):
                if T[i][col] != 0 and col not in basis:
                    pivot(i, col)
                    break
    obj = [Fraction(v) for v in c] + [Fraction(0)] * m
    if not run(obj, range(n)):
        raise ValueError("objective is unbounded")
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return sum(ci * xi for ci, xi in zip(obj, x)), x


@dataclass
class NodeLP:
    positive: bool                 # exact: the maximum is > 0
    value: float | None            # float estimate of the maximum
    x: np.ndarray | None           # float optimum over the free columns (full length)
    certified_by: str              # "duals", "exact", "infeasible"


class NormalisedLP:
    """max c.x over {x >= 0, A x = 0, sum(x) = 1} with some columns forced to zero."""

    def __init__(self, rows: Sequence[Sequence], objective: Sequence[Fraction]):
        self.n = len(objective)
        self.rows = [list(map(Fraction, r)) for r in rows if any(r)]
        scale = lcm(*[Fraction(v).denominator for v in objective]) if objective else 1
        self.c = [Fraction(v) * scale for v in objective]    # integral, same sign
        self.A = np.array([[float(v) for v in r] for r in self.rows], dtype=float).reshape(
            len(self.rows), self.n)
        self.cf = np.array([float(v) for v in self.c])
        self.exact_calls = 0

    def _bound(self, y, free) -> Fraction:
        """Exact upper bound max_j (c - A^T y)_j over the free columns."""
        yq = [Fraction(v).limit_denominator(10 ** 6) for v in y]
        best = None
        for j in free:
            val = self.c[j] - sum(yq[i] * self.rows[i][j] for i in range(len(yq)) if self.rows[i][j])
            if best is None or val > best:
                best = val
        return best

    def solve(self, fixed_zero: set) -> NodeLP:
        free = [j for j in range(self.n) if j not in fixed_zero]
        if not free:
            return NodeLP(False, None, None, "infeasible")
        A = self.A[:, free]
        keep = np.any(A != 0, axis=1)
        rows_idx = np.nonzero(keep)[0]
        A = A[keep]
        A_eq = np.vstack([A, np.ones((1, len(free)))])
        b_eq = np.zeros(A_eq.shape[0])
        b_eq[-1] = 1.0
        res = linprog(-self.cf[free], A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        x = None
        if res.status == 0:
            value = -res.fun
            x = np.zeros(self.n)
            x[free] = res.x
            y = np.zeros(len(self.rows))
            y[rows_idx] = -res.eqlin.marginals[:-1]
            ub = self._bound(y, free)
            if ub <= 0:
                return NodeLP(False, value, x, "duals")
            if value > 1e-7:
                return NodeLP(True, value, x, "float")
        elif res.status == 2:
            y = self._farkas(free)
            if y is not None and self._bound(y, free) <= 0:
                return NodeLP(False, None, None, "infeasible")
            value = None
        else:
            value = None
        # the float answer is too close to call: decide exactly
        self.exact_calls += 1
        rows = [[r[j] for j in free] for r in self.rows if any(r[j] for j in free)]
        rows.append([1] * len(free))
        rhs = [0] * (len(rows) - 1) + [1]
        val, xe = exact_simplex(rows, rhs, [self.c[j] for j in free])
        if val is None:
            return NodeLP(False, None, None, "exact")
        xf = np.zeros(self.n)
        xf[free] = [float(v) for v in xe]
        return NodeLP(val > 0, float(val), xf, "exact")

    def _farkas(self, free):
        """Dual point certifying a nonpositive bound for an infeasible node."""
        m = len(self.rows)
        if m == 0:
            return None
        # minimise u subject to u + (A^T y)_j >= c_j on free columns, u >= -1
        A = self.A[:, free]
        nf = len(free)
        A_ub = np.hstack([-np.ones((nf, 1)), -A.T])
        b_ub = -self.cf[free]
        cost = np.zeros(m + 1)
        cost[0] = 1.0
        bounds = [(-1, None)] + [(None, None)] * m
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            return None
        return res.x[1:]
