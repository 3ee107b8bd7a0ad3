"""Small dense linear programs: two-phase simplex and vertex enumeration.

``solve_lp`` works on ``x >= 0`` with inequality and equality rows. In exact
mode the tableau holds ``Fraction`` objects and no tolerance is used; in float
mode pivots below ``tol`` are treated as zero. Bland's rule prevents cycling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

FLOAT_TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    value: object = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _as_array(rows, exact: bool, ncols: int):
    if rows is None or len(rows) == 0:
        return np.zeros((0, ncols), dtype=object if exact else float)
    if exact:
        return np.array([[Fraction(v) for v in r] for r in rows], dtype=object)
    return np.array(rows, dtype=float)


def _as_vector(v, exact: bool):
    if v is None or len(v) == 0:
        return np.zeros(0, dtype=object if exact else float)
    if exact:
        return np.array([Fraction(x) for x in v], dtype=object)
    return np.array(v, dtype=float)


class _Tableau:
    def __init__(self, T, basis, tol):
        self.T = T  # last row is the reduced-cost row, last column the rhs
        self.basis = basis
        self.tol = tol

    @property
    def m(self):
        return self.T.shape[0] - 1

    def pivot(self, r, j):
        T = self.T
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def run(self, allowed: int) -> str:
        """Minimize over columns ``< allowed``; returns "optimal" or "unbounded"."""
        T, tol = self.T, self.tol
        while True:
            cost = T[-1, :allowed]
            entering = None
            for j in range(allowed):
                if cost[j] < -tol:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            col = T[:-1, entering]
            best, leave = None, None
            for i in range(self.m):
                if col[i] > tol:
                    ratio = T[i, -1] / col[i]
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            self.pivot(leave, entering)


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, *, maximize=False,
             exact=False, tol=FLOAT_TOL) -> LPResult:
    """Optimize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    tol = 0 if exact else tol
    Aub, Aeq = _as_array(A_ub, exact, n), _as_array(A_eq, exact, n)
    bub, beq = _as_vector(b_ub, exact), _as_vector(b_eq, exact)
    cc = _as_vector(c, exact)
    if maximize:
        cc = -cc
    mu, me = Aub.shape[0], Aeq.shape[0]
    m = mu + me
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    nvar = n + mu  # structural + slack
    width = nvar + m + 1
    T = np.full((m + 1, width), zero, dtype=object if exact else float)
    if mu:
        T[:mu, :n] = Aub
        for i in range(mu):
            T[i, n + i] = one
        T[:mu, -1] = bub
    if me:
        T[mu:m, :n] = Aeq
        T[mu:m, -1] = beq
    for i in range(m):
        if T[i, -1] < 0:
            T[i, :nvar] = -T[i, :nvar]
            T[i, -1] = -T[i, -1]
        T[i, nvar + i] = one
    basis = [nvar + i for i in range(m)]
    # phase 1: drive the artificial variables to zero
    T[-1, :] = zero
    for i in range(m):
        T[-1, :nvar] = T[-1, :nvar] - T[i, :nvar]
        T[-1, -1] = T[-1, -1] - T[i, -1]
    tab = _Tableau(T, basis, tol)
    tab.run(nvar)
    if -tab.T[-1, -1] > (tol * max(1, m) if not exact else 0):
        return LPResult("infeasible")
    # pivot remaining artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= nvar:
            row = tab.T[i, :nvar]
            js = [j for j in range(nvar) if abs(row[j]) > tol]
            if js:
                tab.pivot(i, js[0])
                keep.append(i)
        else:
            keep.append(i)
    T = tab.T[keep + [m]][:, list(range(nvar)) + [width - 1]]
    basis = [tab.basis[i] for i in keep]
    # phase 2
    cfull = np.concatenate([cc, np.full(mu, zero, dtype=cc.dtype)])
    T[-1, :nvar] = cfull
    T[-1, -1] = zero
    for i, j in enumerate(basis):
        if T[-1, j] != 0:
            T[-1] = T[-1] - T[-1, j] * T[i]
    tab = _Tableau(T, basis, tol)
    if tab.run(nvar) == "unbounded":
        return LPResult("unbounded")
    x = [zero] * nvar
    for i, j in enumerate(tab.basis):
        x[j] = tab.T[i, -1]
    x = x[:n]
    value = sum((ci * xi for ci, xi in zip(_as_vector(c, exact), x)), zero)
    if not exact:
        x = [float(v) for v in x]
        value = float(value)
    return LPResult("optimal", x, value)


def is_feasible(A_ub=None, b_ub=None, A_eq=None, b_eq=None, *, n, exact=False,
                tol=FLOAT_TOL) -> bool:
    res = solve_lp([0] * n, A_ub, b_ub, A_eq, b_eq, exact=exact, tol=tol)
    return res.ok


def _integer_row(row, rhs):
    """Scale a rational row and its bound to integers (positive factor)."""
    den = math.lcm(*(Fraction(v).denominator for v in (*row, rhs)))
    return [int(Fraction(v) * den) for v in row], int(Fraction(rhs) * den)


def _solve_square(A, b):
    """Fraction-free Gaussian elimination on integer rows.

    Returns ``(numerators, denominator)`` with ``x = numerators / denominator``,
    or ``None`` for singular systems.
    """
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            return None
        M[k], M[piv] = M[piv], M[k]
        for r in range(k + 1, n):
            M[r] = [(M[k][k] * M[r][j] - M[r][k] * M[k][j]) // prev for j in range(n + 1)]
        prev = M[k][k]
    # back substitution over a common denominator det = M[n-1][n-1]
    det = M[n - 1][n - 1]
    x = [0] * n
    for k in range(n - 1, -1, -1):
        acc = M[k][n] * det - sum(M[k][j] * x[j] for j in range(k + 1, n))
        x[k] = acc // M[k][k] if acc % M[k][k] == 0 else Fraction(acc, M[k][k])
    if det < 0:
        x, det = [-v for v in x], -det
    return x, det


def enumerate_vertices(A_ub, b_ub, A_eq=None, b_eq=None, *, n) -> list:
    """All vertices of ``{x >= 0, A_ub x <= b_ub, A_eq x = b_eq}`` in exact arithmetic.

    Brute force over active sets; only meant for a handful of variables.
    Equality rows are assumed linearly independent.
    """
    ub = [_integer_row(r, v) for r, v in zip(A_ub or [], b_ub or [])]
    ub += [([-1 if j == k else 0 for j in range(n)], 0) for k in range(n)]
    eq = [_integer_row(r, v) for r, v in zip(A_eq or [], b_eq or [])]
    need = n - len(eq)
    found = set()
    out = []
    for active in itertools.combinations(range(len(ub)), need):
        rows = eq + [ub[i] for i in active]
        sol = _solve_square([r for r, _ in rows], [v for _, v in rows])
        if sol is None:
            continue
        num, den = sol
        if any(isinstance(v, Fraction) for v in num):
            # back substitution left a remainder: rescale to a common integer denominator
            x = [Fraction(v) / den for v in num]
            den = math.lcm(*(v.denominator for v in x))
            num = [int(v * den) for v in x]
        if any(sum(a * v for a, v in zip(r, num)) > rhs * den for r, rhs in ub):
            continue
        x = tuple(Fraction(v, den) for v in num)
        if x not in found:
            found.add(x)
            out.append(list(x))
    return out
