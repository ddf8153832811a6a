"""Exact rational linear programming by a dense two-phase simplex.

Everything runs on fractions.Fraction; Bland's rule guarantees termination.
Instances here are tiny (tens of variables), so a plain tableau is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InfeasibleError, UnboundedError

__all__ = ["solve_lp", "minimize_l1_combination"]


def _pivot(T, b, basis, row, col):
    piv = T[row][col]
    if piv != 1:
        inv = 1 / piv
        T[row] = [x * inv for x in T[row]]
        b[row] *= inv
    prow = T[row]
    for i in range(len(T)):
        if i != row:
            f = T[i][col]
            if f:
                T[i] = [x - f * y for x, y in zip(T[i], prow)]
                b[i] -= f * b[row]
    basis[row] = col


def _reduced_costs(T, b, basis, cost):
    """Cost row and objective value for the current basis."""
    m = len(T)
    width = len(cost)
    r = list(cost)
    z = Fraction(0)
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            z += cb * b[i]
            row = T[i]
            for j in range(width):
                if row[j]:
                    r[j] -= cb * row[j]
    return r, z


def _run_phase(T, b, basis, cost, allowed):
    m = len(T)
    r, z = _reduced_costs(T, b, basis, cost)
    while True:
        col = -1
        for j in allowed:
            if r[j] < 0:
                col = j
                break
        if col < 0:
            return z
        row = -1
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = b[i] / T[i][col]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[row]
                ):
                    best = ratio
                    row = i
        if row < 0:
            raise UnboundedError("objective unbounded below")
        _pivot(T, b, basis, row, col)
        # the pivot normalized its row, so the cost row updates in place
        f = r[col]
        if f:
            prow = T[row]
            r = [x - f * y for x, y in zip(r, prow)]
            z += f * b[row]


def solve_lp(c: Sequence, a_ub: Sequence = (), b_ub: Sequence = (),
             a_eq: Sequence = (), b_eq: Sequence = (),
             nonneg: bool = False) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Minimize c.z subject to a_ub.z <= b_ub and a_eq.z == b_eq.

    Variables are free unless nonneg is set.  Returns (value, z) at an
    optimal basic solution; raises InfeasibleError or UnboundedError.
    """
    n = len(c)
    c = [Fraction(x) for x in c]
    rows = [[Fraction(x) for x in row] for row in a_ub]
    rows += [[Fraction(x) for x in row] for row in a_eq]
    rhs = [Fraction(x) for x in b_ub] + [Fraction(x) for x in b_eq]
    n_ub = len(a_ub)
    m = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("constraint width does not match the variable count")

    nvar = n if nonneg else 2 * n
    # a nonnegative-rhs inequality row starts basic on its slack; only the
    # remaining rows need artificial columns
    needs_art = [i >= n_ub or rhs[i] < 0 for i in range(m)]
    n_art = sum(needs_art)
    width = nvar + n_ub + n_art
    T = []
    b = []
    basis = []
    art_start = nvar + n_ub
    art_used = 0
    for i in range(m):
        arr = [Fraction(0)] * width
        for j in range(n):
            arr[j] = rows[i][j]
            if not nonneg:
                arr[n + j] = -rows[i][j]
        if i < n_ub:
            arr[nvar + i] = Fraction(1)
        bi = rhs[i]
        if bi < 0:
            arr = [-x for x in arr]
            bi = -bi
        if needs_art[i]:
            arr[art_start + art_used] = Fraction(1)
            basis.append(art_start + art_used)
            art_used += 1
        else:
            basis.append(nvar + i)
        T.append(arr)
        b.append(bi)

    phase1_cost = [Fraction(0)] * width
    for j in range(art_start, width):
        phase1_cost[j] = Fraction(1)
    allowed = list(range(art_start))
    if n_art:
        z1 = _run_phase(T, b, basis, phase1_cost, allowed)
        if z1 != 0:
            raise InfeasibleError("no feasible point")
    # drive artificials out of the basis; drop rows that are fully redundant
    keep = []
    for i in range(m):
        if basis[i] >= art_start:
            col = next((j for j in range(art_start) if T[i][j] != 0), None)
            if col is None:
                continue  # redundant constraint row
            _pivot(T, b, basis, i, col)
        keep.append(i)
    if len(keep) != m:
        T = [T[i] for i in keep]
        b = [b[i] for i in keep]
        basis = [basis[i] for i in keep]

    phase2_cost = [Fraction(0)] * width
    for j in range(n):
        phase2_cost[j] = c[j]
        if not nonneg:
            phase2_cost[n + j] = -c[j]
    z2 = _run_phase(T, b, basis, phase2_cost, allowed)

    values = [Fraction(0)] * width
    for i, bi in enumerate(basis):
        values[bi] = b[i]
    if nonneg:
        x = tuple(values[j] for j in range(n))
    else:
        x = tuple(values[j] - values[n + j] for j in range(n))
    return z2, x


def minimize_l1_combination(vectors: Sequence[Sequence], target: Sequence):
    """min sum |lambda_i| over representations target = sum lambda_i v_i.

    Returns (value, lambdas).  Infeasible when the target is outside the span.
    """
    vecs = [tuple(Fraction(x) for x in v) for v in vectors]
    dim = len(target)
    k = len(vecs)
    # split coefficients into positive and negative parts, both >= 0
    cost = [Fraction(1)] * (2 * k)
    a_eq = []
    for d in range(dim):
        a_eq.append([vecs[i][d] for i in range(k)] + [-vecs[i][d] for i in range(k)])
    b_eq = [Fraction(x) for x in target]
    value, x = solve_lp(cost, a_eq=a_eq, b_eq=b_eq, nonneg=True)
    lambdas = tuple(x[i] - x[k + i] for i in range(k))
    return value, lambdas
