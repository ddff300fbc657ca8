"""Exact rational linear feasibility via phase-1 simplex.

Solves: find x >= 0 with A x = b, all entries Fractions.  Either a basic
feasible solution or a Farkas certificate y (y^T A <= 0 componentwise
while y^T b > 0, proving no solution exists) is returned — never neither,
and both are verified against the input before being handed back.

Dense tableau, artificial variable on every row, Bland's rule (always the
lowest eligible index) so cycling cannot occur.  Intended for the small
systems that arise from polytope-membership questions (tens of rows and
columns); no sparsity, no scaling, no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class Feasible:
    solution: list[Fraction]

    def __bool__(self) -> bool:
        return True


@dataclass
class FarkasInfeasible:
    """y with y^T A <= 0 and y^T b > 0 for the original (unflipped) system."""

    certificate: list[Fraction]

    def __bool__(self) -> bool:
        return False


def solve_feasibility(
    a_rows: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
) -> Feasible | FarkasInfeasible:
    m = len(a_rows)
    if m == 0:
        return Feasible([])
    n = len(a_rows[0])
    rows = [[Fraction(v) for v in row] for row in a_rows]
    rhs = [Fraction(v) for v in b]
    if any(len(r) != n for r in rows):
        raise ValueError("ragged constraint matrix")
    if len(rhs) != m:
        raise ValueError(f"{len(rhs)} rhs entries for {m} rows")

    flipped = [False] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            flipped[i] = True

    # Tableau columns: n structural, m artificial.  Basis starts artificial.
    width = n + m
    tab = [rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)]
           + [rhs[i]] for i in range(m)]
    basis = list(range(n, n + m))

    # Phase-1 cost row: minimize sum of artificials.  cost[j] holds the
    # reduced cost of column j; obj holds the current objective value.
    cost = [Fraction(0)] * width
    obj = Fraction(0)
    for j in range(width):
        cost[j] = (Fraction(1) if j >= n else Fraction(0)) - sum(tab[i][j] for i in range(m))
    obj = sum(rhs)

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        # Ratio test; ties broken by smallest basis variable (Bland).
        leave, best = None, None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # Unbounded phase-1 objective is impossible (bounded below by 0);
            # a negative-cost column with no positive entry cannot occur.
            raise RuntimeError("phase-1 simplex lost boundedness — numeric bug")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [vi - f * vl for vi, vl in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            for j in range(width):
                cost[j] -= f * tab[leave][j]
            obj += f * tab[leave][width]
        basis[leave] = enter

    if obj == 0:
        x = [Fraction(0)] * n
        for i, bv in enumerate(basis):
            if bv < n:
                x[bv] = tab[i][width]
        for i in range(m):
            got = sum(ai * xi for ai, xi in zip(a_rows[i], x))
            if got != b[i]:
                raise RuntimeError(f"solution fails row {i}: {got} != {b[i]}")
        if any(v < 0 for v in x):
            raise RuntimeError("negative component in basic solution")
        return Feasible(x)

    # Infeasible: read the dual prices off the artificial columns.  The
    # artificial for row i entered with cost 1, so y_i = 1 - cost[n + i].
    y = [Fraction(1) - cost[n + i] for i in range(m)]
    y = [-yi if flipped[i] else yi for i, yi in enumerate(y)]
    for j in range(n):
        dot = sum(y[i] * a_rows[i][j] for i in range(m))
        if dot > 0:
            raise RuntimeError(f"certificate fails on column {j}: {dot} > 0")
    gap = sum(y[i] * b[i] for i in range(m))
    if gap <= 0:
        raise RuntimeError(f"certificate has nonpositive gap {gap}")
    return FarkasInfeasible(y)
