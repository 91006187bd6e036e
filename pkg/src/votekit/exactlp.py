"""Exact feasibility for small rational linear systems.

Phase-one simplex over an all-integer tableau.  Pivots use the
fraction-free update new = (new * pivot - row * col) / old_pivot, whose
division is exact, so entries remain integers of modest size and floats
never appear.  Bland's smallest-index rule (and never re-entering an
artificial column) guarantees termination.  Systems here are tiny: a few
dozen rows over at most a dozen variables.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["solve_nonneg_geq"]


def solve_nonneg_geq(
    num_vars: int, rows: Sequence[tuple[Sequence[int], int]]
) -> list[Fraction] | None:
    """Find x >= 0 with A x >= b, or None when infeasible.

    rows is a list of (coefficients, b) with integer entries and b >= 0.
    Returns one feasible point as exact fractions.
    """
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * num_vars

    art_rows = [i for i, (_, b) in enumerate(rows) if b > 0]
    num_art = len(art_rows)
    # Columns: x (num_vars), surplus/slack per row (m), artificials, rhs.
    width = num_vars + m + num_art + 1
    rhs = width - 1
    tab: list[list[int]] = []
    basis: list[int] = []
    art_col = {}
    for k, i in enumerate(art_rows):
        art_col[i] = num_vars + m + k

    for i, (coeffs, b) in enumerate(rows):
        if len(coeffs) != num_vars:
            raise ValueError("coefficient row has the wrong length")
        if b < 0:
            raise ValueError("right-hand sides must be nonnegative")
        row = [0] * width
        if b > 0:
            # A x - s + a = b, artificial basic.
            row[:num_vars] = [int(c) for c in coeffs]
            row[num_vars + i] = -1
            row[art_col[i]] = 1
            row[rhs] = b
            basis.append(art_col[i])
        else:
            # -A x + s = 0, slack basic.
            row[:num_vars] = [-int(c) for c in coeffs]
            row[num_vars + i] = 1
            basis.append(num_vars + i)
        tab.append(row)

    # Objective: minimize the artificial sum.  Its row is the sum of the
    # artificial-carrying rows, pivoted along with the rest.
    obj = [0] * width
    for i in art_rows:
        for j in range(width):
            obj[j] += tab[i][j]
    tab.append(obj)

    delta = 1
    enterable = num_vars + m  # x and slack columns; artificials never re-enter
    while tab[m][rhs] != 0:
        # Entering: smallest improving column (Bland).
        col = -1
        for j in range(enterable):
            if tab[m][j] > 0 and j not in basis:
                col = j
                break
        if col < 0:
            return None  # optimum > 0: infeasible
        # Leaving: minimum ratio, ties by smallest basis index (Bland).
        row = -1
        for i in range(m):
            t = tab[i][col]
            if t <= 0:
                continue
            if row < 0:
                row = i
                continue
            lhs = tab[i][rhs] * tab[row][col]
            rhs_v = tab[row][rhs] * t
            if lhs < rhs_v or (lhs == rhs_v and basis[i] < basis[row]):
                row = i
        if row < 0:
            # Unbounded reduction of a nonnegative objective cannot happen.
            raise RuntimeError("phase-one ratio test failed")
        pivot = tab[row][col]
        prow = tab[row]
        for i in range(m + 1):
            if i == row:
                continue
            ti = tab[i]
            f = ti[col]
            tab[i] = [(ti[j] * pivot - f * prow[j]) // delta for j in range(width)]
        delta = pivot
        basis[row] = col

    x = [Fraction(0)] * num_vars
    for i, b in enumerate(basis):
        if b < num_vars:
            x[b] = Fraction(tab[i][rhs], delta)
    return x
