"""Exact phase-1 simplex for integer equality systems with sign constraints.

Decides whether ``{x >= 0 : A x = b}`` is non-empty for integer ``A`` and
``b``, and produces a rational witness when it is.  The tableau is kept
integral with fraction-free (Bareiss-style) pivoting: every stored entry is
the true rational value times a shared positive denominator, which is always
the previous pivot element.  Bland's smallest-index rule is used for both the
entering and the leaving choice, so the method terminates and is fully
deterministic.
"""

from __future__ import annotations

from fractions import Fraction


def solve_nonnegative(
    rows: list[list[int]], rhs: list[int]
) -> list[Fraction] | None:
    """Return some x >= 0 with ``rows @ x == rhs``, or None if there is none."""
    n = len(rows[0]) if rows else 0
    work: list[list[int]] = []
    for row, b in zip(rows, rhs):
        if b < 0:
            row = [-a for a in row]
            b = -b
        if any(row):
            work.append(row + [b])
        elif b != 0:
            return None  # 0 = nonzero: contradictory row
    m = len(work)
    if m == 0:
        return [Fraction(0)] * n

    # Columns: 0..n-1 structural, n..n+m-1 artificial, last = rhs.
    tab = [
        row[:-1] + [1 if i == j else 0 for j in range(m)] + [row[-1]]
        for i, row in enumerate(work)
    ]
    width = n + m + 1
    # Reduced costs for minimizing the artificial sum, with the artificial
    # basis priced out: -sum of each structural column, 0 on artificials.
    cost = [0] * width
    for j in range(n):
        cost[j] = -sum(tab[i][j] for i in range(m))
    cost[width - 1] = -sum(tab[i][width - 1] for i in range(m))

    basis = [n + i for i in range(m)]
    dead = [False] * width  # artificial columns retired after leaving the basis
    denom = 1

    while True:
        enter = -1
        for j in range(width - 1):
            if not dead[j] and cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break

        # Ratio test by cross-multiplication (all rows share denom > 0),
        # ties broken by the smallest basis label.
        leave = -1
        best_num = best_den = 0
        for i in range(m):
            a = tab[i][enter]
            if a <= 0:
                continue
            num = tab[i][width - 1]
            if leave < 0 or num * best_den < best_num * a or (
                num * best_den == best_num * a and basis[i] < basis[leave]
            ):
                leave, best_num, best_den = i, num, a
        if leave < 0:
            raise AssertionError("phase-1 objective cannot be unbounded")

        pivot = tab[leave][enter]
        prow = tab[leave]
        for i in range(m):
            if i == leave:
                continue
            row = tab[i]
            f = row[enter]
            if f:
                for k in range(width):
                    row[k] = (row[k] * pivot - f * prow[k]) // denom
            else:
                for k in range(width):
                    row[k] = (row[k] * pivot) // denom
        f = cost[enter]
        for k in range(width):
            cost[k] = (cost[k] * pivot - f * prow[k]) // denom

        left = basis[leave]
        if left >= n:
            dead[left] = True
        basis[leave] = enter
        denom = pivot

    if cost[width - 1] != 0:
        return None  # leftover artificial mass: the system is infeasible

    x = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            x[col] = Fraction(tab[i][width - 1], denom)
    return x
