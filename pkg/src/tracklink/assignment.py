"""Exact maximum-similarity one-to-one assignment.

The solver works on integer weights derived losslessly from float
similarities (every float is a dyadic rational), so optimal totals are exact
and deterministic: no float accumulation, no tolerance. Entries that are
infeasible (gated) or have zero similarity are structurally excluded, and
ties between equal-total optima are broken toward the lexicographically
smallest row-major pair list, which keeps the output stable across runs.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

_INF = 1 << 240


def _min_cost_square(cost: list[list[int]]) -> list[int]:
    """O(n^3) Hungarian method on a square integer cost matrix.

    Returns match_col[j] = assigned row for each column j. Potentials stay
    integral for integral costs, so the optimum is exact.
    """
    n = len(cost)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row (1-based) matched to column j; p[0] is scratch
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = _INF
            j1 = 0
            row = cost[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return [p[j] - 1 for j in range(1, n + 1)]


def max_total(weights: list[list[int]], rows: list[int], cols: list[int]) -> int:
    """Maximum total weight of a one-to-one partial assignment.

    Only entries with weight > 0 are assignable; ``rows``/``cols`` select the
    submatrix. Solved as a perfect matching on a zero-padded square matrix,
    where zero-weight padding realizes "leave unmatched".
    """
    if not rows or not cols:
        return 0
    n = max(len(rows), len(cols))
    w = [[0] * n for _ in range(n)]
    top = 0
    for a, r in enumerate(rows):
        wr = weights[r]
        for b, c in enumerate(cols):
            x = wr[c]
            if x > 0:
                w[a][b] = x
                if x > top:
                    top = x
    if top == 0:
        return 0
    cost = [[top - w[a][b] for b in range(n)] for a in range(n)]
    match_col = _min_cost_square(cost)
    return sum(w[match_col[b]][b] for b in range(n))


def lexmin_max_assignment(weights: list[list[int]]) -> list[tuple[int, int]]:
    """All-positive-weight optimal assignment, lexicographically smallest.

    Greedy over cells in row-major order: a cell is kept iff fixing it (and
    everything already kept) still admits a completion reaching the global
    optimum. With all assignable weights > 0 no optimum is a proper subset of
    another, so this greedy provably returns the lex-smallest optimum.
    """
    n_rows = len(weights)
    n_cols = len(weights[0]) if n_rows else 0
    all_rows = list(range(n_rows))
    all_cols = list(range(n_cols))
    target = max_total(weights, all_rows, all_cols)
    if target == 0:
        return []
    chosen: list[tuple[int, int]] = []
    chosen_sum = 0
    free_cols = all_cols[:]
    free_rows = all_rows[:]
    for r in all_rows:
        if chosen_sum == target:
            break
        picked = None
        rest_rows = [x for x in free_rows if x != r]
        for c in free_cols:
            w = weights[r][c]
            if w <= 0:
                continue
            rest_cols = [x for x in free_cols if x != c]
            if chosen_sum + w + max_total(weights, rest_rows, rest_cols) == target:
                picked = c
                break
        if picked is not None:
            chosen.append((r, picked))
            chosen_sum += weights[r][picked]
            free_rows.remove(r)
            free_cols.remove(picked)
    return chosen


def similarities_to_ints(values, feasible) -> list[list[int]]:
    """Losslessly scale float similarities to integers; infeasible entries become 0.

    Floats are dyadic rationals, so scaling by the least common denominator
    is exact. Infeasible and non-positive entries map to 0, which the solver
    treats as unassignable.
    """
    n_rows = len(values)
    fracs: list[list[Fraction]] = []
    dens: list[int] = [1]
    for r in range(n_rows):
        row = []
        for c in range(len(values[r])):
            val = float(values[r][c])
            if not (0.0 <= val <= 1.0):
                raise ValueError(f"similarity out of [0,1] at ({r},{c}): {val}")
            if feasible[r][c] and val > 0.0:
                f = Fraction(val)
                dens.append(f.denominator)
                row.append(f)
            else:
                row.append(Fraction(0))
        fracs.append(row)
    d = lcm(*dens)
    return [[int(f * d) for f in row] for row in fracs]


def solve_similarity_assignment(values, feasible) -> list[tuple[int, int]]:
    """Optimal one-to-one partial assignment maximizing total similarity.

    ``values`` is an N x M array-like of similarities in [0,1]; ``feasible``
    a same-shape boolean array-like. Returns (row, col) pairs sorted
    row-major; only feasible, strictly positive entries are ever assigned.
    """
    if len(values) == 0 or (len(values) and len(values[0]) == 0):
        return []
    ints = similarities_to_ints(values, feasible)
    return lexmin_max_assignment(ints)
