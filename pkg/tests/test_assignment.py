from fractions import Fraction

import numpy as np
import pytest

from tracklink.assignment import lexmin_max_assignment, max_total, similarities_to_ints, \
    solve_similarity_assignment


def brute_force_max(weights: list[list[int]]) -> int:
    """Independent oracle: bitmask DP over columns, exhaustive over row subsets."""
    n = len(weights)
    m = len(weights[0]) if n else 0
    best = {0: 0}
    for c in range(m):
        nxt = dict(best)
        for used, total in best.items():
            for r in range(n):
                if used >> r & 1 or weights[r][c] <= 0:
                    continue
                cand = total + weights[r][c]
                key = used | 1 << r
                if cand > nxt.get(key, -1):
                    nxt[key] = cand
        best = nxt
    return max(best.values())


def exact_total(values, pairs) -> Fraction:
    return sum((Fraction(float(values[r][c])) for r, c in pairs), Fraction(0))


class TestMaxTotal:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            n, m = rng.integers(1, 8, 2)
            w = rng.integers(0, 100, (n, m)).tolist()
            assert max_total(w, list(range(n)), list(range(m))) == brute_force_max(w)

    def test_empty(self):
        assert max_total([[5]], [], [0]) == 0
        assert max_total([], [], []) == 0


class TestSolve:
    def test_single_entry(self):
        assert solve_similarity_assignment([[0.9]], [[True]]) == [(0, 0)]

    def test_prefers_total_over_greedy(self):
        # 0.8 + 0.85 beats 0.9 + 0.1
        pairs = solve_similarity_assignment([[0.9, 0.8], [0.85, 0.1]], [[True, True], [True, True]])
        assert pairs == [(0, 1), (1, 0)]

    def test_empty_matrix(self):
        assert solve_similarity_assignment([], []) == []
        assert solve_similarity_assignment([[]], [[]]) == []

    def test_infeasible_never_assigned(self):
        pairs = solve_similarity_assignment([[0.9, 0.1], [0.2, 0.95]],
                                            [[False, True], [True, False]])
        assert pairs == [(0, 1), (1, 0)]

    def test_zero_similarity_never_assigned(self):
        pairs = solve_similarity_assignment([[0.5, 0.0], [0.0, 0.0]],
                                            [[True, True], [True, True]])
        assert pairs == [(0, 0)]

    def test_forced_infeasible_row_left_unmatched(self):
        # row 1 only has an infeasible option; it must stay unmatched rather
        # than push row 0 off its best column
        pairs = solve_similarity_assignment([[0.9, 0.1], [0.8, 0.0]],
                                            [[True, True], [True, False]])
        assert pairs == [(0, 1), (1, 0)]
        pairs = solve_similarity_assignment([[0.9], [0.8]], [[True], [False]])
        assert pairs == [(0, 0)]

    def test_exact_on_random_dyadic(self):
        rng = np.random.default_rng(32)
        for _ in range(200):
            n, m = rng.integers(1, 8, 2)
            vals = (rng.integers(0, 1025, (n, m)) / 1024).tolist()
            feas = (rng.random((n, m)) < 0.8).tolist()
            pairs = solve_similarity_assignment(vals, feas)
            # oracle on its own exact integer scale (values are multiples of 1/1024)
            oracle_ints = [[int(v * 1024) if f and v > 0 else 0 for v, f in zip(vr, fr)]
                           for vr, fr in zip(vals, feas)]
            assert exact_total(vals, pairs) == Fraction(brute_force_max(oracle_ints), 1024)
            assert all(feas[r][c] and vals[r][c] > 0 for r, c in pairs)
            rows = [r for r, _ in pairs]
            cols = [c for _, c in pairs]
            assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)

    def test_lexicographic_tie_break(self):
        pairs = solve_similarity_assignment([[0.9, 0.9], [0.9, 0.9]],
                                            [[True, True], [True, True]])
        assert pairs == [(0, 0), (1, 1)]
        # equal candidates for one slot: lowest row index wins
        assert solve_similarity_assignment([[0.5], [0.5]], [[True], [True]]) == [(0, 0)]

    def test_lexmin_is_smallest_among_optima(self):
        rng = np.random.default_rng(33)
        for _ in range(100):
            n, m = rng.integers(1, 5, 2)
            w = rng.integers(0, 4, (n, m)).tolist()  # small range forces many ties
            got = lexmin_max_assignment(w)
            best_total = brute_force_max(w)
            assert sum(w[r][c] for r, c in got) == best_total
            # enumerate all optimal assignments and confirm lex-minimality
            optima = []

            def search(row, used_cols, picked, total):
                if row == n:
                    if total == best_total:
                        optima.append(sorted(picked))
                    return
                search(row + 1, used_cols, picked, total)
                for c in range(m):
                    if c not in used_cols and w[row][c] > 0:
                        search(row + 1, used_cols | {c}, picked + [(row, c)], total + w[row][c])

            search(0, set(), [], 0)
            assert sorted(got) == min(optima)

    def test_out_of_range_similarity_rejected(self):
        with pytest.raises(ValueError):
            solve_similarity_assignment([[1.5]], [[True]])

    def test_int_scaling_is_lossless(self):
        vals = [[0.3, 0.7], [1e-9, 0.25]]
        feas = [[True, False], [True, True]]
        ints = similarities_to_ints(vals, feas)
        assert ints[0][1] == 0  # gated
        d = Fraction(ints[0][0]) / Fraction(vals[0][0])
        for r in range(2):
            for c in range(2):
                if feas[r][c] and vals[r][c] > 0:
                    assert Fraction(ints[r][c]) == Fraction(vals[r][c]) * d
