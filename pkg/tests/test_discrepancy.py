"""Sign-selection solvers, the certified bound, and exact bookkeeping."""

import math

import numpy as np
import pytest

from flatwalsh import boolfun, construct, discrepancy, gf2n


def test_problem_shape(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    assert p.n_cols * 7 == 2 ** 9 - 1
    assert p.n_rows == 512
    assert p.h_elements[0] == 1
    dlogs = field9.dlog[p.h_elements]
    assert np.array_equal(dlogs, np.arange(0, 511, 7))
    assert np.all(np.diff(dlogs) > 0)


def test_problem_error(field9):
    with pytest.raises(ValueError, match="divide"):
        discrepancy.make_sign_problem(field9, 10)


def test_spencer_bound_values():
    assert discrepancy.spencer_bound(16, 16) == pytest.approx(11 * math.sqrt(16 * math.log(2)))
    # recomputed independently: 11 * sqrt(73 * ln(1024/73))
    assert discrepancy.spencer_bound(2 ** 9, 73) == pytest.approx(152.73526840646932)
    assert discrepancy.spencer_bound(2 ** 15, 4681) == pytest.approx(1222.6127743492361)
    with pytest.raises(ValueError, match="M >= N"):
        discrepancy.spencer_bound(8, 16)


def test_row_sums_equal_f1_spectrum(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    cs = construct.make_coset_system(field9, 7)
    rng = np.random.default_rng(0)
    u = (1 - 2 * rng.integers(0, 2, p.n_cols)).astype(np.int8)
    f1, _ = construct.split(cs, u, construct.default_g(7))
    assert np.array_equal(discrepancy.row_sums(p, u),
                          boolfun.field_transform(field9, f1.values))


def test_row_sums_direct_small(field3):
    p = discrepancy.make_sign_problem(field3, 7)
    assert p.n_cols == 1
    u = np.array([1], dtype=np.int8)
    want = np.array([gf2n.psi(field3, gf2n.mul(field3, a, 1))
                     for a in range(8)], dtype=np.int64)
    assert np.array_equal(discrepancy.row_sums(p, u), want)


def test_solve_random_single_column(field3):
    p = discrepancy.make_sign_problem(field3, 7)
    sol = discrepancy.solve_random(p, trials=3, seed=0)
    assert sol.achieved == 1


def test_solve_random_deterministic(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    a = discrepancy.solve_random(p, trials=8, seed=42)
    b = discrepancy.solve_random(p, trials=8, seed=42)
    assert np.array_equal(a.u, b.u)
    assert a.achieved == b.achieved
    assert a.seed == 42


def test_solve_random_more_trials_never_worse(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    few = discrepancy.solve_random(p, trials=2, seed=7)
    many = discrepancy.solve_random(p, trials=16, seed=7)
    assert many.achieved <= few.achieved


def test_solve_random_meets_bound(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    sol = discrepancy.solve_random(p, trials=64, seed=3)
    assert sol.achieved <= discrepancy.spencer_bound(512, 73)
    assert discrepancy.achieved_value(p, sol.u) == sol.achieved


def test_localsearch_beats_random_baseline(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    base = discrepancy.solve_random(p, trials=4, seed=5)
    sol = discrepancy.solve_localsearch(p, restarts=4, budget=200, seed=5)
    assert sol.achieved <= base.achieved
    assert discrepancy.certify(sol, p)


def test_localsearch_deterministic(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    a = discrepancy.solve_localsearch(p, restarts=2, budget=100, seed=1)
    b = discrepancy.solve_localsearch(p, restarts=2, budget=100, seed=1)
    assert np.array_equal(a.u, b.u)
    assert a.achieved == b.achieved


def test_localsearch_incremental_matches_recompute(field9):
    p = discrepancy.make_sign_problem(field9, 7)
    sol = discrepancy.solve_localsearch(p, restarts=3, budget=150, seed=2)
    assert discrepancy.achieved_value(p, sol.u) == sol.achieved


def test_localsearch_single_column(field3):
    p = discrepancy.make_sign_problem(field3, 7)
    sol = discrepancy.solve_localsearch(p, restarts=2, budget=5, seed=0)
    assert sol.achieved == 1


def test_localsearch_validation(field3):
    p = discrepancy.make_sign_problem(field3, 7)
    with pytest.raises(ValueError, match="positive"):
        discrepancy.solve_localsearch(p, restarts=0, budget=5)
    with pytest.raises(ValueError, match="at least 1"):
        discrepancy.solve_random(p, trials=0)


def test_certify_zero_solution(field3):
    p = discrepancy.make_sign_problem(field3, 7)
    fake = discrepancy.SignSolution(np.array([1], dtype=np.int8), 0,
                                    discrepancy.spencer_bound(8, 1), 0)
    assert discrepancy.certify(fake, p)


# ---------------------------------------------------------------------------
# Coset sign search
# ---------------------------------------------------------------------------

def test_coset_table(field9):
    signs = np.array([1] + [-1] * 6, dtype=np.int8)
    f = discrepancy.coset_table(field9, 7, signs)
    assert f.values[0] == 1
    for y in range(1, 512):
        assert f.values[y] == signs[gf2n.coset_label(field9, 7, y)]


def test_coset_sign_search_small(field9):
    res = discrepancy.coset_sign_search(field9, 7, restarts=2, budget=50, seed=0)
    f = discrepancy.coset_table(field9, 7, res.signs)
    spectrum = boolfun.field_transform(field9, f.values)
    assert int(np.abs(spectrum).max()) == res.achieved
    again = discrepancy.coset_sign_search(field9, 7, restarts=2, budget=50, seed=0)
    assert res.achieved == again.achieved
    assert np.array_equal(res.signs, again.signs)


def test_coset_sign_search_is_at_most_start(field9):
    # objective never worse than the all-ones assignment's trivial bound 2^n
    res = discrepancy.coset_sign_search(field9, 7, restarts=1, budget=10, seed=1)
    assert res.achieved < 512
