import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.optimize import linprog

from contexture.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    brute_force_vertex_opt,
    maximize,
)

small_ints = st.integers(-4, 4).map(float)


@st.composite
def lps(draw, max_vars=4, max_rows=5):
    n = draw(st.integers(1, max_vars))
    m = draw(st.integers(1, max_rows))
    A = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m))
    b = draw(st.lists(small_ints, min_size=m, max_size=m))
    c = draw(st.lists(small_ints, min_size=n, max_size=n))
    return LinearProgram(c, A, b)


@given(lps())
def test_simplex_matches_exact_vertex_oracle(lp):
    ours = maximize(lp)
    oracle = brute_force_vertex_opt(lp)
    assert ours.status == oracle.status
    if ours.status == OPTIMAL:
        assert abs(ours.value - oracle.value) < 1e-7


@given(lps(max_vars=6, max_rows=8))
def test_simplex_matches_highs(lp):
    ours = maximize(lp)
    ref = linprog(-lp.objective, A_ub=lp.A, b_ub=lp.b, bounds=(0, None), method="highs")
    expected = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    assert ours.status == expected
    if expected == OPTIMAL:
        assert abs(ours.value + ref.fun) < 1e-7


@given(lps(max_vars=6, max_rows=8))
def test_solution_is_primal_and_dual_feasible(lp):
    sol = maximize(lp)
    assume(sol.status == OPTIMAL)
    x, y = sol.point, sol.duals
    assert np.all(x >= 0)
    assert np.all(lp.A @ x <= lp.b + 1e-7)
    assert np.all(y >= 0)
    # any feasible dual bounds the primal; ours is tight
    assert np.all(lp.A.T @ y >= lp.objective - 1e-7)
    assert abs(lp.b @ y - sol.value) < 1e-7


def test_textbook_problem():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    sol = maximize(LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18]))
    assert sol.status == OPTIMAL
    assert sol.value == pytest.approx(36)
    np.testing.assert_allclose(sol.point, [2, 6], atol=1e-12)
    np.testing.assert_allclose(sol.duals, [0, 1.5, 1], atol=1e-12)


def test_beale_cycling_example_terminates():
    # cycles under the largest-coefficient rule without anti-cycling
    c = [0.75, -150, 0.02, -6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    sol = maximize(LinearProgram(c, A, [0, 0, 1]))
    assert sol.status == OPTIMAL
    assert sol.value == pytest.approx(0.05)


def test_greater_equal_rows_need_phase_one():
    lp = LinearProgram.from_rows([-1, -1], [([1, 1], ">=", 2), ([1, -1], "<=", 1)])
    sol = maximize(lp)
    assert sol.status == OPTIMAL and sol.value == pytest.approx(-2)


def test_infeasible_and_unbounded():
    assert maximize(LinearProgram([1], [[1], [-1]], [1, -2])).status == INFEASIBLE
    assert maximize(LinearProgram([1, 0], [[0, 1]], [1])).status == UNBOUNDED


def test_no_constraints():
    assert maximize(LinearProgram([0.0, -1.0], np.zeros((0, 2)), [])).value == 0.0
    assert maximize(LinearProgram([1.0], np.zeros((0, 1)), [])).status == UNBOUNDED


def test_validation():
    with pytest.raises(ValueError):
        LinearProgram([1, 1], [[1, 1]], [1, 2])
    with pytest.raises(ValueError):
        LinearProgram([1], [[np.inf]], [1])


def test_oracle_guard():
    with pytest.raises(ValueError):
        brute_force_vertex_opt(LinearProgram(np.ones(13), np.ones((1, 13)), [1]))
