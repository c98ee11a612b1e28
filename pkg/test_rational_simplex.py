from fractions import Fraction

import pytest

from rational_simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, check_outcome, enumerate_basic_solutions,
                              solve_standard_form)


def test_optimal_vertex():
    # min -x0 - x1  s.t.  x0 + 2 x1 + s0 = 4,  3 x0 + x1 + s1 = 6
    A = [[1, 2, 1, 0], [3, 1, 0, 1]]
    b = [4, 6]
    outcome = solve_standard_form(A, b, [-1, -1, 0, 0])
    assert outcome.status == OPTIMAL
    assert outcome.x[:2] == [Fraction(8, 5), Fraction(6, 5)]
    assert outcome.objective == Fraction(-14, 5)
    assert check_outcome(A, b, outcome)


def test_feasibility_without_costs():
    A = [[1, 1, 1]]
    outcome = solve_standard_form(A, [Fraction(1, 3)])
    assert outcome.feasible
    assert sum(outcome.x) == Fraction(1, 3)
    assert check_outcome(A, [Fraction(1, 3)], outcome)


def test_infeasible_returns_farkas_row():
    A = [[1, 1], [1, 1]]
    b = [1, 2]
    outcome = solve_standard_form(A, b)
    assert outcome.status == INFEASIBLE
    assert not outcome.feasible
    assert check_outcome(A, b, outcome)


def test_negative_rhs_is_flipped():
    A = [[1, -1], [1, 1]]
    b = [-1, 3]
    outcome = solve_standard_form(A, b)
    assert outcome.status == OPTIMAL
    assert outcome.x == [1, 2]

    outcome = solve_standard_form([[1, 1]], [-1])
    assert outcome.status == INFEASIBLE
    assert check_outcome([[1, 1]], [-1], outcome)


def test_unbounded():
    outcome = solve_standard_form([[1, -1]], [1], [0, -1])
    assert outcome.status == UNBOUNDED


def test_zero_rhs():
    outcome = solve_standard_form([[1, 2], [3, 4]], [0, 0], [1, 1])
    assert outcome.status == OPTIMAL
    assert outcome.x == [0, 0]
    assert outcome.objective == 0


def test_redundant_rows():
    A = [[1, 1, 0], [2, 2, 0], [0, 1, 1]]
    b = [2, 4, 3]
    outcome = solve_standard_form(A, b, [1, 0, 0])
    assert outcome.status == OPTIMAL
    assert outcome.objective == 0
    assert check_outcome(A, b, outcome)


def test_shape_validation():
    with pytest.raises(ValueError):
        solve_standard_form([[1, 2]], [1, 2])
    with pytest.raises(ValueError):
        solve_standard_form([[1, 2]], [1], [1])
    with pytest.raises(TypeError):
        solve_standard_form([[0.5, 1]], [1])


def test_enumerate_basic_solutions():
    A = [[1, 2, 1, 0], [3, 1, 0, 1]]
    found = enumerate_basic_solutions(A, [4, 6])
    vertices = {tuple(x[:2]) for _, x in found}
    assert vertices == {(0, 0), (2, 0), (0, 2), (Fraction(8, 5), Fraction(6, 5))}
    best = min(-x[0] - x[1] for _, x in found)
    assert best == solve_standard_form(A, [4, 6], [-1, -1, 0, 0]).objective


def test_enumerate_rejects_rank_deficient():
    with pytest.raises(ValueError):
        enumerate_basic_solutions([[1, 1], [2, 2]], [1, 2])
