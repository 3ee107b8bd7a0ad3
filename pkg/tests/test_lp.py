from fractions import Fraction

import pytest

from riskcomb.lp import enumerate_vertices, is_feasible, solve_lp


def test_textbook_max():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    res = solve_lp([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], maximize=True)
    assert res.ok
    assert res.value == pytest.approx(36)
    assert res.x == pytest.approx([2, 6])


def test_exact_value():
    res = solve_lp([1, 1], [[3, 1], [1, 3]], [1, 1], maximize=True, exact=True)
    assert res.value == Fraction(1, 2)
    assert res.x == [Fraction(1, 4), Fraction(1, 4)]


def test_equality_and_redundant_rows():
    res = solve_lp([1, 2, 3], A_eq=[[1, 1, 1], [2, 2, 2]], b_eq=[1, 2], exact=True)
    assert res.ok and res.value == 1


def test_infeasible_and_unbounded():
    assert solve_lp([1], A_ub=[[1]], b_ub=[-1]).status == "infeasible"
    assert solve_lp([1, 0], A_ub=[[-1, 1]], b_ub=[1], maximize=True).status == "unbounded"
    assert not is_feasible(A_eq=[[1, 1]], b_eq=[-1], n=2)


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule must terminate
    F = Fraction
    c = [F("-0.75"), 150, F("-0.02"), 6]
    A = [[F("0.25"), -60, F("-0.04"), 9], [F("0.5"), -90, F("-0.02"), 3], [0, 0, 1, 0]]
    res = solve_lp(c, A, [0, 0, 1], exact=True)
    assert res.ok and res.value == Fraction(-1, 20)


def test_vertices_of_square():
    vs = enumerate_vertices([[1, 0], [0, 1]], [1, 1], n=2)
    assert sorted(map(tuple, vs)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_vertices_of_simplex_slice():
    vs = enumerate_vertices([[2, 0, 0]], [1], A_eq=[[1, 1, 1]], b_eq=[1], n=3)
    assert sorted(map(tuple, vs)) == sorted([(0, 1, 0), (0, 0, 1), (Fraction(1, 2), Fraction(1, 2), 0),
                                             (Fraction(1, 2), 0, Fraction(1, 2))])
