import pytest

from conftest import F
from tugame.errors import LpError
from tugame.lp import LpProblem, LpStatus, Relation, lp_solve, row

LE, EQ, GE = Relation.LE, Relation.EQ, Relation.GE


def test_two_variable_optimum():
    p = LpProblem.build([-1, -1], [row([1, 2], LE, 4), row([3, 1], LE, 6)], lower=[0, 0])
    sol = lp_solve(p)
    assert sol.optimal
    assert sol.x == (F(8, 5), F(6, 5))
    assert sol.value == F(-14, 5)
    assert sum(y * b for y, b in zip(sol.duals, (4, 6))) == sol.value
    assert sol.basis is not None


def test_infeasible():
    p = LpProblem.build([1], [row([1], GE, 2), row([1], LE, 1)])
    assert lp_solve(p).status is LpStatus.INFEASIBLE


def test_unbounded():
    p = LpProblem.build([-1, -1], [row([1, -1], LE, 1)], lower=[0, 0])
    assert lp_solve(p).status is LpStatus.UNBOUNDED


def test_free_variable_negative_rhs():
    sol = lp_solve(LpProblem.build([1], [row([1], EQ, -3)]))
    assert sol.x == (-3,)
    assert sol.value == -3


def test_redundant_equalities():
    p = LpProblem.build([1, 0], [row([1, 1], EQ, 2), row([2, 2], EQ, 4)], lower=[0, 0])
    sol = lp_solve(p)
    assert sol.x == (0, 2)
    assert sol.value == 0


def test_bounds():
    both = lp_solve(LpProblem.build([-1], [row([1], GE, -10)], lower=[0], upper=[5]))
    assert both.x == (5,)
    upper_only = lp_solve(LpProblem.build([-1], [row([1], GE, -10)], upper=[5]))
    assert upper_only.x == (5,)
    lower_only = lp_solve(LpProblem.build([1], [row([1], LE, 10)], lower=[F(-7, 2)]))
    assert lower_only.x == (F(-7, 2),)


def test_degenerate_cycling_example():
    objective = [F(-3, 4), 20, F(-1, 2), 6]
    rows = [
        row([F(1, 4), -8, -1, 9], LE, 0),
        row([F(1, 2), -12, F(-1, 2), 3], LE, 0),
        row([0, 0, 1, 0], LE, 1),
    ]
    sol = lp_solve(LpProblem.build(objective, rows, lower=[0] * 4))
    assert sol.optimal
    assert sol.value == F(-5, 4)


def test_malformed_problem():
    with pytest.raises(LpError):
        lp_solve(LpProblem.build([1, 1], [row([1], LE, 1)]))
    with pytest.raises(LpError):
        lp_solve(LpProblem.build([1, 1], [row([1, 1], LE, 1)], lower=[0]))
