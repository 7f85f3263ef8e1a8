from itertools import combinations

import numpy as np
import pytest

from avcsym.errors import DimensionMismatch, IterationLimit
from avcsym.linprog import (
    FEASIBILITY_TOL,
    LinearProgram,
    LpStatus,
    solve_lp,
    verify_point,
)


def test_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        LinearProgram(np.zeros((2, 2)))
    with pytest.raises(DimensionMismatch):
        LinearProgram(np.ones(2), a_eq=np.ones((1, 3)), b_eq=np.ones(1))
    with pytest.raises(DimensionMismatch):
        LinearProgram(np.ones(2), a_eq=np.ones((1, 2)), b_eq=np.ones(2))
    with pytest.raises(DimensionMismatch):
        LinearProgram(np.ones(2), lower_bounds=np.zeros(3))


def test_simple_optimal():
    # min -x1 - x2  s.t. x1 + x2 <= 1  ->  value -1 on the boundary segment
    lp = LinearProgram(
        np.array([-1.0, -1.0]), a_ineq=np.array([[1.0, 1.0]]), b_ineq=np.array([1.0])
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == pytest.approx(-1.0, abs=1e-9)
    assert out.point.sum() == pytest.approx(1.0, abs=1e-9)


def test_infeasible():
    # x1 + x2 = 2 conflicts with x1 + x2 <= 1
    lp = LinearProgram(
        np.zeros(2),
        a_eq=np.array([[1.0, 1.0]]),
        b_eq=np.array([2.0]),
        a_ineq=np.array([[1.0, 1.0]]),
        b_ineq=np.array([1.0]),
    )
    assert solve_lp(lp).status is LpStatus.INFEASIBLE


def test_unbounded():
    lp = LinearProgram(np.array([-1.0, 0.0]))
    assert solve_lp(lp).status is LpStatus.UNBOUNDED


def test_equality_only_program():
    lp = LinearProgram(
        np.array([1.0, 2.0, 0.0]),
        a_eq=np.array([[1.0, 1.0, 1.0], [1.0, -1.0, 0.0]]),
        b_eq=np.array([1.0, 0.0]),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    # optimum puts everything into the free third coordinate
    np.testing.assert_allclose(out.point, [0.0, 0.0, 1.0], atol=1e-9)


def test_lower_bounds_shift():
    # min x subject to x >= 3
    lp = LinearProgram(np.array([1.0]), lower_bounds=np.array([3.0]))
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == pytest.approx(3.0, abs=1e-12)


def test_negative_rhs_rows_handled():
    # -x1 <= -2 means x1 >= 2; the row is flipped and gets an artificial
    lp = LinearProgram(
        np.array([1.0, 0.0]),
        a_ineq=np.array([[-1.0, 0.0]]),
        b_ineq=np.array([-2.0]),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.value == pytest.approx(2.0, abs=1e-9)


def test_iteration_limit_raises():
    rng = np.random.default_rng(3)
    lp = LinearProgram(
        -np.ones(6),
        a_ineq=rng.uniform(0.1, 1.0, size=(8, 6)),
        b_ineq=rng.uniform(1.0, 2.0, size=8),
    )
    with pytest.raises(IterationLimit):
        solve_lp(lp, max_iterations=1)


def test_verify_point_reports_each_violation_kind():
    lp = LinearProgram(
        np.zeros(2),
        a_eq=np.array([[1.0, 0.0]]),
        b_eq=np.array([1.0]),
        a_ineq=np.array([[0.0, 1.0]]),
        b_ineq=np.array([1.0]),
    )
    bad = np.array([2.0, 3.0])
    kinds = {v.kind for v in verify_point(lp, bad, 1e-9)}
    assert kinds == {"eq", "ineq"}
    below = np.array([1.0, -1.0])
    assert {v.kind for v in verify_point(lp, below, 1e-9)} == {"lower_bound"}
    assert verify_point(lp, np.array([1.0, 0.5]), 1e-9) == []


def test_solutions_satisfy_constraints():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n, mi = int(rng.integers(2, 7)), int(rng.integers(1, 6))
        lp = LinearProgram(
            rng.normal(size=n),
            a_ineq=rng.normal(size=(mi, n)),
            b_ineq=rng.uniform(0.5, 2.0, size=mi),
        )
        out = solve_lp(lp)
        if out.status is LpStatus.OPTIMAL:
            assert verify_point(lp, out.point, FEASIBILITY_TOL) == []


def _vertex_minimum(lp):
    """Oracle: enumerate basic feasible points of {A_ineq v <= b, v >= 0}.

    Every vertex is the solution of n active constraints drawn from the
    inequality rows and the nonnegativity facets.  Infinite/singular systems
    are skipped; returns None when the feasible set has no vertex.
    """
    n = lp.n_vars
    rows = [(lp.a_ineq[i], lp.b_ineq[i]) for i in range(lp.a_ineq.shape[0])]
    rows += [(-np.eye(n)[j], 0.0) for j in range(n)]
    best = None
    for active in combinations(range(len(rows)), n):
        a = np.array([rows[i][0] for i in active])
        b = np.array([rows[i][1] for i in active])
        try:
            v = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if verify_point(lp, v, 1e-9):
            continue
        value = float(lp.objective @ v)
        if best is None or value < best:
            best = value
    return best


def test_optimum_matches_vertex_enumeration():
    rng = np.random.default_rng(29)
    checked = 0
    for _ in range(60):
        n, mi = int(rng.integers(2, 5)), int(rng.integers(2, 6))
        lp = LinearProgram(
            rng.normal(size=n),
            a_ineq=np.vstack([rng.normal(size=(mi, n)), np.ones(n)]),
            b_ineq=np.concatenate([rng.uniform(0.2, 2.0, size=mi), [rng.uniform(1, 3)]]),
        )
        out = solve_lp(lp)
        if out.status is not LpStatus.OPTIMAL:
            continue
        oracle = _vertex_minimum(lp)
        assert oracle is not None
        assert out.value == pytest.approx(oracle, abs=1e-6)
        checked += 1
    assert checked >= 40


def test_bitwise_determinism():
    rng = np.random.default_rng(101)
    for _ in range(10):
        n, mi = int(rng.integers(3, 8)), int(rng.integers(2, 8))
        lp_data = (
            rng.normal(size=n),
            np.vstack([rng.normal(size=(mi, n)), np.ones(n)]),
            np.concatenate([rng.uniform(0.5, 2.0, size=mi), [2.0]]),
        )
        first = solve_lp(LinearProgram(lp_data[0], a_ineq=lp_data[1], b_ineq=lp_data[2]))
        second = solve_lp(LinearProgram(lp_data[0], a_ineq=lp_data[1], b_ineq=lp_data[2]))
        assert first.status is second.status
        assert first.iterations == second.iterations
        if first.status is LpStatus.OPTIMAL:
            assert first.value.hex() == second.value.hex()
            assert first.point.tobytes() == second.point.tobytes()


def test_degenerate_program_terminates():
    # all rhs zero except the normalization; forces many zero-step pivots
    n = 12
    a_ineq = np.vstack([np.eye(n) - 1.0 / n, -np.eye(n) + 1.0 / n])
    lp = LinearProgram(
        -np.arange(1.0, n + 1.0),
        a_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
        a_ineq=a_ineq,
        b_ineq=np.zeros(2 * n),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    # rows force the uniform point, so the objective is the coordinate mean
    assert out.value == pytest.approx(-(n + 1) / 2.0, abs=1e-8)
