import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avcsym.avc import symmetrization_defect, validate_avc
from avcsym.errors import AlphabetTooSmall, GridTooLarge
from avcsym.linprog import LpStatus, solve_lp
from avcsym.randomscan import sample_avc
from avcsym.symmetrize import (
    brute_force_f,
    build_epsilon_sym_lp,
    f_value,
    is_epsilon_symmetrizable,
    runtime_estimate,
)


def test_f_zero_for_swap_symmetric(swap_symmetric_avc):
    assert f_value(swap_symmetric_avc).f_value <= 1e-8


def test_f_zero_for_x_independent(x_independent_avc):
    assert f_value(x_independent_avc).f_value <= 1e-8


def test_f_for_s_independent(s_independent_avc):
    res = f_value(s_independent_avc)
    assert res.f_value == pytest.approx(1.6, abs=1e-6)


def test_decision_thresholds(s_independent_avc):
    assert is_epsilon_symmetrizable(s_independent_avc, 1.5).is_eps_symmetrizable is False
    assert is_epsilon_symmetrizable(s_independent_avc, 1.7).is_eps_symmetrizable is True


def test_decision_rejects_nonpositive_epsilon(s_independent_avc):
    with pytest.raises(ValueError):
        is_epsilon_symmetrizable(s_independent_avc, 0.0)
    with pytest.raises(ValueError):
        is_epsilon_symmetrizable(s_independent_avc, -1.0)


def test_f_rejects_single_sender():
    avc = validate_avc(np.array([[[0.5, 0.5]]]), 1, 1, 2)
    with pytest.raises(AlphabetTooSmall):
        f_value(avc)


def test_certificate_strategy_reproduces_f():
    rng = np.random.default_rng(201)
    for _ in range(5):
        avc = sample_avc(3, 4, 3, rng)
        res = f_value(avc)
        report = symmetrization_defect(avc, res.strategy)
        assert report.max_defect == pytest.approx(res.f_value, abs=1e-6)


def test_result_json_dict(s_independent_avc):
    data = is_epsilon_symmetrizable(s_independent_avc, 1.5).to_json_dict()
    assert data["symmetrizable"] is False
    assert data["epsilon"] == 1.5
    assert data["f_value"] == pytest.approx(1.6, abs=1e-6)
    assert len(data["u"]) == 2
    assert set(data["lp"]) == {"n", "m", "iterations"}


def test_lp_shape_mid_example():
    avc = sample_avc(4, 6, 4, np.random.default_rng(0))
    lp = build_epsilon_sym_lp(avc, 2.0**-10)
    assert lp.n_vars == 48
    assert lp.a_eq.shape[0] == 4
    # 48 linearization rows plus 6 budget rows
    assert lp.a_ineq.shape[0] == 54


def test_lp_shape_small_example():
    avc = sample_avc(2, 2, 2, np.random.default_rng(0))
    lp = build_epsilon_sym_lp(avc, 0.5)
    assert lp.n_vars == 6
    assert lp.a_eq.shape[0] == 2
    assert lp.a_ineq.shape[0] == 5


def test_lp_rejects_negative_epsilon(s_independent_avc):
    with pytest.raises(ValueError):
        build_epsilon_sym_lp(s_independent_avc, -0.5)


def test_feasibility_lp_infeasible_below_defect(s_independent_avc):
    out = solve_lp(build_epsilon_sym_lp(s_independent_avc, 1.0))
    assert out.status is LpStatus.INFEASIBLE
    out = solve_lp(build_epsilon_sym_lp(s_independent_avc, 1.7))
    assert out.status is LpStatus.OPTIMAL


def test_brute_force_trivial_values(swap_symmetric_avc, s_independent_avc):
    assert brute_force_f(swap_symmetric_avc, 0.05).value == pytest.approx(0.0, abs=1e-12)
    res = brute_force_f(s_independent_avc, 0.25)
    assert res.value == pytest.approx(1.6, abs=1e-12)
    assert float(res) == res.value


def test_brute_force_sandwich():
    rng = np.random.default_rng(77)
    for _ in range(6):
        avc = sample_avc(2, 3, 2, rng)
        exact = f_value(avc).f_value
        grid = brute_force_f(avc, 0.02)
        assert grid.value >= exact - 1e-6
        assert grid.value <= exact + grid.lipschitz_bound * 0.02


def test_brute_force_three_senders():
    rng = np.random.default_rng(78)
    avc = sample_avc(3, 2, 2, rng)
    exact = f_value(avc).f_value
    grid = brute_force_f(avc, 0.1)
    assert grid.value >= exact - 1e-6
    assert grid.value <= exact + grid.lipschitz_bound * 0.1


def test_brute_force_guards():
    avc = sample_avc(2, 30, 2, np.random.default_rng(1))
    with pytest.raises(GridTooLarge):
        brute_force_f(avc, 0.01)
    with pytest.raises(ValueError):
        brute_force_f(avc, 0.0)
    with pytest.raises(ValueError):
        brute_force_f(avc, 1.5)


def test_runtime_estimate_counts():
    est = runtime_estimate(sample_avc(4, 6, 4, np.random.default_rng(0)), 2.0**-10)
    assert est.n == 48
    assert est.m == 4 + 24 + 48 + 6
    assert est.predicted_order == pytest.approx((est.n + est.m) ** 1.5 * est.n * est.l)
    assert runtime_estimate(sample_avc(2, 2, 2, np.random.default_rng(0)), 0.5).n == 6
    assert runtime_estimate(sample_avc(4, 14, 4, np.random.default_rng(0)), 0.5).n == 80


def test_epsilon_monotonicity():
    rng = np.random.default_rng(31)
    for _ in range(5):
        avc = sample_avc(2, 4, 3, rng)
        answers = [
            is_epsilon_symmetrizable(avc, eps).is_eps_symmetrizable
            for eps in (2.0**-8, 2.0**-4, 0.25, 1.0, 2.0)
        ]
        # once symmetrizable, larger budgets stay symmetrizable
        assert answers == sorted(answers)


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_f_relabeling_invariance(seed):
    rng = np.random.default_rng(seed)
    x, s, y = 2, int(rng.integers(2, 4)), int(rng.integers(2, 4))
    avc = sample_avc(x, s, y, rng)
    base = f_value(avc).f_value
    py, ps = rng.permutation(y), rng.permutation(s)
    permuted = validate_avc(avc.w[:, ps][:, :, py], x, s, y)
    assert f_value(permuted).f_value == pytest.approx(base, abs=1e-8)


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_f_within_defect_bounds(seed):
    rng = np.random.default_rng(seed)
    avc = sample_avc(int(rng.integers(2, 4)), int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
    res = f_value(avc)
    assert 0.0 <= res.f_value <= 2.0
