"""Deciding approximate symmetrizability of a finite AVC.

The defect

    F = min_U max_{x < xhat} sum_y | sum_s W(y|x,s) U(s|xhat)
                                   - sum_s W(y|xhat,s) U(s|x) |

is the optimum of a linear program: auxiliary variables z(x, xhat, y) bound
the absolute values from above, per-pair budget rows bound sum_y z, and a
scalar t couples the budgets for the min-max form.  The epsilon-SYM decision
"is F <= epsilon?" is answered by comparing the computed F against epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Optional

import numpy as np

from . import _kernels
from .avc import Avc, JammerStrategy, symmetrization_defect
from .errors import AlphabetTooSmall, GridTooLarge, NumericalBreakdown
from .linprog import LinearProgram, LpStatus, solve_lp

GRID_CAP = 10_000_000  # max lattice points per strategy row in brute_force_f
PRODUCT_CAP = 100_000_000  # max row combinations for the X >= 3 brute force
DECISION_SLACK = 1e-8
CERTIFICATE_TOL = 1e-6
DEFAULT_EPSILON = 2.0**-10  # documented default threshold for CLI decisions


@dataclass(frozen=True)
class LpStats:
    n: int
    m: int
    iterations: int


@dataclass(frozen=True)
class SymResult:
    f_value: float
    strategy: JammerStrategy
    lp_stats: LpStats
    epsilon: Optional[float] = None
    is_eps_symmetrizable: Optional[bool] = None

    def to_json_dict(self) -> dict:
        return {
            "f_value": self.f_value,
            "epsilon": self.epsilon,
            "symmetrizable": self.is_eps_symmetrizable,
            "u": self.strategy.u.tolist(),
            "lp": {
                "n": self.lp_stats.n,
                "m": self.lp_stats.m,
                "iterations": self.lp_stats.iterations,
            },
        }


@dataclass(frozen=True)
class BruteForceF:
    """Grid-search defect minimum plus the bound that makes it an oracle:
    true F lies in [value - grid error, value], with grid error at most
    lipschitz_bound * resolution."""

    value: float
    lipschitz_bound: float
    row_grid_size: int

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class RuntimeEstimate:
    """Closed-form LP size and the (n+m)^1.5 * n * L cost scalar.

    m counts all four constraint families of the feasibility program
    (normalization equalities, U lower bounds, linearization rows, budget
    rows); the solved LinearProgram stores the lower bounds as bounds, so its
    structural row count is smaller by x_size * s_size.
    """

    n: int
    m: int
    l: float
    predicted_order: float


def _pairs(x_size: int) -> list:
    return list(combinations(range(x_size), 2))


def _assemble(avc: Avc, *, epsilon: Optional[float], minimize_t: bool) -> LinearProgram:
    x_size, s_size, y_size = avc.x_size, avc.s_size, avc.y_size
    if x_size < 2:
        raise AlphabetTooSmall("epsilon-SYM needs at least two sender symbols")
    pairs = _pairs(x_size)
    np_pairs = len(pairs)
    nu = x_size * s_size
    nz = np_pairs * y_size
    n = nu + nz + (1 if minimize_t else 0)

    a_eq = np.zeros((x_size, n))
    for x in range(x_size):
        a_eq[x, x * s_size : (x + 1) * s_size] = 1.0
    b_eq = np.ones(x_size)

    n_lin = 2 * np_pairs * y_size
    a_ineq = np.zeros((n_lin + np_pairs, n))
    b_ineq = np.zeros(n_lin + np_pairs)
    for p, (x, h) in enumerate(pairs):
        w_x = avc.w[x]  # (s_size, y_size)
        w_h = avc.w[h]
        for y in range(y_size):
            r = 2 * (p * y_size + y)
            zcol = nu + p * y_size + y
            a_ineq[r, h * s_size : (h + 1) * s_size] = w_x[:, y]
            a_ineq[r, x * s_size : (x + 1) * s_size] = -w_h[:, y]
            a_ineq[r, zcol] = -1.0
            a_ineq[r + 1] = -a_ineq[r]
            a_ineq[r + 1, zcol] = -1.0
        budget = n_lin + p
        a_ineq[budget, nu + p * y_size : nu + (p + 1) * y_size] = 1.0
        if minimize_t:
            a_ineq[budget, n - 1] = -1.0
        else:
            b_ineq[budget] = epsilon

    objective = np.zeros(n)
    if minimize_t:
        objective[n - 1] = 1.0
    return LinearProgram(objective, a_eq, b_eq, a_ineq, b_ineq)


def build_epsilon_sym_lp(avc: Avc, epsilon: float) -> LinearProgram:
    """Feasibility program: does some U achieve every pair budget <= epsilon?"""
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    return _assemble(avc, epsilon=epsilon, minimize_t=False)


def f_value(avc: Avc) -> SymResult:
    """Exact defect minimum as a single LP (scalar t replacing the budgets)."""
    lp = _assemble(avc, epsilon=None, minimize_t=True)
    outcome = solve_lp(lp)
    if outcome.status is not LpStatus.OPTIMAL:
        # The program is always feasible (uniform U) and bounded (t >= 0).
        raise NumericalBreakdown(f"defect LP reported {outcome.status.value}")
    f = max(0.0, outcome.value)
    nu = avc.x_size * avc.s_size
    strategy = JammerStrategy.from_lp_point(
        outcome.point[:nu].reshape(avc.x_size, avc.s_size)
    )
    report = symmetrization_defect(avc, strategy)
    if abs(report.max_defect - f) > CERTIFICATE_TOL:
        raise NumericalBreakdown(
            f"certificate defect {report.max_defect!r} disagrees with LP optimum {f!r}"
        )
    stats = LpStats(n=lp.n_vars, m=lp.n_rows, iterations=outcome.iterations)
    return SymResult(f_value=f, strategy=strategy, lp_stats=stats)


def is_epsilon_symmetrizable(avc: Avc, epsilon: float) -> SymResult:
    """Decide F <= epsilon (one LP; threshold padded by the solver slack)."""
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    res = f_value(avc)
    return replace(
        res,
        epsilon=float(epsilon),
        is_eps_symmetrizable=bool(res.f_value <= epsilon + DECISION_SLACK),
    )


def _simplex_lattice(k: int, parts: int) -> np.ndarray:
    """All length-`parts` nonnegative integer vectors summing to k."""
    if parts == 1:
        return np.array([[k]], dtype=np.int64)
    blocks = []
    for first in range(k + 1):
        rest = _simplex_lattice(k - first, parts - 1)
        blocks.append(
            np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest])
        )
    return np.vstack(blocks)


def brute_force_f(avc: Avc, resolution: float) -> BruteForceF:
    """Exhaustive defect minimum over strategies whose rows lie on the
    simplex lattice of pitch `resolution` (rounded to the nearest 1/k).

    Sandwich guarantee: value >= F and value <= F + lipschitz_bound *
    resolution.  Memory is O(grid * s_size); the per-row grid is capped.
    """
    if avc.x_size < 2:
        raise AlphabetTooSmall("defect needs at least two sender symbols")
    if resolution <= 0.0 or resolution > 1.0:
        raise ValueError(f"resolution must be in (0, 1], got {resolution}")
    k = max(1, round(1.0 / resolution))
    count = math.comb(k + avc.s_size - 1, avc.s_size - 1)
    if count > GRID_CAP:
        raise GridTooLarge(f"lattice has {count} points per row, cap is {GRID_CAP}")
    lattice = _simplex_lattice(k, avc.s_size).astype(np.float64) / k
    # mixed[x][r] = output distribution when strategy row r is played against
    # sender symbol x: mixed[x][r, y] = sum_s lattice[r, s] W(y|x, s).
    mixed = [np.ascontiguousarray(lattice @ avc.w[x]) for x in range(avc.x_size)]
    lipschitz = 2.0 * avc.x_size * avc.s_size * avc.y_size

    if avc.x_size == 2:
        value = _kernels.pairwise_l1_min(mixed[0], mixed[1])
        return BruteForceF(float(value), lipschitz, count)

    if count**avc.x_size > PRODUCT_CAP:
        raise GridTooLarge(
            f"{count}^{avc.x_size} strategy combinations exceed cap {PRODUCT_CAP}"
        )
    pairs = _pairs(avc.x_size)
    best = np.inf
    chunk = []
    chunk_size = 8192

    def flush(rows: list) -> float:
        idx = np.asarray(rows, dtype=np.int64)
        worst = np.zeros(idx.shape[0])
        for x, h in pairs:
            d = np.abs(mixed[x][idx[:, h]] - mixed[h][idx[:, x]]).sum(axis=1)
            np.maximum(worst, d, out=worst)
        return float(worst.min())

    for combo in product(range(count), repeat=avc.x_size):
        chunk.append(combo)
        if len(chunk) == chunk_size:
            best = min(best, flush(chunk))
            chunk = []
    if chunk:
        best = min(best, flush(chunk))
    return BruteForceF(best, lipschitz, count)


def runtime_estimate(avc: Avc, epsilon: float) -> RuntimeEstimate:
    """LP size closed forms and the (n+m)^1.5 * n * L cost scalar."""
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x, s, y = avc.x_size, avc.s_size, avc.y_size
    np_pairs = x * (x - 1) // 2
    n = x * s + np_pairs * y
    m = x + x * s + 2 * np_pairs * y + np_pairs
    l = max(1.0, abs(math.log2(epsilon * (x * x * y + x * s))))
    predicted = (n + m) ** 1.5 * n * l
    return RuntimeEstimate(n=n, m=m, l=l, predicted_order=predicted)
