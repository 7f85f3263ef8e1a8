"""Dense two-phase primal simplex for small, dense linear programs.

Minimizes c.v subject to A_eq v = b_eq, A_ineq v <= b_ineq, v >= lower_bounds.
Pivoting rules are fixed: most-negative entering cost with lowest-index ties
and a Harris-style two-pass ratio test while progress is normal, switching
permanently to Bland's rule (first negative cost, exact minimum ratio,
smallest basic label) after 1000 degenerate pivots.  The tableau is rebuilt
from the original columns every REFACTOR_EVERY pivots and every terminal
verdict must survive a rebuild, so long degenerate solves cannot drift into
wrong answers.  All tie-breaking is deterministic and both kernel backends
perform identical arithmetic, hence identical inputs give bitwise-identical
outcomes.  Optimal points are re-verified against the original constraints
before being returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from ._kernels.slow import _pivot as _py_pivot
from .errors import DimensionMismatch, IterationLimit, NumericalBreakdown

FEASIBILITY_TOL = 1e-8
PIVOT_TOL = 1e-12
COST_TOL = 1e-9
BLAND_AFTER = 1000
# Rebuild the tableau from the original columns after this many pivots;
# row operations alone accumulate too much roundoff on degenerate instances.
REFACTOR_EVERY = 64


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    objective: np.ndarray
    a_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    a_ineq: Optional[np.ndarray] = None
    b_ineq: Optional[np.ndarray] = None
    lower_bounds: Optional[np.ndarray] = None
    variable_names: Optional[tuple] = None

    def __post_init__(self):
        self.objective = np.ascontiguousarray(self.objective, dtype=np.float64)
        if self.objective.ndim != 1 or self.objective.size == 0:
            raise DimensionMismatch("objective must be a nonempty vector")
        n = self.objective.shape[0]
        self.a_eq, self.b_eq = self._coerce_block(self.a_eq, self.b_eq, n, "eq")
        self.a_ineq, self.b_ineq = self._coerce_block(self.a_ineq, self.b_ineq, n, "ineq")
        if self.lower_bounds is None:
            self.lower_bounds = np.zeros(n)
        else:
            self.lower_bounds = np.ascontiguousarray(self.lower_bounds, dtype=np.float64)
            if self.lower_bounds.shape != (n,):
                raise DimensionMismatch(
                    f"lower_bounds has shape {self.lower_bounds.shape}, expected ({n},)"
                )
        if self.variable_names is not None and len(self.variable_names) != n:
            raise DimensionMismatch("variable_names length differs from objective")

    @staticmethod
    def _coerce_block(a, b, n, kind):
        if a is None and b is None:
            return np.zeros((0, n)), np.zeros(0)
        a = np.ascontiguousarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != n:
            raise DimensionMismatch(f"a_{kind} must have {n} columns, got shape {a.shape}")
        b = np.ascontiguousarray(b, dtype=np.float64)
        if b.shape != (a.shape[0],):
            raise DimensionMismatch(
                f"b_{kind} has shape {b.shape}, expected ({a.shape[0]},)"
            )
        return a, b

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def n_rows(self) -> int:
        return self.a_eq.shape[0] + self.a_ineq.shape[0]


@dataclass(frozen=True)
class ConstraintViolation:
    kind: str  # "eq" | "ineq" | "lower_bound"
    index: int
    residual: float


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Optional[float]
    point: Optional[np.ndarray]
    iterations: int


def verify_point(lp: LinearProgram, point, tol: float) -> list:
    """Independent residual check; returns every violation beyond tol."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (lp.n_vars,):
        raise DimensionMismatch(f"point has shape {point.shape}, expected ({lp.n_vars},)")
    violations = []
    if lp.a_eq.shape[0]:
        res = lp.a_eq @ point - lp.b_eq
        for idx in np.nonzero(np.abs(res) > tol)[0]:
            violations.append(ConstraintViolation("eq", int(idx), float(res[idx])))
    if lp.a_ineq.shape[0]:
        res = lp.a_ineq @ point - lp.b_ineq
        for idx in np.nonzero(res > tol)[0]:
            violations.append(ConstraintViolation("ineq", int(idx), float(res[idx])))
    res = lp.lower_bounds - point
    for idx in np.nonzero(res > tol)[0]:
        violations.append(ConstraintViolation("lower_bound", int(idx), float(res[idx])))
    return violations


def solve_lp(
    lp: LinearProgram,
    *,
    feasibility_tol: float = FEASIBILITY_TOL,
    pivot_tol: float = PIVOT_TOL,
    bland_after: int = BLAND_AFTER,
    max_iterations: Optional[int] = None,
) -> LpOutcome:
    """Two-phase simplex.  Raises IterationLimit or NumericalBreakdown;
    infeasibility and unboundedness are reported through the outcome status.
    """
    n = lp.n_vars
    me = lp.a_eq.shape[0]
    mi = lp.a_ineq.shape[0]
    m = me + mi
    if max_iterations is None:
        max_iterations = 50 * (m + n)

    # Standard form in shifted variables u = v - lower_bounds >= 0.
    shift = lp.lower_bounds
    b_all = np.concatenate([lp.b_eq - lp.a_eq @ shift, lp.b_ineq - lp.a_ineq @ shift])
    a_all = np.vstack([lp.a_eq, lp.a_ineq]) if m else np.zeros((0, n))

    flip = b_all < 0.0
    a_all = np.where(flip[:, None], -a_all, a_all)
    b_all = np.where(flip, -b_all, b_all)

    # Slack columns: +1 for unflipped inequality rows, -1 for flipped ones.
    slack_sign = np.where(flip[me:], -1.0, 1.0)
    # Rows needing an artificial: every eq row, plus flipped ineq rows.
    needs_art = np.concatenate([np.ones(me, bool), flip[me:]])
    art_rows = np.nonzero(needs_art)[0]
    na = art_rows.size

    cols = n + mi + na + 1
    tableau = np.zeros((m + 1, cols))
    tableau[:m, :n] = a_all
    tableau[:m, -1] = b_all
    for k in range(mi):
        tableau[me + k, n + k] = slack_sign[k]
    for k, r in enumerate(art_rows):
        tableau[r, n + mi + k] = 1.0

    basis = np.empty(m, dtype=np.int64)
    basis[me:] = np.arange(n, n + mi)
    for k, r in enumerate(art_rows):
        basis[r] = n + mi + k

    # Original standard-form columns, kept pristine for refactorization.
    struct = np.array(tableau[:m, :-1])
    rhs_orig = np.array(b_all)

    iterations = 0
    degen = 0

    if na:
        # Phase 1: minimize the sum of artificials.
        phase1_cost = np.zeros(cols - 1)
        phase1_cost[n + mi : n + mi + na] = 1.0
        status, iterations, degen = _run_phase(
            tableau, basis, phase1_cost, struct, rhs_orig,
            pivot_tol, bland_after, degen, max_iterations, iterations, "phase 1",
        )
        if status == _kernels.STATUS_UNBOUNDED:
            # The phase-1 objective is bounded below by zero.
            raise NumericalBreakdown("phase 1 reported unbounded")
        phase1_value = -tableau[m, -1]
        if phase1_value > feasibility_tol:
            return LpOutcome(LpStatus.INFEASIBLE, None, None, iterations)
        tableau, basis, kept = _purge_artificials(tableau, basis, n + mi, pivot_tol)
        m = basis.shape[0]
        struct = np.ascontiguousarray(struct[kept, : n + mi])
        rhs_orig = rhs_orig[kept]

    # Phase 2 objective on the shifted variables.
    phase2_cost = np.zeros(tableau.shape[1] - 1)
    phase2_cost[:n] = lp.objective
    status, iterations, degen = _run_phase(
        tableau, basis, phase2_cost, struct, rhs_orig,
        pivot_tol, bland_after, degen, max_iterations, iterations, "phase 2",
    )
    if status == _kernels.STATUS_UNBOUNDED:
        return LpOutcome(LpStatus.UNBOUNDED, None, None, iterations)

    u = np.zeros(tableau.shape[1] - 1)
    u[basis] = tableau[:m, -1]
    point = shift + u[:n]
    violations = verify_point(lp, point, feasibility_tol)
    if violations:
        raise NumericalBreakdown(
            f"optimal point failed self-verification: {violations[:3]}"
        )
    value = float(lp.objective @ point)
    return LpOutcome(LpStatus.OPTIMAL, value, point, iterations)


def _refactorize(tableau, basis, struct, rhs_orig):
    """Rebuild every constraint row as B^-1 [A | b] from the original data.

    Thousands of rank-one row updates drift; re-deriving the tableau from the
    current basis resets that error.  Shared by both kernel backends so the
    rebuilt bits are identical.
    """
    m = basis.shape[0]
    if m == 0:
        return
    try:
        fresh = np.linalg.solve(
            struct[:, basis], np.hstack([struct, rhs_orig[:, None]])
        )
    except np.linalg.LinAlgError:
        raise NumericalBreakdown("singular basis during refactorization")
    tableau[:m, :] = fresh


def _run_phase(
    tableau, basis, cost, struct, rhs_orig,
    pivot_tol, bland_after, degen, max_iterations, iterations, phase,
):
    """Drive one simplex phase in refactorization chunks.

    A terminal verdict is trusted only when a freshly rebuilt tableau
    reproduces it without further pivots; anything reached mid-chunk gets
    re-checked after a rebuild.  If a chunk walks the basis into dependence
    (refactorization finds B singular), the chunk is replayed from its
    snapshot at half the cadence.
    """
    m = basis.shape[0]
    confirmed = None
    chunk = REFACTOR_EVERY
    while True:
        budget = max_iterations - iterations
        if budget <= 0:
            raise IterationLimit(
                f"{phase}: pivot budget exhausted after {iterations} pivots"
            )
        saved_rows = tableau[:m].copy()
        saved_basis = basis.copy()
        saved_degen = degen
        status, pivots, degen = _kernels.simplex_run(
            tableau, basis, cost, pivot_tol, COST_TOL, bland_after, degen,
            min(chunk, budget),
        )
        iterations += pivots
        try:
            _refactorize(tableau, basis, struct, rhs_orig)
        except NumericalBreakdown:
            if chunk <= 8:
                raise
            tableau[:m] = saved_rows
            basis[:] = saved_basis
            degen = saved_degen
            iterations -= pivots
            chunk //= 2
            confirmed = None
            continue
        if status == _kernels.STATUS_ITERATION_LIMIT:
            # Chunk exhausted; continue from the re-anchored tableau.
            confirmed = None
            continue
        if confirmed == status and pivots == 0:
            if status == _kernels.STATUS_BREAKDOWN:
                raise NumericalBreakdown(
                    f"{phase}: no pivot above {PIVOT_TOL} in the entering column"
                )
            return status, iterations, degen
        confirmed = status


def _purge_artificials(tableau, basis, art_start, pivot_tol):
    """Drive basic artificials out of the basis; drop rows proven redundant,
    then drop the artificial columns entirely.  Returns the kept row mask so
    the caller can slice its pristine copy of the constraint data the same
    way."""
    m = basis.shape[0]
    kept = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] < art_start:
            continue
        row = np.abs(tableau[i, :art_start])
        row[basis[basis < art_start]] = 0.0
        j = int(np.argmax(row))
        if row[j] <= pivot_tol:
            kept[i] = False
            continue
        _py_pivot(tableau, i, j)
        basis[i] = j
    if not kept.all():
        tableau = np.delete(tableau, np.nonzero(~kept)[0], axis=0)
        basis = basis[kept]
    rhs = tableau[:, -1:]
    tableau = np.ascontiguousarray(np.hstack([tableau[:, :art_start], rhs]))
    return tableau, basis, kept
