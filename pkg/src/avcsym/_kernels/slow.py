"""Pure-numpy implementations of the hot kernels.

The native module (_native.pyx) mirrors these routines operation for
operation; the simplex pivot arithmetic is arranged so both backends perform
the identical sequence of IEEE roundings (the extension is compiled with
-ffp-contract=off for that reason).
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITERATION_LIMIT = 2
STATUS_BREAKDOWN = 3

_TWO_PI = 2.0 * np.pi
_DEGENERATE_EPS = 1e-12
# Objective-row rebuild cadence; must match the native kernel.
_REFRESH_EVERY = 64
# Ratio-test relaxation (Harris): rows this close to the minimum ratio are
# eligible, and the largest pivot element among them wins.
_HARRIS_TOL = 1e-9


def _refresh_objective(tableau, basis, cost):
    """Rebuild the reduced-cost row from the original costs and current rows.

    Long runs of degenerate pivots let roundoff accumulate in the objective
    row faster than in the constraint rows; pricing it out afresh keeps the
    entering choices and the termination tests honest.  Row order is fixed so
    both backends produce identical bits.
    """
    m = tableau.shape[0] - 1
    tableau[m, :-1] = cost
    tableau[m, -1] = 0.0
    for r in range(m):
        f = cost[basis[r]]
        if f != 0.0:
            tableau[m] -= f * tableau[r]


def simplex_run(tableau, basis, cost, pivot_tol, cost_tol, bland_after, degenerate_seen, max_pivots):
    """Pivot a feasible dense tableau to optimality.

    tableau: (m+1, k) float64, objective row last, RHS column last.
    basis:   (m,) int64, basis[i] = column basic in row i.
    cost:    (k-1,) float64 original phase costs; the objective row is priced
             out on entry and rebuilt every _REFRESH_EVERY pivots, and any
             terminal verdict is accepted only off a freshly rebuilt row.
    Entering rule: most-negative reduced cost, lowest index on ties; switches
    to Bland's rule once `degenerate_seen` reaches `bland_after`.  Leaving
    rule: minimum ratio, ties broken by smallest basic column index.

    Returns (status, pivots_done, degenerate_seen).
    """
    m = tableau.shape[0] - 1
    pivots = 0
    degen = int(degenerate_seen)
    _refresh_objective(tableau, basis, cost)
    fresh = True
    since_refresh = 0
    while True:
        red = tableau[m, :-1]
        if degen < bland_after:
            j = int(np.argmin(red))
            if red[j] >= -cost_tol:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                return STATUS_OPTIMAL, pivots, degen
        else:
            candidates = np.nonzero(red < -cost_tol)[0]
            if candidates.size == 0:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                return STATUS_OPTIMAL, pivots, degen
            j = int(candidates[0])
        if pivots >= max_pivots:
            return STATUS_ITERATION_LIMIT, pivots, degen
        col = tableau[:m, j]
        admissible = col > pivot_tol
        if not admissible.any():
            if not fresh:
                _refresh_objective(tableau, basis, cost)
                fresh = True
                continue
            if (col > 0.0).any():
                return STATUS_BREAKDOWN, pivots, degen
            return STATUS_UNBOUNDED, pivots, degen
        # Basic values driven slightly negative by roundoff count as zero so
        # the step length never goes negative.
        rhs_vals = tableau[:m, -1]
        clamped = np.where(rhs_vals > 0.0, rhs_vals, 0.0)
        ratios = np.full(m, np.inf)
        np.divide(clamped, col, out=ratios, where=admissible)
        if degen < bland_after:
            # Two-pass Harris test: every row within _HARRIS_TOL of the
            # tightest ratio is eligible, and the largest pivot element among
            # them wins (dividing a row by near-noise wrecks the tableau).
            relaxed = np.full(m, np.inf)
            np.divide(clamped + _HARRIS_TOL, col, out=relaxed, where=admissible)
            theta_max = relaxed.min()
            cand = np.nonzero(admissible & (ratios <= theta_max))[0]
            cmax = col[cand].max()
            cand = cand[col[cand] == cmax]
            i = int(cand[np.argmin(basis[cand])]) if cand.size > 1 else int(cand[0])
            step = ratios[i]
        else:
            # Bland mode keeps the strict textbook test for its termination
            # guarantee: exact minimum ratio, smallest basic label on ties.
            step = ratios.min()
            ties = np.nonzero(ratios == step)[0]
            i = int(ties[np.argmin(basis[ties])]) if ties.size > 1 else int(ties[0])
        if step <= _DEGENERATE_EPS:
            degen += 1
        _pivot(tableau, i, j)
        basis[i] = j
        pivots += 1
        fresh = False
        since_refresh += 1
        if since_refresh >= _REFRESH_EVERY:
            _refresh_objective(tableau, basis, cost)
            fresh = True
            since_refresh = 0


def _pivot(tableau, i, j):
    """In-place pivot on (i, j); arithmetic order matches the native kernel."""
    row = tableau[i]
    row /= row[j]
    row[j] = 1.0
    col = tableau[:, j].copy()
    col[i] = 0.0
    tableau -= col[:, None] * row[None, :]
    tableau[:, j] = 0.0
    tableau[i, j] = 1.0


def gk_panel_sums(b, phi, v, centers, halfwidths, nodes, weights_hi, weights_lo):
    """Panel integrals of the angular heterodyne density.

    For each work item i, integrates
        h(theta) = exp(-b^2/V)/(2 pi)
                 + t/(2 sqrt(pi V)) * erfc(-t/sqrt(V)) * exp((t^2-b^2)/V),
        t = b * cos(theta - phi),
    over theta in [centers[i]-halfwidths[i], centers[i]+halfwidths[i]] with
    the high-order rule (weights_hi) and the embedded low-order rule
    (weights_lo, zero-padded to the same nodes).  Returns (hi, lo) arrays.
    """
    from scipy.special import erfc

    n = b.shape[0]
    hi = np.empty(n)
    lo = np.empty(n)
    sqrt_v = np.sqrt(v)
    norm = 1.0 / (2.0 * np.sqrt(np.pi * v))
    chunk = max(1, 2_000_000 // max(nodes.shape[0], 1))
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        bb = b[sl, None]
        theta = centers[sl, None] + halfwidths[sl, None] * nodes[None, :]
        t = bb * np.cos(theta - phi[sl, None])
        base = np.exp(-bb * bb / v) / _TWO_PI
        h = base + t * norm * erfc(-t / sqrt_v) * np.exp((t * t - bb * bb) / v)
        hi[sl] = (h @ weights_hi) * halfwidths[sl]
        lo[sl] = (h @ weights_lo) * halfwidths[sl]
    return hi, lo


def pairwise_l1_min(a, b) -> float:
    """Minimum cityblock distance between any row of a and any row of b."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("pairwise_l1_min needs nonempty inputs")
    best = np.inf
    rows = max(1, 4_000_000 // b.shape[0])
    for start in range(0, a.shape[0], rows):
        d = cdist(a[start : start + rows], b, metric="cityblock")
        best = min(best, float(d.min()))
    return best
