# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  slow.py is the reference implementation; the simplex
pivot arithmetic here performs the same IEEE operations in the same order
(the build passes -ffp-contract=off to keep it that way)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, cos, erfc, exp, sqrt

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITERATION_LIMIT = 2
STATUS_BREAKDOWN = 3

cdef double _TWO_PI = 6.283185307179586476925287
cdef double _DEGENERATE_EPS = 1e-12
# Objective-row rebuild cadence; must match slow.py.
cdef long _REFRESH_EVERY = 64
# Ratio-test relaxation (Harris); must match slow.py.
cdef double _HARRIS_TOL = 1e-9


cdef void _refresh_objective(double[:, ::1] tableau, cnp.int64_t[::1] basis,
                             const double[::1] cost) noexcept:
    cdef Py_ssize_t m = tableau.shape[0] - 1
    cdef Py_ssize_t k = tableau.shape[1]
    cdef Py_ssize_t r, c
    cdef double f
    for c in range(k - 1):
        tableau[m, c] = cost[c]
    tableau[m, k - 1] = 0.0
    for r in range(m):
        f = cost[basis[r]]
        if f != 0.0:
            for c in range(k):
                tableau[m, c] = tableau[m, c] - f * tableau[r, c]


def simplex_run(double[:, ::1] tableau, cnp.int64_t[::1] basis,
                const double[::1] cost,
                double pivot_tol, double cost_tol, long bland_after,
                long degenerate_seen, long max_pivots):
    cdef Py_ssize_t m = tableau.shape[0] - 1
    cdef Py_ssize_t k = tableau.shape[1]
    cdef Py_ssize_t rhs = k - 1
    cdef long pivots = 0, degen = degenerate_seen
    cdef long since_refresh = 0
    cdef Py_ssize_t i, j, r, c
    cdef double red_best, val, piv, f, ratio, best, vmin
    cdef bint any_positive, found, fresh

    _refresh_objective(tableau, basis, cost)
    fresh = True
    cdef cnp.int64_t best_label

    while True:
        # entering column
        if degen < bland_after:
            j = 0
            red_best = tableau[m, 0]
            for c in range(1, rhs):
                val = tableau[m, c]
                if val < red_best:
                    red_best = val
                    j = c
            if red_best >= -cost_tol:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                return STATUS_OPTIMAL, pivots, degen
        else:
            found = False
            for c in range(rhs):
                if tableau[m, c] < -cost_tol:
                    j = c
                    found = True
                    break
            if not found:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                return STATUS_OPTIMAL, pivots, degen
        if pivots >= max_pivots:
            return STATUS_ITERATION_LIMIT, pivots, degen

        # leaving row over clamped basic values (values driven slightly
        # negative by roundoff count as zero so the step never goes negative)
        any_positive = False
        if degen < bland_after:
            # Two-pass Harris test: every row within _HARRIS_TOL of the
            # tightest ratio is eligible, and the largest pivot element among
            # them wins (dividing a row by near-noise wrecks the tableau).
            best = INFINITY
            for r in range(m):
                val = tableau[r, j]
                if val > pivot_tol:
                    piv = tableau[r, rhs]
                    if piv <= 0.0:
                        piv = 0.0
                    ratio = (piv + _HARRIS_TOL) / val
                    if ratio < best:
                        best = ratio
                elif val > 0.0:
                    any_positive = True
            if best == INFINITY:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                if any_positive:
                    return STATUS_BREAKDOWN, pivots, degen
                return STATUS_UNBOUNDED, pivots, degen
            i = -1
            vmin = 0.0
            best_label = 0
            for r in range(m):
                val = tableau[r, j]
                if val > pivot_tol:
                    piv = tableau[r, rhs]
                    if piv <= 0.0:
                        piv = 0.0
                    if piv / val <= best:
                        if val > vmin or (val == vmin and basis[r] < best_label):
                            vmin = val
                            best_label = basis[r]
                            i = r
            piv = tableau[i, rhs]
            if piv <= 0.0:
                piv = 0.0
            ratio = piv / tableau[i, j]
        else:
            # Bland mode keeps the strict textbook test for its termination
            # guarantee: exact minimum ratio, smallest basic label on ties.
            best = INFINITY
            for r in range(m):
                val = tableau[r, j]
                if val > pivot_tol:
                    piv = tableau[r, rhs]
                    if piv <= 0.0:
                        piv = 0.0
                    ratio = piv / val
                    if ratio < best:
                        best = ratio
                elif val > 0.0:
                    any_positive = True
            if best == INFINITY:
                if not fresh:
                    _refresh_objective(tableau, basis, cost)
                    fresh = True
                    continue
                if any_positive:
                    return STATUS_BREAKDOWN, pivots, degen
                return STATUS_UNBOUNDED, pivots, degen
            i = -1
            best_label = 0
            for r in range(m):
                val = tableau[r, j]
                if val > pivot_tol:
                    piv = tableau[r, rhs]
                    if piv <= 0.0:
                        piv = 0.0
                    if piv / val == best:
                        if i < 0 or basis[r] < best_label:
                            i = r
                            best_label = basis[r]
            ratio = best
        if ratio <= _DEGENERATE_EPS:
            degen += 1

        # pivot on (i, j)
        piv = tableau[i, j]
        for c in range(k):
            tableau[i, c] /= piv
        tableau[i, j] = 1.0
        for r in range(m + 1):
            if r == i:
                continue
            f = tableau[r, j]
            if f != 0.0:
                for c in range(k):
                    tableau[r, c] = tableau[r, c] - f * tableau[i, c]
            tableau[r, j] = 0.0
        tableau[i, j] = 1.0
        basis[i] = j
        pivots += 1
        fresh = False
        since_refresh += 1
        if since_refresh >= _REFRESH_EVERY:
            _refresh_objective(tableau, basis, cost)
            fresh = True
            since_refresh = 0


def gk_panel_sums(const double[::1] b, const double[::1] phi, double v,
                  const double[::1] centers, const double[::1] halfwidths,
                  const double[::1] nodes, const double[::1] weights_hi,
                  const double[::1] weights_lo):
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t nk = nodes.shape[0]
    cdef cnp.ndarray hi_arr = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray lo_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] hi = hi_arr
    cdef double[::1] lo = lo_arr
    cdef double sqrt_v = sqrt(v)
    cdef double norm = 1.0 / (2.0 * sqrt(3.141592653589793238462643 * v))
    cdef Py_ssize_t i, q
    cdef double bi, b2, base, theta, t, h, acc_hi, acc_lo
    for i in range(n):
        bi = b[i]
        b2 = bi * bi
        base = exp(-b2 / v) / _TWO_PI
        acc_hi = 0.0
        acc_lo = 0.0
        for q in range(nk):
            theta = centers[i] + halfwidths[i] * nodes[q]
            t = bi * cos(theta - phi[i])
            h = base + t * norm * erfc(-t / sqrt_v) * exp((t * t - b2) / v)
            acc_hi += h * weights_hi[q]
            acc_lo += h * weights_lo[q]
        hi[i] = acc_hi * halfwidths[i]
        lo[i] = acc_lo * halfwidths[i]
    return hi_arr, lo_arr


def pairwise_l1_min(const double[:, ::1] a, const double[:, ::1] b):
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("pairwise_l1_min needs nonempty inputs")
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], ny = a.shape[1]
    cdef double best = INFINITY
    cdef double acc, d
    cdef Py_ssize_t i, j, y
    for i in range(na):
        for j in range(nb):
            acc = 0.0
            for y in range(ny):
                d = a[i, y] - b[j, y]
                acc += d if d >= 0.0 else -d
                if acc >= best:
                    break
            if acc < best:
                best = acc
    return best
