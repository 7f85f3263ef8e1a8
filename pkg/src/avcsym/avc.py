"""Arbitrarily varying channel model: validation, defect evaluation, JSON I/O.

An AVC is a stochastic tensor w[x][s][y] = W(y | x, s): the probability of
output y when the sender transmits x and the jammer selects state s.  A jammer
strategy is a stochastic matrix u[x][s] = U(s | x): the probability that the
jammer plays s when it tries to impersonate sender symbol x.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetTooSmall,
    DimensionMismatch,
    NegativeEntry,
    NonPositivePower,
    NormalizationFailure,
    RowSumViolation,
    ShapeMismatch,
)

ROW_SUM_TOL = 1e-9


def _frozen_array(a, dtype=np.float64) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Avc:
    """A finite AVC.  Construct through validate_avc to enforce invariants."""

    x_size: int
    s_size: int
    y_size: int
    w: np.ndarray  # shape (x_size, s_size, y_size)

    def __post_init__(self):
        object.__setattr__(self, "w", _frozen_array(self.w))
        if self.w.shape != (self.x_size, self.s_size, self.y_size):
            raise ShapeMismatch(
                f"w has shape {self.w.shape}, declared "
                f"({self.x_size}, {self.s_size}, {self.y_size})"
            )

    def row(self, x: int, s: int) -> np.ndarray:
        return self.w[x, s]


def validate_avc(raw, x_size: int, s_size: int, y_size: int, *, row_tol: float = ROW_SUM_TOL) -> Avc:
    """Check shape, nonnegativity and row normalization; never renormalizes.

    row_tol widens the row-sum tolerance for tensors produced by quadrature.
    """
    if min(x_size, s_size, y_size) < 1:
        raise ShapeMismatch(f"sizes must be positive, got ({x_size}, {s_size}, {y_size})")
    w = np.asarray(raw, dtype=np.float64)
    if w.shape != (x_size, s_size, y_size):
        raise ShapeMismatch(f"expected shape ({x_size}, {s_size}, {y_size}), got {w.shape}")
    if np.any(w < 0.0):
        x, s, y = np.argwhere(w < 0.0)[0]
        raise NegativeEntry(int(x), int(s), int(y), float(w[x, s, y]))
    sums = w.sum(axis=2)
    bad = np.abs(sums - 1.0) > row_tol
    if bad.any():
        x, s = np.argwhere(bad)[0]
        raise RowSumViolation(int(x), int(s), float(sums[x, s]))
    return Avc(x_size, s_size, y_size, w)


@dataclass(frozen=True)
class JammerStrategy:
    """Stochastic matrix u[x][s] = U(s | x)."""

    x_size: int
    s_size: int
    u: np.ndarray  # shape (x_size, s_size)

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen_array(self.u))
        if self.u.shape != (self.x_size, self.s_size):
            raise ShapeMismatch(
                f"u has shape {self.u.shape}, declared ({self.x_size}, {self.s_size})"
            )

    @classmethod
    def from_matrix(cls, u) -> "JammerStrategy":
        """Strictly validated constructor (tolerance ROW_SUM_TOL)."""
        u = np.asarray(u, dtype=np.float64)
        if u.ndim != 2:
            raise ShapeMismatch(f"strategy matrix must be 2-D, got shape {u.shape}")
        if np.any(u < 0.0):
            x, s = np.argwhere(u < 0.0)[0]
            raise NegativeEntry(int(x), int(s), 0, float(u[x, s]))
        sums = u.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_SUM_TOL
        if bad.any():
            x = int(np.argwhere(bad)[0][0])
            raise RowSumViolation(x, 0, float(sums[x]))
        return cls(u.shape[0], u.shape[1], u)

    @classmethod
    def from_lp_point(cls, u, *, budget: float = 1e-7) -> "JammerStrategy":
        """Sanitize a strategy read off an LP solution.

        Solver output carries feasibility-tolerance noise: entries may dip a
        hair below zero and rows may miss 1 by the solver tolerance.  Clip and
        renormalize as long as the total adjustment stays within `budget`.
        """
        u = np.asarray(u, dtype=np.float64)
        if u.ndim != 2:
            raise ShapeMismatch(f"strategy matrix must be 2-D, got shape {u.shape}")
        if float(u.min(initial=0.0)) < -budget:
            x, s = np.argwhere(u < -budget)[0]
            raise NegativeEntry(int(x), int(s), 0, float(u[x, s]))
        clipped = np.maximum(u, 0.0)
        sums = clipped.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > budget):
            x = int(np.argmax(np.abs(sums - 1.0)))
            raise NormalizationFailure(
                f"strategy row {x} has mass {sums[x]!r}, beyond budget {budget}"
            )
        return cls(u.shape[0], u.shape[1], clipped / sums[:, None])

    @classmethod
    def identity(cls, size: int) -> "JammerStrategy":
        return cls(size, size, np.eye(size))

    @classmethod
    def uniform(cls, x_size: int, s_size: int) -> "JammerStrategy":
        return cls(x_size, s_size, np.full((x_size, s_size), 1.0 / s_size))


@dataclass(frozen=True)
class DefectReport:
    """L1 symmetrization defects for each unordered sender pair."""

    per_pair: dict  # (x, xhat) with x < xhat -> defect in [0, 2]
    max_defect: float


def symmetrization_defect(avc: Avc, strategy: JammerStrategy) -> DefectReport:
    """Evaluate, for fixed U, the worst-pair L1 mismatch between the channel
    symmetrized from both ends:

        defect(x, xhat) = sum_y | sum_s W(y|x,s) U(s|xhat) - sum_s W(y|xhat,s) U(s|x) |
    """
    if avc.x_size != strategy.x_size or avc.s_size != strategy.s_size:
        raise DimensionMismatch(
            f"channel is ({avc.x_size}, {avc.s_size}, ...), "
            f"strategy is ({strategy.x_size}, {strategy.s_size})"
        )
    if avc.x_size < 2:
        raise AlphabetTooSmall("symmetrizability needs at least two sender symbols")
    # mixed[x, h, y] = sum_s W(y|x,s) U(s|h)
    mixed = np.einsum("xsy,hs->xhy", avc.w, strategy.u)
    diff = np.abs(mixed - mixed.transpose(1, 0, 2)).sum(axis=2)
    per_pair = {
        (x, h): float(diff[x, h])
        for x in range(avc.x_size)
        for h in range(x + 1, avc.x_size)
    }
    return DefectReport(per_pair=per_pair, max_defect=max(per_pair.values()))


def gaussian_avc_capacity(e: float, p: float) -> float:
    """Deterministic-code capacity of the power-constrained Gaussian AVC:
    0.5 * log2(1 + E/P) when the jammer is strictly weaker (P < E), else 0.
    """
    if e <= 0.0 or p <= 0.0:
        raise NonPositivePower(f"powers must be positive, got E={e}, P={p}")
    if p < e:
        return 0.5 * math.log2(1.0 + e / p)
    return 0.0


def avc_to_json_dict(avc: Avc) -> dict:
    return {"x": avc.x_size, "s": avc.s_size, "y": avc.y_size, "w": avc.w.tolist()}


def avc_from_json_dict(data: dict) -> Avc:
    try:
        x, s, y, w = int(data["x"]), int(data["s"]), int(data["y"]), data["w"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed AVC JSON: {exc}") from exc
    return validate_avc(np.asarray(w, dtype=np.float64), x, s, y)


def save_avc(avc: Avc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(avc_to_json_dict(avc), fh)
        fh.write("\n")


def load_avc(path) -> Avc:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ShapeMismatch(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ShapeMismatch("AVC JSON must be an object")
    return avc_from_json_dict(data)
