"""Finite approximation of a continuous, energy-constrained jammer.

The jammer's input disk |s|^2 <= E_S is tiled by half-open square boxes of
side delta.  A continuous strategy density is replaced by its box masses; the
channel is replaced by its box averages.  Shrinking delta makes the defect of
the finite channel converge, which is the computable face of the continuity
argument for the continuous model.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._quad import adaptive_intervals
from .avc import Avc, JammerStrategy, validate_avc
from .bosonic import BosonicParams, _arc_probabilities, _wedge_edges, psk_constellation
from .errors import NormalizationFailure, PitchTooLarge, QuadratureFailure
from .symmetrize import DEFAULT_EPSILON, f_value, runtime_estimate

CONVERGENCE_CSV_HEADER = "delta,s_delta,lp_n,lp_m,f_value,build_seconds,solve_seconds"


@dataclass(frozen=True)
class GridSpec:
    energy_limit: float  # E_S
    pitch: float  # delta

    def __post_init__(self):
        if self.energy_limit <= 0.0:
            raise ValueError(f"energy_limit must be positive, got {self.energy_limit}")
        if self.pitch <= 0.0:
            raise ValueError(f"pitch must be positive, got {self.pitch}")
        if self.pitch > 2.0 * math.sqrt(self.energy_limit):
            raise PitchTooLarge(
                f"pitch {self.pitch} exceeds the disk diameter "
                f"{2.0 * math.sqrt(self.energy_limit)}"
            )


@dataclass(frozen=True)
class JammerGrid:
    """Retained boxes of the tiling plus their (disk-projected) centers."""

    centers: np.ndarray  # (count,) complex
    corners: np.ndarray  # (count, 2) lower-left corner of each box
    pitch: float
    energy_limit: float
    index_map: np.ndarray  # (boxes_per_axis, boxes_per_axis) -> box id or -1

    @property
    def count(self) -> int:
        return self.centers.shape[0]

    def box_index(self, points) -> np.ndarray:
        """Id of the half-open box containing each point, -1 if none.

        Points exactly on the bounding square's upper edges fall outside the
        half-open tiling (a measure-zero set)."""
        points = np.asarray(points, dtype=np.complex128)
        r = math.sqrt(self.energy_limit)
        n = self.index_map.shape[0]
        kx = np.floor((points.real + r) / self.pitch).astype(np.int64)
        ky = np.floor((points.imag + r) / self.pitch).astype(np.int64)
        valid = (kx >= 0) & (kx < n) & (ky >= 0) & (ky < n)
        out = np.full(points.shape, -1, dtype=np.int64)
        out[valid] = self.index_map[kx[valid], ky[valid]]
        return out


def make_grid(spec: GridSpec) -> JammerGrid:
    """Tile [-R, R]^2 with side-`pitch` half-open boxes anchored at -R and
    keep every box whose closure meets the closed disk.  Centers outside the
    disk are radially projected onto it."""
    r = math.sqrt(spec.energy_limit)
    delta = spec.pitch
    n = max(1, math.ceil(2.0 * r / delta - 1e-12))
    lows = -r + delta * np.arange(n)
    ix, iy = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), indexing="ij"))
    lo_x, lo_y = lows[ix], lows[iy]
    near_x = np.clip(0.0, lo_x, lo_x + delta)
    near_y = np.clip(0.0, lo_y, lo_y + delta)
    keep = near_x**2 + near_y**2 <= spec.energy_limit
    ix, iy, lo_x, lo_y = ix[keep], iy[keep], lo_x[keep], lo_y[keep]

    centers = (lo_x + delta / 2.0) + 1j * (lo_y + delta / 2.0)
    radius = np.abs(centers)
    outside = radius > r
    if outside.any():
        centers[outside] *= r / radius[outside]
        still = np.abs(centers) ** 2 > spec.energy_limit
        centers[still] *= 1.0 - 1e-14

    index_map = np.full((n, n), -1, dtype=np.int64)
    index_map[ix, iy] = np.arange(ix.shape[0])
    return JammerGrid(
        centers=centers,
        corners=np.column_stack([lo_x, lo_y]),
        pitch=delta,
        energy_limit=spec.energy_limit,
        index_map=index_map,
    )


def uniform_disk_density(energy_limit: float):
    """Constant density 1/(pi E_S) on the disk, zero outside."""
    value = 1.0 / (math.pi * energy_limit)

    def density(x: int, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.complex128)
        return np.where(np.abs(s) ** 2 <= energy_limit, value, 0.0)

    return density


def gaussian_disk_density(energy_limit: float, width: float = None):
    """Gaussian exp(-|s|^2 / width) truncated to the disk, normalized in
    closed form.  width defaults to E_S / 2."""
    w = energy_limit / 2.0 if width is None else width
    if w <= 0.0:
        raise ValueError(f"width must be positive, got {w}")
    norm = math.pi * w * (1.0 - math.exp(-energy_limit / w))

    def density(x: int, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.complex128)
        r2 = np.abs(s) ** 2
        return np.where(r2 <= energy_limit, np.exp(-r2 / w) / norm, 0.0)

    return density


def discretize_strategy(
    density, grid: JammerGrid, x_size: int = 1, *, tol: float = 1e-7
) -> JammerStrategy:
    """Box masses of a continuous strategy density.

    density(x, s) must be vectorized over complex s, nonnegative, vanish
    outside the disk, and integrate to 1 per x.  Each box mass is computed
    over box-intersect-disk (the density is zero on the remainder), with the
    inner integral's bounds clipped to the disk chord so the integrand stays
    smooth.  Raises NormalizationFailure if a row misses mass 1 by > 1e-6.
    """
    r = math.sqrt(grid.energy_limit)
    delta = grid.pitch
    count = grid.count
    xlo = np.maximum(grid.corners[:, 0], -r)
    xhi = np.minimum(grid.corners[:, 0] + delta, r)
    widths = np.maximum(xhi - xlo, 1e-300)
    box_tol = tol / max(count, 1) / 2.0
    inner_tol = box_tol / (2.0 * widths)

    rows = np.empty((x_size, count))
    for x in range(x_size):

        def outer_integrand(which_box, xv):
            chord = np.sqrt(np.maximum(grid.energy_limit - xv**2, 0.0))
            ylo = np.maximum(grid.corners[which_box, 1], -chord)
            yhi = np.minimum(grid.corners[which_box, 1] + delta, chord)
            yhi = np.maximum(yhi, ylo)  # empty slice integrates to zero

            def inner_integrand(which_pt, yv):
                return np.asarray(density(x, xv[which_pt] + 1j * yv), dtype=np.float64)

            return adaptive_intervals(
                inner_integrand, ylo, yhi, inner_tol[which_box]
            )

        rows[x] = adaptive_intervals(outer_integrand, xlo, xhi, box_tol)

    sums = rows.sum(axis=1)
    off = np.abs(sums - 1.0)
    if np.any(off > 1e-6):
        bad = int(np.argmax(off))
        raise NormalizationFailure(
            f"density row {bad} integrates to {sums[bad]!r}; it must vanish "
            "outside the disk and integrate to 1"
        )
    return JammerStrategy.from_lp_point(rows, budget=2e-6)


@dataclass(frozen=True)
class DiscretizedAvc:
    avc: Avc
    grid: JammerGrid
    source_params: BosonicParams


# Tensorized Gauss-Legendre rules for box averages: a 3x3 estimate checked
# against a 5x5 one, with quadrant subdivision where they disagree.
def _tensor_rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    ox, oy = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights) / 4.0  # box average: weights sum to 1
    return ox.ravel(), oy.ravel(), w.ravel()

_OX3, _OY3, _W3 = _tensor_rule(3)
_OX5, _OY5, _W5 = _tensor_rule(5)
_OX_ALL = np.concatenate([_OX3, _OX5])
_OY_ALL = np.concatenate([_OY3, _OY5])


def average_channel(params: BosonicParams, grid: JammerGrid) -> DiscretizedAvc:
    """The discretized AVC: entry [x][i][y] is the box-i average of the
    continuous wedge-y probability against sender symbol x."""
    m = params.m
    alphas = psk_constellation(m, params.energy)
    root_t = math.sqrt(params.eta)
    root_r = math.sqrt(1.0 - params.eta)
    noise_out = params.eta * params.noise_sender + (1.0 - params.eta) * params.noise_jammer
    edges = _wedge_edges(m)
    arc_tol = params.quad_tol / 8.0
    accept_tol = params.quad_tol / 2.0

    count = grid.count
    half0 = grid.pitch / 2.0
    x_idx = np.repeat(np.arange(m), count)
    box_idx = np.tile(np.arange(count), m)
    ccx = np.tile(grid.corners[:, 0] + half0, m)
    ccy = np.tile(grid.corners[:, 1] + half0, m)
    halves = np.full(x_idx.shape[0], half0)
    weights = np.ones(x_idx.shape[0])

    out = np.zeros((m, count, m))
    for _ in range(24):
        if x_idx.size == 0:
            w = np.maximum(out, 0.0)
            return DiscretizedAvc(
                avc=validate_avc(w, m, count, m, row_tol=max(1e-9, m * params.quad_tol)),
                grid=grid,
                source_params=params,
            )
        sx = ccx[:, None] + halves[:, None] * _OX_ALL[None, :]
        sy = ccy[:, None] + halves[:, None] * _OY_ALL[None, :]
        disp = root_t * alphas[x_idx, None] + root_r * (sx + 1j * sy)
        probs = _arc_probabilities(disp.ravel(), noise_out, edges, arc_tol).reshape(
            x_idx.shape[0], _OX_ALL.shape[0], m
        )
        avg3 = np.tensordot(probs[:, :9, :], _W3, axes=(1, 0))
        avg5 = np.tensordot(probs[:, 9:, :], _W5, axes=(1, 0))
        err = np.abs(avg5 - avg3).max(axis=1)
        done = err <= accept_tol
        np.add.at(out, (x_idx[done], box_idx[done]), weights[done, None] * avg5[done])
        keep = ~done
        x_idx, box_idx, ccx, ccy, halves, weights = (
            a[keep] for a in (x_idx, box_idx, ccx, ccy, halves, weights)
        )
        if x_idx.size:
            quarter = halves / 2.0
            x_idx = np.tile(x_idx, 4)
            box_idx = np.tile(box_idx, 4)
            ccx = np.concatenate([ccx - quarter, ccx + quarter, ccx - quarter, ccx + quarter])
            ccy = np.concatenate([ccy - quarter, ccy - quarter, ccy + quarter, ccy + quarter])
            halves = np.tile(quarter, 4)
            weights = np.tile(weights / 4.0, 4)
    raise QuadratureFailure("box averages failed to converge after 24 subdivisions")


def midpoint_deviation(davc: DiscretizedAvc) -> float:
    """Max |box average - center evaluation|: the empirical modulus of
    continuity of the channel at the grid's resolution."""
    params = davc.source_params
    m = params.m
    alphas = psk_constellation(m, params.energy)
    root_t = math.sqrt(params.eta)
    root_r = math.sqrt(1.0 - params.eta)
    noise_out = params.eta * params.noise_sender + (1.0 - params.eta) * params.noise_jammer
    disp = root_t * alphas[:, None] + root_r * davc.grid.centers[None, :]
    probs = _arc_probabilities(
        disp.ravel(), noise_out, _wedge_edges(m), params.quad_tol / 2.0
    ).reshape(m, davc.grid.count, m)
    return float(np.abs(davc.avc.w - probs).max())


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    s_delta: int
    lp_n: int
    lp_m: int
    f_value: float
    build_seconds: float
    solve_seconds: float


def _delta_worker(args) -> ConvergenceRow:
    params, energy_limit, delta = args
    t0 = time.perf_counter()
    grid = make_grid(GridSpec(energy_limit=energy_limit, pitch=delta))
    davc = average_channel(params, grid)
    t1 = time.perf_counter()
    res = f_value(davc.avc)
    t2 = time.perf_counter()
    est = runtime_estimate(davc.avc, DEFAULT_EPSILON)
    return ConvergenceRow(
        delta=delta,
        s_delta=grid.count,
        lp_n=est.n,
        lp_m=est.m,
        f_value=res.f_value,
        build_seconds=t1 - t0,
        solve_seconds=t2 - t1,
    )


def convergence_scan(
    params: BosonicParams, energy_limit: float, delta_values, workers: int = 1
) -> list:
    """F of the discretized channel across grid pitches (given decreasing)."""
    deltas = [float(d) for d in delta_values]
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError(f"delta values must be strictly decreasing, got {deltas}")
    jobs = [(params, energy_limit, d) for d in deltas]
    if workers <= 1:
        return [_delta_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_delta_worker, jobs, chunksize=1))


def write_convergence_csv(rows, dest) -> None:
    if hasattr(dest, "write"):
        _write_rows(rows, dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_rows(rows, fh)


def _write_rows(rows, fh) -> None:
    fh.write(CONVERGENCE_CSV_HEADER + "\n")
    for r in rows:
        fh.write(
            f"{r.delta!r},{r.s_delta},{r.lp_n},{r.lp_m},{r.f_value!r},"
            f"{r.build_seconds!r},{r.solve_seconds!r}\n"
        )
