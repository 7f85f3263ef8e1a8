"""Monte-Carlo scans over random channels: how often is a random AVC
epsilon-symmetrizable, as a function of the jammer alphabet size?

Every sample gets its own counter-based RNG substream derived from
(seed, index), and every scan cell gets its own seed derived from
(config seed, cell index), so results do not depend on execution order or
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .avc import Avc, validate_avc
from .errors import AlphabetTooSmall
from .symmetrize import DECISION_SLACK, f_value

CSV_HEADER = "s,epsilon,fraction,mean_f,samples,seed"


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent Philox stream number `index` under the given seed."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,)))
    )


def cell_seed(seed: int, cell_index: int) -> int:
    """Per-cell seed derived from the scan seed; stable across worker counts."""
    ss = np.random.SeedSequence(seed, spawn_key=(cell_index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_avc(x_size: int, s_size: int, y_size: int, rng: np.random.Generator) -> Avc:
    """Draw each row W(.|x,s) uniformly from the Y-simplex (flat Dirichlet,
    realized as normalized exponentials)."""
    g = rng.standard_exponential((x_size, s_size, y_size))
    w = g / g.sum(axis=2, keepdims=True)
    return validate_avc(w, x_size, s_size, y_size)


def dof_threshold(x_size: int, y_size: int) -> int:
    """Smallest jammer alphabet size not ruled out by the degrees-of-freedom
    count: the least S with S - 1 >= (X-1) Y / 2."""
    if x_size < 2:
        raise AlphabetTooSmall("threshold needs at least two sender symbols")
    return ((x_size - 1) * y_size + 1) // 2 + 1


@dataclass(frozen=True)
class ScanConfig:
    x_size: int
    y_size: int
    s_values: tuple
    eps_values: tuple
    samples_per_cell: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "s_values", tuple(int(s) for s in self.s_values))
        object.__setattr__(self, "eps_values", tuple(float(e) for e in self.eps_values))
        if self.x_size < 2 or self.y_size < 2 or any(s < 2 for s in self.s_values):
            raise AlphabetTooSmall("scan sizes must all be at least 2")
        if self.samples_per_cell < 1:
            raise ValueError("samples_per_cell must be at least 1")
        if not self.s_values or not self.eps_values:
            raise ValueError("s_values and eps_values must be nonempty")
        if any(e <= 0.0 for e in self.eps_values):
            raise ValueError("eps_values must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class ScanCell:
    s: int
    epsilon: float
    fraction_symmetrizable: float
    samples: int
    mean_f: float
    seed: int

    def standard_error(self) -> float:
        """Binomial standard error of the symmetrizable fraction."""
        p = self.fraction_symmetrizable
        return math.sqrt(p * (1.0 - p) / self.samples)


def estimate_psym(
    x_size: int, y_size: int, s_size: int, epsilon: float, samples: int, seed: int
) -> ScanCell:
    """Fraction of `samples` random channels with F <= epsilon, plus mean F."""
    hits = 0
    total = 0.0
    for index in range(samples):
        avc = sample_avc(x_size, s_size, y_size, substream(seed, index))
        f = f_value(avc).f_value
        total += f
        if f <= epsilon + DECISION_SLACK:
            hits += 1
    return ScanCell(
        s=s_size,
        epsilon=float(epsilon),
        fraction_symmetrizable=hits / samples,
        samples=samples,
        mean_f=total / samples,
        seed=seed,
    )


def _cell_worker(args) -> ScanCell:
    return estimate_psym(*args)


def psym_surface(config: ScanConfig, workers: int = 1) -> list:
    """One ScanCell per (s, epsilon) pair, in s-major order."""
    jobs = []
    for s in config.s_values:
        for eps in config.eps_values:
            idx = len(jobs)
            jobs.append(
                (
                    config.x_size,
                    config.y_size,
                    s,
                    eps,
                    config.samples_per_cell,
                    cell_seed(config.seed, idx),
                )
            )
    if workers <= 1:
        return [_cell_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_cell_worker, jobs, chunksize=1))


def write_psym_csv(cells, dest) -> None:
    """CSV with the fixed header; floats use repr so round-trips are exact."""
    if hasattr(dest, "write"):
        _write_cells(cells, dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_cells(cells, fh)


def _write_cells(cells, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for c in cells:
        fh.write(
            f"{c.s},{c.epsilon!r},{c.fraction_symmetrizable!r},"
            f"{c.mean_f!r},{c.samples},{c.seed}\n"
        )
