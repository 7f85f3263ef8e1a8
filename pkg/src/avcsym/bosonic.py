"""Bosonic M-PSK jamming model.

Sender and jammer each displace a thermal state; a beam splitter of
transmittivity eta mixes them; the receiver heterodynes and decodes by
angular wedge (the ML regions for PSK under rotation-symmetric noise).

Everything reduces to Gaussian integrals.  The radial part of the wedge
integral is closed-form (erfc), leaving adaptive 1-D quadrature over the
angle; with V = N + 1, b = |alpha| and t = b cos(theta - arg alpha), the
angular density is

    h(theta) = exp(-b^2/V) / (2 pi)
             + t / (2 sqrt(pi V)) * erfc(-t / sqrt(V)) * exp((t^2 - b^2)/V).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from ._quad import GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS
from .avc import Avc, validate_avc
from .errors import BadConstellation, EtaOutOfRange, QuadratureFailure
from .symmetrize import f_value

DEFAULT_QUAD_TOL = 1e-9
ETA_CSV_HEADER = "eta,f_value,lp_iterations"


@dataclass(frozen=True)
class ThermalState:
    """Displaced thermal state: complex displacement, mean photon noise N."""

    displacement: complex
    noise: float

    def __post_init__(self):
        if self.noise < 0.0:
            raise ValueError(f"noise must be nonnegative, got {self.noise}")


@dataclass(frozen=True)
class BosonicParams:
    m: int
    energy: float
    noise_sender: float
    noise_jammer: float
    eta: float
    quad_tol: float = DEFAULT_QUAD_TOL

    def __post_init__(self):
        if self.m < 2:
            raise BadConstellation(f"need at least 2 constellation points, got {self.m}")
        if self.energy <= 0.0:
            raise BadConstellation(f"energy must be positive, got {self.energy}")
        if not 0.0 <= self.eta <= 1.0:
            raise EtaOutOfRange(f"eta must lie in [0, 1], got {self.eta}")
        if self.noise_sender < 0.0 or self.noise_jammer < 0.0:
            raise ValueError("thermal noise must be nonnegative")
        if self.quad_tol <= 0.0:
            raise ValueError(f"quad_tol must be positive, got {self.quad_tol}")


@dataclass(frozen=True)
class WedgeRegion:
    """Angular decoding region [theta_minus, theta_plus) of width 2 pi / M."""

    m_index: int
    theta_minus: float
    theta_plus: float

    def __post_init__(self):
        width = self.theta_plus - self.theta_minus
        if width <= 0.0:
            raise ValueError("theta_plus must exceed theta_minus")
        m_total = round(2.0 * math.pi / width)
        if m_total < 2 or abs(width * m_total - 2.0 * math.pi) > 1e-9:
            raise ValueError(f"width {width} does not evenly divide the circle")
        if not 0 <= self.m_index < m_total:
            raise ValueError(f"m_index {self.m_index} out of range for M={m_total}")

    @classmethod
    def for_message(cls, m_index: int, m_total: int) -> "WedgeRegion":
        if m_total < 2:
            raise BadConstellation(f"need at least 2 wedges, got {m_total}")
        if not 0 <= m_index < m_total:
            raise ValueError(f"m_index {m_index} out of range for M={m_total}")
        step = 2.0 * math.pi / m_total
        return cls(m_index, (m_index - 0.5) * step, (m_index + 0.5) * step)


def psk_constellation(m: int, energy: float) -> np.ndarray:
    """The M displacements sqrt(E) exp(2 pi i k / M), k = 0..M-1."""
    if m < 2:
        raise BadConstellation(f"need at least 2 constellation points, got {m}")
    if energy <= 0.0:
        raise BadConstellation(f"energy must be positive, got {energy}")
    return math.sqrt(energy) * np.exp(2j * math.pi * np.arange(m) / m)


def beamsplitter_output(sender: ThermalState, jammer: ThermalState, eta: float) -> ThermalState:
    """Mix sender and jammer states: displacements add with sqrt weights,
    thermal noises add linearly."""
    if not 0.0 <= eta <= 1.0:
        raise EtaOutOfRange(f"eta must lie in [0, 1], got {eta}")
    root_t, root_r = math.sqrt(eta), math.sqrt(1.0 - eta)
    return ThermalState(
        displacement=root_t * sender.displacement + root_r * jammer.displacement,
        noise=eta * sender.noise + (1.0 - eta) * jammer.noise,
    )


def heterodyne_density(state: ThermalState, point) -> np.ndarray:
    """Outcome density exp(-|point - alpha|^2 / (N+1)) / (pi (N+1))."""
    v = state.noise + 1.0
    point = np.asarray(point, dtype=np.complex128)
    return np.exp(-np.abs(point - state.displacement) ** 2 / v) / (math.pi * v)


def _arc_probabilities(
    displacements: np.ndarray,
    noise: float,
    edges: np.ndarray,
    per_arc_tol: float,
    *,
    max_rounds: int = 60,
) -> np.ndarray:
    """Integrate the angular density of each displacement over each arc.

    displacements: (E,) complex; edges: (A+1,) ascending angles.  Returns
    (E, A) probabilities, each within per_arc_tol absolute error.  Work is a
    flat panel list refined per (element, arc) where the estimate disagrees
    with the embedded lower-order rule.
    """
    d = np.asarray(displacements, dtype=np.complex128).ravel()
    b_all = np.abs(d)
    phi_all = np.angle(d)
    v = noise + 1.0
    n_elem = d.shape[0]
    n_arc = edges.shape[0] - 1
    out = np.zeros((n_elem, n_arc))

    arc_lo = edges[:-1]
    arc_width = np.diff(edges)
    elem = np.repeat(np.arange(n_elem), n_arc)
    arc = np.tile(np.arange(n_arc), n_elem)
    centers = (arc_lo + arc_width / 2.0)[arc]
    halves = (arc_width / 2.0)[arc]
    budgets = np.full(elem.shape[0], per_arc_tol)

    for _ in range(max_rounds):
        if elem.size == 0:
            return out
        hi, lo = _kernels.gk_panel_sums(
            np.ascontiguousarray(b_all[elem]),
            np.ascontiguousarray(phi_all[elem]),
            v,
            np.ascontiguousarray(centers),
            np.ascontiguousarray(halves),
            KRONROD_NODES,
            KRONROD_WEIGHTS,
            GAUSS_WEIGHTS,
        )
        done = np.abs(hi - lo) <= budgets
        np.add.at(out, (elem[done], arc[done]), hi[done])
        keep = ~done
        elem, arc, centers, halves, budgets = (
            a[keep] for a in (elem, arc, centers, halves, budgets)
        )
        if elem.size:
            elem = np.concatenate([elem, elem])
            arc = np.concatenate([arc, arc])
            centers = np.concatenate([centers - halves / 2.0, centers + halves / 2.0])
            halves = np.concatenate([halves / 2.0, halves / 2.0])
            budgets = np.concatenate([budgets / 2.0, budgets / 2.0])
    raise QuadratureFailure(
        f"{np.unique(elem).size} wedge integral(s) failed to converge "
        f"in {max_rounds} rounds"
    )


def wedge_probability(state: ThermalState, region: WedgeRegion, quad_tol: float) -> float:
    """Probability that heterodyne lands in the wedge."""
    if quad_tol <= 0.0:
        raise ValueError(f"quad_tol must be positive, got {quad_tol}")
    edges = np.array([region.theta_minus, region.theta_plus])
    p = _arc_probabilities(
        np.array([state.displacement]), state.noise, edges, quad_tol
    )[0, 0]
    return min(1.0, max(0.0, float(p)))


def wedge_distribution(state: ThermalState, m: int, quad_tol: float) -> np.ndarray:
    """All M wedge probabilities of one state (a distribution over messages)."""
    edges = _wedge_edges(m)
    p = _arc_probabilities(
        np.array([state.displacement]), state.noise, edges, quad_tol / 2.0
    )[0]
    return np.maximum(p, 0.0)


def _wedge_edges(m: int) -> np.ndarray:
    return 2.0 * math.pi * (np.arange(m + 1) - 0.5) / m


def build_mpsk_avc(params: BosonicParams) -> Avc:
    """The finite AVC with X = S = Y = M: sender and jammer both use the
    M-PSK constellation at the sender's energy, and the output alphabet is
    the wedge index."""
    m = params.m
    alphas = psk_constellation(m, params.energy)
    root_t = math.sqrt(params.eta)
    root_r = math.sqrt(1.0 - params.eta)
    noise_out = params.eta * params.noise_sender + (1.0 - params.eta) * params.noise_jammer
    d = root_t * alphas[:, None] + root_r * alphas[None, :]
    probs = _arc_probabilities(
        d.ravel(), noise_out, _wedge_edges(m), params.quad_tol / 2.0
    )
    w = np.maximum(probs.reshape(m, m, m), 0.0)
    return validate_avc(w, m, m, m, row_tol=max(1e-9, m * params.quad_tol))


@dataclass(frozen=True)
class EtaScanRow:
    eta: float
    f_value: float
    lp_iterations: int


def _eta_worker(args) -> EtaScanRow:
    params, eta = args
    res = f_value(build_mpsk_avc(replace(params, eta=eta)))
    return EtaScanRow(eta=eta, f_value=res.f_value, lp_iterations=res.lp_stats.iterations)


def eta_scan(params: BosonicParams, eta_values, workers: int = 1) -> list:
    """Defect of the M-PSK channel across transmittivities (params.eta is
    ignored; each row rebuilds the channel at its own eta)."""
    etas = [float(e) for e in eta_values]
    for e in etas:
        if not 0.0 <= e <= 1.0:
            raise EtaOutOfRange(f"eta must lie in [0, 1], got {e}")
    jobs = [(params, e) for e in etas]
    if workers <= 1:
        return [_eta_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_eta_worker, jobs, chunksize=1))


def write_eta_csv(rows, dest) -> None:
    if hasattr(dest, "write"):
        _write_eta(rows, dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_eta(rows, fh)


def _write_eta(rows, fh) -> None:
    fh.write(ETA_CSV_HEADER + "\n")
    for r in rows:
        fh.write(f"{r.eta!r},{r.f_value!r},{r.lp_iterations}\n")
