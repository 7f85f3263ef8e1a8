"""Symmetrizability analysis for finite arbitrarily varying channels."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .avc import (
    Avc,
    DefectReport,
    JammerStrategy,
    gaussian_avc_capacity,
    load_avc,
    save_avc,
    symmetrization_defect,
    validate_avc,
)
from .bosonic import (
    BosonicParams,
    ThermalState,
    WedgeRegion,
    beamsplitter_output,
    build_mpsk_avc,
    eta_scan,
    heterodyne_density,
    psk_constellation,
    wedge_distribution,
    wedge_probability,
)
from .errors import (
    AlphabetTooSmall,
    AvcsymError,
    BadConstellation,
    DimensionMismatch,
    EtaOutOfRange,
    GridTooLarge,
    IterationLimit,
    NegativeEntry,
    NonPositivePower,
    NormalizationFailure,
    NumericalBreakdown,
    PitchTooLarge,
    QuadratureFailure,
    RowSumViolation,
    ShapeMismatch,
)
from .jammergrid import (
    DiscretizedAvc,
    GridSpec,
    JammerGrid,
    average_channel,
    convergence_scan,
    discretize_strategy,
    gaussian_disk_density,
    make_grid,
    midpoint_deviation,
    uniform_disk_density,
)
from .linprog import LinearProgram, LpOutcome, LpStatus, solve_lp, verify_point
from .randomscan import (
    ScanCell,
    ScanConfig,
    dof_threshold,
    estimate_psym,
    psym_surface,
    sample_avc,
)
from .symmetrize import (
    DEFAULT_EPSILON,
    BruteForceF,
    RuntimeEstimate,
    SymResult,
    brute_force_f,
    build_epsilon_sym_lp,
    f_value,
    is_epsilon_symmetrizable,
    runtime_estimate,
)

__version__ = "0.1.0"
