"""Random walks on matrix groups: cocycles, limit theorems, diagnostics.

The package simulates products of iid invertible matrices and measures how
fast their cocycle statistics (log norms, Iwasawa rows, singular-value
profiles) approach their Gaussian limits.  Everything downstream of a seed is
deterministic: replicate randomness comes from per-replicate derived streams,
so results are reproducible across runs, platforms, and worker counts.
"""

__version__ = "0.1.0"

from .cocycles import (
    cartan_projection,
    cocycle_identity_residual,
    evaluate,
    iwasawa_cocycle,
    norm_cocycle,
)
from .contraction import (
    contraction_index,
    coupling_coefficient,
    fiber_occupation,
    proximality_decay,
)
from .engine import cocycle_grid, driven_sums_at, sigma_kappa_deviation
from .errors import ConfigError, GroupwalkError, ParseError, ValidationError
from .estimators import covariance_reduction, lyapunov, sigma_series
from .experiments import ExperimentConfig, RateFit, loglog_fit, run_experiment
from .martcouple import (
    DrivenMartingale,
    asip_deviation,
    block_scheme,
    couple_blocks,
    simulate_driven,
)
from .matgroup import Flag, GroupElement, ProjPoint, ScaledMatrix
from .measures import AtomicMeasure, parse_measure, walk
from .rng import derive_stream
from .tailbounds import calibrate_cp, fuk_nagaev_bound, maximal_tail_empirical
from .wasserstein import w1_1d, w1_1d_gaussian, w1_exact, w1_sliced

__all__ = [
    "__version__",
    "AtomicMeasure",
    "ConfigError",
    "DrivenMartingale",
    "ExperimentConfig",
    "Flag",
    "GroupElement",
    "GroupwalkError",
    "ParseError",
    "ProjPoint",
    "RateFit",
    "ScaledMatrix",
    "ValidationError",
    "asip_deviation",
    "block_scheme",
    "calibrate_cp",
    "cartan_projection",
    "cocycle_grid",
    "cocycle_identity_residual",
    "contraction_index",
    "couple_blocks",
    "coupling_coefficient",
    "covariance_reduction",
    "derive_stream",
    "driven_sums_at",
    "evaluate",
    "fiber_occupation",
    "fuk_nagaev_bound",
    "iwasawa_cocycle",
    "loglog_fit",
    "lyapunov",
    "maximal_tail_empirical",
    "norm_cocycle",
    "parse_measure",
    "proximality_decay",
    "run_experiment",
    "sigma_kappa_deviation",
    "sigma_series",
    "simulate_driven",
    "walk",
    "w1_1d",
    "w1_1d_gaussian",
    "w1_exact",
    "w1_sliced",
]
