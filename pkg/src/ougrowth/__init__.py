"""Growth of random multiplicative processes driven by an OU volatility,
solved by Monte Carlo, exact lattice-gas enumeration, spectral bounds,
mean-field theory and a direct variational solver."""
from importlib.metadata import PackageNotFoundError, version as _version

from .growth import (ExplosionScanResult, MCEstimate, explosion_scan, lyapunov_estimate, mc_moments,
                     unit_start_params, simulate_terminal)
from .lattice import PartitionResult, density, entropy_per_site, exact_expectation
from .meanfield import (LyapunovBounds, Phase, PhasePoint, coexistence_gap, lyapunov_bounds, sigma_threshold,
                        solve_mean_field, transition_beta, transition_curve, weak_bounds)
from .ou import InitCondition, OUPath, ScaledParams, covariance, covariance_matrix, sample_path, variance_at
from .spectral import (EigenSolution, asymptotic_check, coupling, eigenfunction, k2_coupling, k_coupling,
                       solve_eigen, upper_coupling)
from .variational import DensityProfile, VariationalResult, evaluate_functional, solve_variational

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0+unknown"

__all__ = [
    "InitCondition", "ScaledParams", "OUPath", "variance_at", "covariance", "covariance_matrix", "sample_path",
    "MCEstimate", "ExplosionScanResult", "simulate_terminal", "mc_moments", "lyapunov_estimate",
    "explosion_scan", "unit_start_params",
    "PartitionResult", "exact_expectation", "density", "entropy_per_site",
    "EigenSolution", "k_coupling", "k2_coupling", "coupling", "upper_coupling", "solve_eigen",
    "eigenfunction", "asymptotic_check",
    "Phase", "PhasePoint", "LyapunovBounds", "solve_mean_field", "lyapunov_bounds", "weak_bounds",
    "transition_beta", "coexistence_gap", "sigma_threshold", "transition_curve",
    "DensityProfile", "VariationalResult", "evaluate_functional", "solve_variational",
]
