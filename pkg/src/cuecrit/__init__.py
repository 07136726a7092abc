"""Critical points of CUE characteristic polynomials.

Simulation and asymptotics toolkit for the roots of Z'(U, z) where Z is the
characteristic polynomial of a Haar-random unitary matrix: ensemble sampling,
critical point solves, the radial law Ip(x) with its large-x and small-x
asymptotics, exact sine-kernel gap-series coefficients, and Toeplitz/Szego
determinant machinery.

The critical point sweep kernel is compiled when the Cython extension was
built; cuecrit.critical.KERNEL_BACKEND reports which implementation is
active.
"""
__version__ = "0.1.0"

from .critical import (CriticalPointSet, KERNEL_BACKEND, critical_points,
                       critical_points_oracle, log_derivative,
                       matching_distance)
from .errors import (CapabilityError, ConvergenceError, RegimeWarning,
                     ResolutionError, StatisticsError)
from .haar import (EnsembleConfig, derived_seed, ensemble_phases,
                   sample_eigenphases, sample_haar_unitary)
from .linalg import EigenPhaseSpectrum, eigenphases
from .spacing import (GapProbabilitySeries, gap_series, ipx_coefficients,
                      ipx_small_x, p_cue, sigma_form_series, trust_radius)
from .stats import (IpxCurve, ScaledRadialSample, SpacingCorrelationSample,
                    beta_hat, empirical_ipx, ipx_large_x, rho_asymptotic,
                    scaled_distances, spacing_correlation)
from .szego import (SzegoParameters, ToeplitzSymbol, ds_moment_mc, g_hat,
                    h_hat, heine_szego_mc, second_derivative_check,
                    symbol_fourier, szego_limit_error, szego_sum,
                    toeplitz_determinant)

__all__ = [
    "CapabilityError", "ConvergenceError", "CriticalPointSet",
    "EigenPhaseSpectrum", "EnsembleConfig", "GapProbabilitySeries",
    "IpxCurve", "KERNEL_BACKEND", "RegimeWarning", "ResolutionError",
    "ScaledRadialSample", "SpacingCorrelationSample", "StatisticsError",
    "SzegoParameters", "ToeplitzSymbol", "beta_hat", "critical_points",
    "critical_points_oracle", "derived_seed", "ds_moment_mc",
    "eigenphases", "empirical_ipx", "ensemble_phases", "g_hat",
    "gap_series", "h_hat", "heine_szego_mc", "ipx_coefficients",
    "ipx_large_x", "ipx_small_x", "log_derivative", "matching_distance",
    "p_cue", "rho_asymptotic", "sample_eigenphases", "sample_haar_unitary",
    "scaled_distances", "second_derivative_check", "sigma_form_series",
    "spacing_correlation", "symbol_fourier", "szego_limit_error",
    "szego_sum", "toeplitz_determinant", "trust_radius",
]
