"""Toeplitz determinants and strong-Szego limits for the symbols g and h.

For a point z inside the unit disk and weights w (complex) and alpha (real),
with q(theta) = 1/(z - e^{i theta}):

    g(theta) = Re[conj(w) q] - alpha Re[q^2]
    h(theta) = Re[conj(w) q] - alpha Im[q^2]

Both are real trigonometric series with Fourier coefficients

    g_0 = 0,  g_k = -(w/2) zbar^{k-1} - (alpha/2)(k-1) zbar^{k-2}   (k >= 1)

(h with i*alpha in place of alpha) and conjugate symmetry for k <= -1. The
strong Szego limit theorem gives D_{n-1}[exp(i g)] -> exp(-E(g)) with
E(g) = sum_k k |g_k|^2, which has a closed form by summing the geometric
series; this module provides the symbols, the sums, the Toeplitz
determinants, the limit error, the second-derivative comparison in alpha,
and Monte Carlo checks of the Heine identity D_{n-1}[f] = E_Haar prod f(e^{i
theta_j}) and of the Haar moments of power-sum traces.
"""
import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np
import scipy.linalg

from .errors import CapabilityError, RegimeWarning, ResolutionError, StatisticsError
from .haar import EnsembleConfig, ensemble_phases
from .linalg import TWO_PI, determinant


@dataclass(frozen=True)
class SzegoParameters:
    """Weights and center of the symbols g and h; needs |z| < 1 strictly."""

    w: complex
    alpha: float
    z: complex

    def __post_init__(self):
        if not abs(self.z) < 1.0:
            raise ValueError(f"|z| must be < 1, got {abs(self.z)}")

    @property
    def r(self):
        return abs(self.z)


@dataclass(frozen=True)
class ToeplitzSymbol:
    """Fourier coefficients f_k of a symbol for -truncation <= k <= truncation.

    coefficients[truncation + k] stores f_k.
    """

    truncation: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.shape != (2 * self.truncation + 1,):
            raise ValueError(
                f"expected {2 * self.truncation + 1} coefficients, got {coeffs.shape}")
        if not np.all(np.isfinite(coeffs.view(float))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    def coefficient(self, k):
        if abs(k) > self.truncation:
            raise CapabilityError(f"|k|={abs(k)} beyond truncation {self.truncation}")
        return complex(self.coefficients[self.truncation + k])


def _check_which(which):
    if which not in ("g", "h"):
        raise ValueError(f"which must be 'g' or 'h', got {which!r}")


def g_hat(params, k):
    """Fourier coefficient of g; conjugate symmetric, g_0 = 0."""
    return _hat(params, k, params.alpha)


def h_hat(params, k):
    """Fourier coefficient of h: same formula with i*alpha."""
    return _hat(params, k, 1j * params.alpha)


def _hat(params, k, weight):
    k = int(k)
    if k == 0:
        return 0j
    if k < 0:
        return complex(np.conj(_hat(params, -k, weight)))
    zbar = np.conj(params.z)
    if k == 1:
        return complex(-params.w / 2.0)
    return complex(-(params.w / 2.0) * zbar ** (k - 1)
                   - (weight / 2.0) * (k - 1) * zbar ** (k - 2))


def evaluate_g(params, theta):
    """g on a grid, via the closed form (exact to rounding)."""
    q = 1.0 / (params.z - np.exp(1j * np.asarray(theta, dtype=float)))
    return (np.conj(params.w) * q).real - params.alpha * (q * q).real


def evaluate_h(params, theta):
    """h on a grid: the Im of q^2 replaces the Re."""
    q = 1.0 / (params.z - np.exp(1j * np.asarray(theta, dtype=float)))
    return (np.conj(params.w) * q).real - params.alpha * (q * q).imag


def szego_sum(params, which):
    """E = sum_{k>=1} k |f_k|^2 for f = g or h, in closed form.

    Summing the geometric series gives E = c(w, alpha, r) + alpha t/(1-r^2)^3
    with c = |w|^2/(4(1-r^2)^2) + (alpha^2/2)[3r^2/(1-r^2)^4 + 1/(1-r^2)^3]
    and t = Re(w zbar) for g, Im(w zbar) for h.
    """
    _check_which(which)
    r2 = params.r ** 2
    one = 1.0 - r2
    c = (abs(params.w) ** 2 / (4.0 * one ** 2)
         + (params.alpha ** 2 / 2.0) * (3.0 * r2 / one ** 4 + 1.0 / one ** 3))
    cross = params.w * np.conj(params.z)
    t = cross.real if which == "g" else cross.imag
    return float(c + params.alpha * t / one ** 3)


def symbol_fourier(params, which, grid_size=1024):
    """ToeplitzSymbol of exp(i g) (or exp(i h)) via FFT on a uniform grid.

    The symbol is evaluated through the geometric-series closed form, so the
    only error is aliasing; truncation is fixed at grid_size // 8 and the
    relative size of the edge coefficient is required to be below 1e-13.

    Raises
    ------
    ValueError
        grid_size not a power of two or too small.
    ResolutionError
        Edge coefficient above the decay threshold (grid too coarse for
        this r).
    """
    _check_which(which)
    grid_size = int(grid_size)
    if grid_size < 16 or grid_size & (grid_size - 1):
        raise ValueError("grid_size must be a power of two, >= 16")
    theta = TWO_PI * np.arange(grid_size) / grid_size
    values = evaluate_g(params, theta) if which == "g" else evaluate_h(params, theta)
    fft = np.fft.fft(np.exp(1j * values)) / grid_size
    truncation = grid_size // 8
    coeffs = np.concatenate([fft[-truncation:], fft[:truncation + 1]])
    peak = float(np.abs(fft).max())
    edge = max(abs(coeffs[0]), abs(coeffs[-1]))
    if edge > 1e-13 * peak:
        raise ResolutionError(
            f"edge coefficient {edge:.3e} above decay threshold "
            f"(grid_size={grid_size}, r={params.r:.3f}); increase grid_size")
    return ToeplitzSymbol(truncation=truncation, coefficients=coeffs)


def toeplitz_determinant(symbol, n):
    """Determinant of the n x n matrix with (j, k) entry f_{k-j}."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > symbol.truncation:
        raise CapabilityError(
            f"n={n} beyond symbol truncation {symbol.truncation}")
    col = [symbol.coefficient(-m) for m in range(n)]
    row = [symbol.coefficient(m) for m in range(n)]
    return determinant(scipy.linalg.toeplitz(col, row))


def _default_grid(n):
    grid = 1024
    while grid < 8 * n:
        grid *= 2
    return grid


def szego_limit_error(params, which, n, grid_size=None):
    """|D_{n-1}[exp(i f)] - exp(-E(f))| for f = g or h."""
    _check_which(which)
    if grid_size is None:
        grid_size = _default_grid(n)
    symbol = symbol_fourier(params, which, grid_size)
    det = toeplitz_determinant(symbol, n)
    return float(abs(det - np.exp(-szego_sum(params, which))))


def alpha_bracket(w, z):
    """Closed form for d^2/dalpha^2 [exp(-E(g)) + exp(-E(h))] at alpha = 0.

    Equals [|w|^2 r^2/(1-r^2)^6 - 6 r^2/(1-r^2)^4 - 2/(1-r^2)^3]
    times exp(-|w|^2/(4 (1-r^2)^2)).
    """
    r2 = abs(z) ** 2
    one = 1.0 - r2
    bracket = (abs(w) ** 2 * r2 / one ** 6 - 6.0 * r2 / one ** 4 - 2.0 / one ** 3)
    return float(bracket * np.exp(-abs(w) ** 2 / (4.0 * one ** 2)))


def second_derivative_check(w, z, n, delta_alpha=1e-3, grid_size=None):
    """Finite-difference alpha second derivative of D[exp(ig)] + D[exp(ih)]
    at alpha = 0, against the closed-form bracket.

    Central second-order stencil; if the stencil at delta_alpha/2 disagrees
    with the first by more than 0.2% of the closed form, the Richardson
    extrapolation of the two is returned instead. Returns the pair
    (finite_difference, closed_form).
    """
    if not abs(z) < 1.0:
        raise ValueError("|z| must be < 1")
    if not 1e-4 <= delta_alpha <= 1e-2:
        raise ValueError("delta_alpha must lie in [1e-4, 1e-2]")
    if grid_size is None:
        grid_size = _default_grid(n)

    def det_sum(alpha):
        params = SzegoParameters(w=w, alpha=alpha, z=z)
        total = 0j
        for which in ("g", "h"):
            total += toeplitz_determinant(symbol_fourier(params, which, grid_size), n)
        return total

    closed = alpha_bracket(w, z)
    center = det_sum(0.0)

    def stencil(da):
        return ((det_sum(da) - 2.0 * center + det_sum(-da)) / da ** 2).real

    coarse = stencil(delta_alpha)
    fine = stencil(delta_alpha / 2.0)
    fd = coarse
    if abs(coarse - fine) > 2e-3 * abs(closed):
        fd = (4.0 * fine - coarse) / 3.0
    return fd, closed


def exact_power_moment(partition):
    """Haar moment of prod_k |Tr U^k|^(2 a_k) in the exact regime: prod k^a_k a_k!."""
    counts = _partition_counts(partition)
    value = 1
    for k, a in counts.items():
        value *= k ** a * factorial(a)
    return value


def _partition_counts(partition):
    parts = [int(p) for p in partition]
    if not parts or any(p < 1 for p in parts):
        raise ValueError("partition must be a nonempty multiset of positive integers")
    counts = {}
    for p in parts:
        counts[p] = counts.get(p, 0) + 1
    return counts


def ds_moment_mc(partition, n, num_samples, seed):
    """Monte Carlo Haar moment of prod_k |Tr U^k|^(2 a_k).

    partition lists k with multiplicity (so {1, 1} means a_1 = 2). In the
    exact regime L = sum(partition) <= n the answer is prod_k k^{a_k} a_k!;
    outside it a RegimeWarning is issued and the estimate is still returned.
    Returns (estimate, standard_error).
    """
    counts = _partition_counts(partition)
    total_weight = sum(k * a for k, a in counts.items())
    if total_weight > n:
        warnings.warn(
            f"L={total_weight} > n={n}: moment formula is an inequality here",
            RegimeWarning, stacklevel=2)
    if num_samples < 2:
        raise StatisticsError("need at least 2 samples for a standard error")
    phases = ensemble_phases(EnsembleConfig(n=n, num_samples=num_samples,
                                            master_seed=seed))
    values = np.ones(num_samples)
    for k, a in counts.items():
        traces = np.abs(np.exp(1j * k * phases).sum(axis=1))
        values *= traces ** (2 * a)
    estimate = float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(num_samples))
    return estimate, std_error


def heine_szego_mc(params, which, n, num_samples, seed):
    """Monte Carlo side of the Heine identity: E_Haar prod_j exp(i f(theta_j)).

    Returns (complex estimate, standard_error), the latter the root mean
    square deviation of the complex samples divided by sqrt(num_samples).
    """
    _check_which(which)
    if num_samples < 2:
        raise StatisticsError("need at least 2 samples for a standard error")
    phases = ensemble_phases(EnsembleConfig(n=n, num_samples=num_samples,
                                            master_seed=seed))
    evaluate = evaluate_g if which == "g" else evaluate_h
    values = np.exp(1j * evaluate(params, phases).sum(axis=1))
    estimate = complex(values.mean())
    std_error = float(np.sqrt((np.abs(values - estimate) ** 2).mean() / num_samples))
    return estimate, std_error
