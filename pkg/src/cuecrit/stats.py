"""Ensemble statistics of critical points: the radial law Ip(x) and probes.

The scaled distance of a critical point lambda of an n x n sample is
x = (n - 1)(1 - |lambda|); Ip(x) is the fraction of points with scaled
distance at most x, i.e. lying in the annulus 1 - x/(n-1) <= |z| < 1.
Empirical curves built here are compared against two analytic regimes: the
tail law 1 - 1/x and the small-x series from module spacing.

The spacing correlation probe ties each critical point to the circularly
adjacent eigenphase gap whose midpoint direction is angularly nearest, and
fits x against pi^2 S^2 / 2 to estimate the proportionality constant beta of
the electrostatic small-gap picture.
"""
from dataclasses import dataclass

import numpy as np

from .critical import critical_points
from .errors import StatisticsError
from .linalg import TWO_PI


@dataclass(frozen=True)
class ScaledRadialSample:
    """Scaled distances x = (n-1)(1-|lambda|) for one matrix."""

    n: int
    x_values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_values, dtype=float)
        if x.shape != (self.n - 1,):
            raise ValueError(f"expected {self.n - 1} values, got {x.shape}")
        if np.any(x < 0.0) or not np.all(np.isfinite(x)):
            raise ValueError("scaled distances must be finite and >= 0")
        object.__setattr__(self, "x_values", x)


@dataclass(frozen=True)
class IpxCurve:
    """A cumulative radial-law curve sampled on a grid.

    sample_count is the pooled number of roots behind an empirical curve and
    0 for analytic curves. Empirical curves are nondecreasing; all values
    live in [0, 1] (analytic tails are clamped by the caller).
    """

    x_grid: np.ndarray
    values: np.ndarray
    sample_count: int

    def __post_init__(self):
        grid = np.asarray(self.x_grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d and aligned")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("x_grid must be strictly increasing")
        if np.any(grid < 0.0):
            raise ValueError("x_grid must be nonnegative")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError("curve values must lie in [0, 1]")
        if self.sample_count < 0:
            raise ValueError("sample_count must be >= 0")
        if self.sample_count > 0 and np.any(np.diff(values) < 0.0):
            raise ValueError("empirical curves must be nondecreasing")
        object.__setattr__(self, "x_grid", grid)
        object.__setattr__(self, "values", values)

    def std_errors(self):
        """Binomial standard error per grid point (zeros for analytic curves)."""
        if self.sample_count == 0:
            return np.zeros_like(self.values)
        p = self.values
        return np.sqrt(p * (1.0 - p) / self.sample_count)


@dataclass(frozen=True)
class SpacingCorrelationSample:
    """(S, x) pairs: rescaled adjacent spacing and the scaled distance of
    the critical point assigned to that gap."""

    pairs: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("pairs must have shape (k, 2)")
        if np.any(pairs < 0.0) or not np.all(np.isfinite(pairs)):
            raise ValueError("pairs must be finite and >= 0")
        object.__setattr__(self, "pairs", pairs)


def scaled_distances(cps):
    """ScaledRadialSample from one critical point set."""
    x = (cps.n - 1) * (1.0 - np.abs(cps.points))
    return ScaledRadialSample(n=cps.n, x_values=x)


def empirical_ipx(samples, x_grid):
    """Pooled empirical Ip over an ensemble of ScaledRadialSample."""
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    pool = np.sort(np.concatenate([s.x_values for s in samples]))
    grid = np.asarray(x_grid, dtype=float)
    values = np.searchsorted(pool, grid, side="right") / pool.size
    return IpxCurve(x_grid=grid, values=values, sample_count=int(pool.size))


def ipx_large_x(x):
    """Tail law 1 - 1/x; raw (negative below x = 1, caller clamps)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("x must be > 0")
    out = 1.0 - 1.0 / x
    return float(out) if out.ndim == 0 else out


def rho_asymptotic(r, n):
    """Large-n radial density 2/(pi (n-1) (1-r^2)^2) of critical points."""
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise ValueError("r must lie in [0, 1)")
    if n < 2:
        raise ValueError("n must be >= 2")
    return 2.0 / (np.pi * (n - 1) * (1.0 - r * r) ** 2)


def default_x_grid(x_min=0.01, x_max=100.0, points=200):
    """Geometric grid covering both asymptotic regimes."""
    if not (x_min > 0 and x_max > x_min and points >= 2):
        raise ValueError("need 0 < x_min < x_max and points >= 2")
    return np.geomspace(x_min, x_max, points)


def circular_gaps(phases):
    """All n circular eigenphase gaps, in phase order (wraparound last)."""
    phases = np.asarray(phases, dtype=float)
    gaps = np.diff(phases)
    return np.append(gaps, phases[0] + TWO_PI - phases[-1])


def spacing_correlation(spectrum, cps):
    """(S, x) pairs for one matrix.

    Each critical point is assigned to the circular gap whose midpoint
    direction theta_j + gap_j/2 is angularly nearest to the point's
    argument; S is that gap rescaled by n/(2 pi) so the mean spacing is 1.
    """
    if spectrum.n != cps.n:
        raise ValueError("spectrum and critical points disagree on n")
    n = spectrum.n
    gaps = circular_gaps(spectrum.phases)
    midpoints = np.mod(spectrum.phases + 0.5 * gaps, TWO_PI)
    angles = np.mod(np.angle(cps.points), TWO_PI)
    sep = np.abs(angles[:, None] - midpoints[None, :])
    sep = np.minimum(sep, TWO_PI - sep)
    assigned = np.argmin(sep, axis=1)
    s_values = gaps[assigned] * n / TWO_PI
    x_values = (n - 1) * (1.0 - np.abs(cps.points))
    return SpacingCorrelationSample(pairs=np.column_stack([s_values, x_values]))


def beta_hat(samples, x_cut=1.0):
    """Least-squares slope of x against u = pi^2 S^2 / 2 through the origin.

    Pairs with x > x_cut are excluded (the relation is an x -> 0 statement).
    Returns (estimate, standard_error).
    """
    pooled = np.concatenate([s.pairs for s in samples], axis=0)
    keep = pooled[:, 1] <= x_cut
    if keep.sum() < 2:
        raise StatisticsError(f"only {int(keep.sum())} pairs with x <= {x_cut}")
    s, x = pooled[keep, 0], pooled[keep, 1]
    u = 0.5 * np.pi ** 2 * s * s
    denom = float(np.dot(u, u))
    if denom == 0.0:
        raise StatisticsError("degenerate regressor (all spacings zero)")
    estimate = float(np.dot(u, x)) / denom
    resid = x - estimate * u
    dof = keep.sum() - 1
    std_error = float(np.sqrt(np.dot(resid, resid) / dof / denom))
    return estimate, std_error


def ensemble_scaled_distances(phase_rows, progress=None):
    """Critical point solves over an ensemble of eigenphase rows.

    phase_rows is the (num_samples, n) output of haar.ensemble_phases.
    Returns a list of ScaledRadialSample. Pure and order-deterministic, so
    callers may parallelize over rows and reassemble by index.
    """
    from .haar import spectrum_from_row

    rows = np.asarray(phase_rows, dtype=float)
    out = []
    for i in range(rows.shape[0]):
        cps = critical_points(spectrum_from_row(rows[i]))
        out.append(scaled_distances(cps))
        if progress is not None:
            progress(i + 1, rows.shape[0])
    return out


def nearest_spacings(phase_rows):
    """Pooled rescaled adjacent spacings S = n * gap / (2 pi) of an ensemble."""
    rows = np.asarray(phase_rows, dtype=float)
    n = rows.shape[1]
    gaps = np.diff(rows, axis=1)
    wrap = rows[:, 0] + TWO_PI - rows[:, -1]
    all_gaps = np.concatenate([gaps, wrap[:, None]], axis=1)
    return (all_gaps * n / TWO_PI).ravel()


def next_nearest_spacings(phase_rows):
    """Pooled rescaled next-nearest spacings (two gaps ahead, mean 2)."""
    rows = np.asarray(phase_rows, dtype=float)
    n = rows.shape[1]
    ext = np.concatenate([rows, rows[:, :2] + TWO_PI], axis=1)
    s1 = ext[:, 2:n + 2] - ext[:, :n]
    return (s1 * n / TWO_PI).ravel()


def next_spacing_probe(spacings, s_window, bins=8, min_avg_count=200.0):
    """Log-log slope of the next-nearest-spacing density over a window.

    Histograms the pooled spacings on log-spaced bins inside s_window and
    fits log density against log midpoint by least squares. The small-S
    density vanishes like S^7, so the window must sit where counts are still
    plentiful; the fit refuses to run on starved histograms.

    Raises
    ------
    StatisticsError
        Empty or invalid window, an empty histogram bin, or average bin
        occupancy below min_avg_count.
    """
    spacings = np.asarray(spacings, dtype=float)
    lo, hi = float(s_window[0]), float(s_window[1])
    if not (0.0 < lo < hi):
        raise StatisticsError(f"invalid window [{lo}, {hi}]")
    edges = np.geomspace(lo, hi, bins + 1)
    counts, _ = np.histogram(spacings, bins=edges)
    if counts.sum() < min_avg_count * bins:
        raise StatisticsError(
            f"only {int(counts.sum())} spacings in window [{lo}, {hi}], "
            f"need {int(min_avg_count * bins)}")
    if np.any(counts == 0):
        raise StatisticsError("empty histogram bin inside the window")
    density = counts / (spacings.size * np.diff(edges))
    mids = np.sqrt(edges[:-1] * edges[1:])
    slope = np.polyfit(np.log(mids), np.log(density), 1)[0]
    return float(slope)
