"""Critical points of characteristic polynomials with unimodular roots.

For p(z) = prod_j (z - e^{i theta_j}), the n - 1 zeros of p' are the zeros of
the logarithmic derivative S(z) = sum_j 1/(z - e^{i theta_j}) and all lie in
the closed unit disk. The solver refines midpoint initial guesses with
simultaneous (Aberth-style) correction sweeps against S directly; polynomial
coefficients are never formed, so conditioning does not degrade with n.

The sweep kernel is compiled (cuecrit._aberth_cy) when the extension built;
otherwise a NumPy fallback with identical semantics is used. The active
choice is exposed as KERNEL_BACKEND.
"""
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import ConvergenceError
from .linalg import TWO_PI

try:
    from . import _aberth_cy as _kernel
except ImportError:  # pragma: no cover - depends on build environment
    from . import _aberth_py as _kernel

KERNEL_BACKEND = _kernel.BACKEND

_MIN_GAP = 1e-12
_POLE_DIST = 1e-14
_COLLISION_DIST = 1e-10
_CONTAINMENT_SLACK = 1e-13
_POLISH_STEPS = 3


@dataclass(frozen=True)
class CriticalPointSet:
    """The n - 1 critical points of one characteristic polynomial.

    Attributes
    ----------
    n : int
        Matrix dimension (the polynomial degree).
    points : numpy.ndarray
        Shape (n - 1,), complex, inside the closed unit disk, sorted by
        argument in [0, 2*pi) with modulus as tiebreaker.
    residuals : numpy.ndarray
        Shape (n - 1,), |S(z_j)| at each accepted point.
    """

    n: int
    points: np.ndarray
    residuals: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        points = np.asarray(self.points, dtype=complex)
        residuals = np.asarray(self.residuals, dtype=float)
        if points.shape != (self.n - 1,):
            raise ValueError(f"expected {self.n - 1} points, got {points.shape}")
        if residuals.shape != points.shape:
            raise ValueError("residuals must align with points")
        if not np.all(np.isfinite(points.view(float))):
            raise ValueError("points must be finite")
        if not np.all(np.isfinite(residuals)) or np.any(residuals < 0.0):
            raise ValueError("residuals must be finite and nonnegative")
        if np.any(np.abs(points) > 1.0):
            raise ValueError("points must lie in the closed unit disk")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "residuals", residuals)

    def moduli(self):
        return np.abs(self.points)


def log_derivative(spectrum, z):
    """S(z) = p'(z)/p(z) = sum_j 1/(z - e^{i theta_j}).

    Parameters
    ----------
    spectrum : EigenPhaseSpectrum
    z : complex scalar or array_like

    Raises
    ------
    ValueError
        If any evaluation point is within 1e-14 of a pole.
    """
    z = np.asarray(z, dtype=complex)
    roots = spectrum.roots()
    dist = np.abs(z[..., None] - roots)
    if dist.min() < _POLE_DIST:
        raise ValueError("evaluation point too close to a root of p")
    out = (1.0 / (z[..., None] - roots)).sum(axis=-1)
    return out if out.ndim else complex(out)


def _circular_gaps(phases):
    gaps = np.diff(phases)
    wrap = phases[0] + TWO_PI - phases[-1]
    return np.append(gaps, wrap)


def _initial_guesses(roots, n):
    """Midpoints of phase-adjacent root pairs, pulled inside the disk.

    Coincident midpoints (possible for symmetric spectra) are separated by
    pulling later duplicates further inward, otherwise the simultaneous
    sweep would move them in lockstep forever.
    """
    z0 = 0.5 * (roots[:-1] + roots[1:]) * (1.0 - 1.0 / (4.0 * n))
    m = len(z0)
    shrink = 1.0 - 1.0 / (2.0 * n)
    for i in range(1, m):
        dup = np.sum(np.abs(z0[:i] - z0[i]) < _MIN_GAP)
        if dup:
            z0[i] *= shrink ** dup
    return z0


def _log_abs_poly(roots, z):
    """log|p(z)| evaluated stably as a sum of logs."""
    d = np.abs(z[:, None] - roots[None, :])
    with np.errstate(divide="ignore"):
        return np.log(d).sum(axis=1)


def critical_points(spectrum, tol=1e-13, max_sweeps=200):
    """All n - 1 zeros of p' for one eigenphase spectrum.

    Iterates from the n - 1 phase-adjacent midpoints with simultaneous
    correction sweeps until the largest displacement is at most tol, then
    applies a few plain Newton steps on S. Accepted points must satisfy
    |S(z_j)| <= 1e-8 * n; where two iterates collide within 1e-10 (multiple
    or near-multiple zeros of p', where S is evaluated at a near-pole of its
    derivative) the criterion is applied to |p'(z_j)| = |S(z_j) p(z_j)|
    instead, computed in log space.

    Raises
    ------
    ValueError
        If n < 2 or the smallest circular eigenphase gap is below 1e-12.
    ConvergenceError
        If the sweep budget is exhausted and some point fails its residual
        criterion, or an accepted point escapes |z| <= 1 - 1e-13.
    """
    n = spectrum.n
    if n < 2:
        raise ValueError("need n >= 2 for critical points")
    if _circular_gaps(spectrum.phases).min() < _MIN_GAP:
        raise ValueError("eigenphase spectrum is degenerate (gap < 1e-12)")
    roots = spectrum.roots()
    z0 = _initial_guesses(roots, n)
    z, sweeps, disp = _kernel.aberth_iterate(roots, z0, tol, max_sweeps)
    z = _kernel.newton_polish(roots, z, _POLISH_STEPS)
    res = np.asarray(_kernel.residuals(roots, z))

    threshold = 1e-8 * n
    ok = res <= threshold
    if not ok.all():
        dz = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(dz, np.inf)
        collided = dz.min(axis=1) < _COLLISION_DIST
        needs = ~ok & collided
        if needs.any():
            log_pv = np.log(np.where(res[needs] > 0, res[needs], 1e-300))
            log_pv = log_pv + _log_abs_poly(roots, z[needs])
            ok[np.flatnonzero(needs)[log_pv <= np.log(threshold)]] = True
    if not ok.all():
        worst = float(res[~ok].max())
        raise ConvergenceError(
            f"critical point solve failed for n={n}: {int((~ok).sum())} point(s) "
            f"above residual threshold {threshold:.1e} (worst {worst:.3e}, "
            f"{sweeps} sweeps, last displacement {disp:.3e})")
    moduli = np.abs(z)
    if np.any(moduli > 1.0 - _CONTAINMENT_SLACK):
        j = int(np.argmax(moduli))
        raise ConvergenceError(
            f"critical point containment violated for n={n}: |z|={moduli[j]:.17f} "
            f"with residual {res[j]:.3e}")
    order = np.lexsort((moduli, np.mod(np.angle(z), TWO_PI)))
    return CriticalPointSet(n=n, points=z[order], residuals=res[order])


def critical_points_oracle(spectrum):
    """Critical points via a dense eigenvalue solve, for cross-checking.

    The zeros of z p'(z) are the eigenvalues of D(I - J/n), where D is the
    diagonal matrix of roots and J the all-ones matrix: expanding the
    rank-one update of det(zI - D) gives det(zI - D(I - J/n)) = z p'(z)/n.
    One eigenvalue of smallest modulus is discarded as the structural zero
    factor. O(n^3) and dense, hence the n <= 64 limit.
    """
    n = spectrum.n
    if n < 2:
        raise ValueError("need n >= 2 for critical points")
    if n > 64:
        raise ValueError("oracle is limited to n <= 64")
    roots = spectrum.roots()
    m = np.diag(roots) @ (np.eye(n) - np.ones((n, n)) / n)
    ev = np.linalg.eigvals(m)
    ev = np.delete(ev, int(np.argmin(np.abs(ev))))
    res = np.asarray(_kernel.residuals(roots, ev))
    order = np.lexsort((np.abs(ev), np.mod(np.angle(ev), TWO_PI)))
    return CriticalPointSet(n=n, points=ev[order], residuals=res[order])


def matching_distance(set_a, set_b):
    """Largest pair distance under the optimal bijection of two point sets.

    The bijection minimizes the total distance (Hungarian assignment); the
    returned value is the max matched distance, suitable for asserting that
    two solvers found the same points.
    """
    a = np.asarray(set_a.points if hasattr(set_a, "points") else set_a, dtype=complex)
    b = np.asarray(set_b.points if hasattr(set_b, "points") else set_b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"point counts differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
