"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects with dtype complex128. The
routines here wrap LAPACK (via numpy) behind small contracts: input checking,
eigenvalue unimodularity certification and deterministic phase ordering.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class EigenPhaseSpectrum:
    """Eigenphases of an n x n unitary matrix.

    Attributes
    ----------
    n : int
        Matrix dimension.
    phases : numpy.ndarray
        Shape (n,), float64, sorted ascending, each value in [0, 2*pi).
    """

    n: int
    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.shape != (self.n,):
            raise ValueError(f"expected {self.n} phases, got shape {phases.shape}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if np.any(phases < 0.0) or np.any(phases >= TWO_PI):
            raise ValueError("phases must lie in [0, 2*pi)")
        if np.any(np.diff(phases) < 0.0):
            raise ValueError("phases must be sorted ascending")
        object.__setattr__(self, "phases", phases)

    def roots(self):
        """Eigenvalues e^{i theta_j} as a complex array."""
        return np.exp(1j * self.phases)


def _as_square(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"square matrix required, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix entries must be finite")
    return a


def householder_qr(a):
    """QR factorization of a square complex matrix.

    Parameters
    ----------
    a : array_like
        Square complex matrix.

    Returns
    -------
    q, r : numpy.ndarray
        q unitary, r upper triangular, with q @ r == a to rounding
        (max-norm residual <= 1e-12 * n * max|a|).
    """
    a = _as_square(a)
    q, r = np.linalg.qr(a)
    return q, r


def unitarity_defect(u):
    """Max-norm of u^dagger u - I."""
    u = _as_square(u)
    n = u.shape[0]
    return float(np.abs(u.conj().T @ u - np.eye(n)).max())


def eigenphases(u):
    """Eigenphases of a unitary matrix, sorted ascending in [0, 2*pi).

    The input must be certified unitary: max|u^dagger u - I| <= 1e-10 * n.
    Computed eigenvalue moduli are checked against 1 (tolerance 1e-8) and the
    eigenvalues are then projected to the unit circle, since downstream
    formulas assume exactly unimodular roots. Sorting ties are broken by the
    original eigenvalue index, which makes the output deterministic.

    Raises
    ------
    ValueError
        If the input is not square or not unitary to tolerance.
    ConvergenceError
        If the eigenvalue iteration fails to converge.
    """
    u = _as_square(u)
    n = u.shape[0]
    defect = float(np.abs(u.conj().T @ u - np.eye(n)).max())
    if defect > 1e-10 * n:
        raise ValueError(f"input not unitary: defect {defect:.3e} > {1e-10 * n:.3e}")
    try:
        ev = np.linalg.eigvals(u)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed for n={n}: {exc}") from exc
    moduli = np.abs(ev)
    worst = float(np.abs(moduli - 1.0).max())
    if worst > 1e-8:
        raise ConvergenceError(
            f"eigenvalue moduli deviate from 1 by {worst:.3e} (n={n})")
    phases = np.mod(np.angle(ev), TWO_PI)
    phases[phases >= TWO_PI] = 0.0  # mod can round up to 2*pi exactly
    order = np.argsort(phases, kind="stable")
    return EigenPhaseSpectrum(n=n, phases=phases[order])


def determinant(a):
    """Determinant of a square complex matrix via pivoted LU."""
    a = _as_square(a)
    return complex(np.linalg.det(a))
