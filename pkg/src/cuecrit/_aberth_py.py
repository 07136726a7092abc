"""Pure NumPy fallback kernel for the simultaneous root-refinement sweep.

Semantics match cuecrit._aberth_cy exactly (same update rule, same guards)
so the two backends are interchangeable. The iteration refines candidates z
for the zeros of S(z) = sum_j 1/(z - w_j), i.e. the critical points of
prod_j (z - w_j), without forming polynomial coefficients.

Update rule per sweep (simultaneous; all corrections computed from the
current iterate vector, then applied at once):

    S_i = sum_j 1/(z_i - w_j)
    T_i = sum_j 1/(z_i - w_j)^2          (= -S'(z_i))
    N_i = S_i / (S_i^2 - T_i)            Newton step for p' via p''/p' = S + S'/S
    A_i = sum_{k != i} 1/(z_i - z_k)
    z_i <- z_i - N_i / (1 - N_i A_i)

Degenerate denominators fall back to a plain Newton step on S and finally to
no movement; non-finite corrections are dropped (the residual check in the
caller reports such points).
"""
import numpy as np

BACKEND = "python"


def aberth_iterate(w, z, tol, max_sweeps):
    """Run simultaneous-correction sweeps until the largest displacement is
    at most tol or the sweep budget is exhausted.

    Parameters
    ----------
    w : numpy.ndarray
        Complex roots of p (on the unit circle), shape (n,).
    z : numpy.ndarray
        Initial iterates, shape (m,); not modified.
    tol : float
        Convergence threshold on the max per-root displacement.
    max_sweeps : int
        Sweep budget.

    Returns
    -------
    (z_out, sweeps_done, last_max_displacement)
    """
    w = np.asarray(w, dtype=complex)
    z = np.array(z, dtype=complex, copy=True)
    if z.size == 0:
        return z, 0, 0.0
    disp = np.inf
    sweeps = 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for sweeps in range(1, max_sweeps + 1):
            inv = 1.0 / (z[:, None] - w[None, :])
            S = inv.sum(axis=1)
            T = (inv * inv).sum(axis=1)
            dz = z[:, None] - z[None, :]
            np.fill_diagonal(dz, np.inf)
            dz[dz == 0] = np.inf
            A = (1.0 / dz).sum(axis=1)
            den = S * S - T
            newton = np.where(den != 0, S / np.where(den == 0, 1.0, den),
                              np.where(T != 0, S / np.where(T == 0, 1.0, T), 0.0))
            corr = 1.0 - newton * A
            delta = np.where(corr != 0, -newton / np.where(corr == 0, 1.0, corr),
                             -newton)
            delta = np.where(np.isfinite(delta), delta, 0.0)
            z = z + delta
            disp = float(np.abs(delta).max())
            if disp <= tol:
                break
    return z, sweeps, disp


def newton_polish(w, z, steps):
    """Newton steps on S(z) itself: z <- z + S/T (S' = -T)."""
    w = np.asarray(w, dtype=complex)
    z = np.array(z, dtype=complex, copy=True)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(steps):
            inv = 1.0 / (z[:, None] - w[None, :])
            S = inv.sum(axis=1)
            T = (inv * inv).sum(axis=1)
            step = np.where(T != 0, S / np.where(T == 0, 1.0, T), 0.0)
            step = np.where(np.isfinite(step), step, 0.0)
            z = z + step
    return z


def residuals(w, z):
    """|S(z_j)| for each iterate."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        inv = 1.0 / (z[:, None] - w[None, :])
        return np.abs(inv.sum(axis=1))
