"""Sampling of Haar-distributed (CUE) unitary matrices.

A Ginibre matrix (independent complex Gaussian entries) is QR-factorized and
the unitary factor is corrected by the phases of the diagonal of R. Plain QR
output is NOT Haar distributed: the factorization is only unique once R is
forced to have positive real diagonal, and it is that canonical Q which
inherits the invariance of the Gaussian measure.

Seeding uses the counter-based Philox generator. Ensemble members draw from
seeds derived as hash(master_seed, sample_index), so ensembles are
order-independent and can be generated concurrently.
"""
from dataclasses import dataclass

import numpy as np

from .linalg import EigenPhaseSpectrum, eigenphases

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters describing one Monte Carlo ensemble."""

    n: int
    num_samples: int
    master_seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")


def derived_seed(master_seed, sample_index):
    """64-bit per-sample seed: hash of (master_seed, sample_index)."""
    ss = np.random.SeedSequence(int(master_seed) & _MASK64,
                                spawn_key=(int(sample_index),))
    return int(ss.generate_state(1, np.uint64)[0])


def _generator(seed):
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def sample_ginibre(n, seed):
    """n x n complex Ginibre matrix.

    Entries are independent complex Gaussians with real and imaginary parts
    each N(0, 1/2), i.e. unit-variance complex entries. Deterministic given
    (n, seed).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _generator(seed)
    re = rng.standard_normal((n, n))
    im = rng.standard_normal((n, n))
    return (re + 1j * im) / np.sqrt(2.0)


def sample_haar_unitary(n, seed):
    """Haar-distributed n x n unitary matrix, deterministic given (n, seed).

    If a diagonal entry of R vanishes exactly (measure zero) the draw is
    repeated with the next derived seed.
    """
    s = int(seed)
    while True:
        g = sample_ginibre(n, s)
        q, r = np.linalg.qr(g)
        d = np.diagonal(r)
        if np.all(d != 0):
            break
        s = derived_seed(s, 0)
    return q * (d / np.abs(d))


def sample_eigenphases(n, seed):
    """Eigenphase spectrum of one Haar sample."""
    return eigenphases(sample_haar_unitary(n, seed))


def _phases_batch(n, seeds):
    """Eigenphases for a batch of seeds, stacked; one row per seed.

    Batches the QR, phase correction and eigenvalue calls so that small-n
    ensembles (say 1e5 matrices at n = 6) do not pay 1e5 LAPACK call
    overheads one at a time.
    """
    b = len(seeds)
    g = np.empty((b, n, n), dtype=complex)
    for i, s in enumerate(seeds):
        g[i] = sample_ginibre(n, s)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2)
    if not np.all(d != 0):  # pragma: no cover - measure zero
        for i in range(b):
            if np.any(d[i] == 0):
                u = sample_haar_unitary(n, seeds[i])
                q[i] = u
                d[i] = 1.0
    q *= (d / np.abs(d))[:, None, :]
    ev = np.linalg.eigvals(q)
    if np.abs(np.abs(ev) - 1.0).max() > 1e-8:  # pragma: no cover
        raise ValueError("batched eigenvalues left the unit circle")
    phases = np.sort(np.mod(np.angle(ev), 2.0 * np.pi), axis=1)
    return phases


def ensemble_phases(config, batch=256, progress=None):
    """Eigenphase matrix for a whole ensemble.

    Parameters
    ----------
    config : EnsembleConfig
    batch : int
        Internal batch size for the stacked LAPACK calls.
    progress : callable or None
        Called as progress(done, total) after each batch.

    Returns
    -------
    numpy.ndarray
        Shape (num_samples, n); row i is the sorted spectrum for the sample
        with seed derived_seed(master_seed, i).
    """
    n, m = config.n, config.num_samples
    out = np.empty((m, n), dtype=float)
    done = 0
    while done < m:
        b = min(batch, m - done)
        seeds = [derived_seed(config.master_seed, i) for i in range(done, done + b)]
        out[done:done + b] = _phases_batch(n, seeds)
        done += b
        if progress is not None:
            progress(done, m)
    return out


def spectrum_from_row(row):
    """Wrap one row of ensemble_phases output as an EigenPhaseSpectrum."""
    return EigenPhaseSpectrum(n=len(row), phases=np.asarray(row, dtype=float))
