# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernel for the simultaneous root-refinement sweep.

Semantics must stay in lockstep with cuecrit._aberth_py (same update rule,
same degenerate-denominator guards); tests compare the two directly. The
plain C loops avoid the O(m*n) broadcast temporaries of the NumPy version.
"""
import numpy as np

from libc.math cimport sqrt

BACKEND = "cython"

ctypedef double complex zdbl


cdef inline double _abs2(zdbl v) nogil:
    return v.real * v.real + v.imag * v.imag


cdef inline bint _finite(zdbl v) nogil:
    # inf/nan never compare equal under subtraction tricks; use self-identity
    return v.real - v.real == 0.0 and v.imag - v.imag == 0.0


def aberth_iterate(w_in, z_in, double tol, int max_sweeps):
    """Run simultaneous-correction sweeps until the largest displacement is
    at most tol or the sweep budget is exhausted.

    Returns (z_out, sweeps_done, last_max_displacement); see the fallback
    module for the update rule.
    """
    w_arr = np.ascontiguousarray(w_in, dtype=complex)
    z_arr = np.array(z_in, dtype=complex, copy=True)
    delta_arr = np.zeros(z_arr.shape[0], dtype=complex)
    cdef zdbl[::1] w = w_arr
    cdef zdbl[::1] z = z_arr
    cdef zdbl[::1] delta = delta_arr
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, j, k
    cdef int sweep = 0
    cdef zdbl S, T, A, inv, d, den, newton, corr, dj
    cdef double disp = float("inf")
    cdef double ad
    cdef bint bad
    if m == 0:
        return z_arr, 0, 0.0
    for sweep in range(1, max_sweeps + 1):
        for i in range(m):
            S = 0
            T = 0
            A = 0
            bad = False
            for j in range(n):
                d = z[i] - w[j]
                if d.real == 0.0 and d.imag == 0.0:
                    bad = True
                    break
                inv = 1.0 / d
                S = S + inv
                T = T + inv * inv
            dj = 0
            if not bad:
                for k in range(m):
                    if k == i:
                        continue
                    d = z[i] - z[k]
                    if d.real == 0.0 and d.imag == 0.0:
                        continue
                    A = A + 1.0 / d
                den = S * S - T
                if den.real != 0.0 or den.imag != 0.0:
                    newton = S / den
                elif T.real != 0.0 or T.imag != 0.0:
                    newton = S / T
                else:
                    newton = 0
                corr = 1.0 - newton * A
                if corr.real != 0.0 or corr.imag != 0.0:
                    dj = -newton / corr
                else:
                    dj = -newton
                if not _finite(dj):
                    dj = 0
            delta[i] = dj
        disp = 0.0
        for i in range(m):
            z[i] = z[i] + delta[i]
            ad = sqrt(_abs2(delta[i]))
            if ad > disp:
                disp = ad
        if disp <= tol:
            break
    return z_arr, sweep, disp


def newton_polish(w_in, z_in, int steps):
    """Newton steps on S(z) itself: z <- z + S/T (S' = -T)."""
    w_arr = np.ascontiguousarray(w_in, dtype=complex)
    z_arr = np.array(z_in, dtype=complex, copy=True)
    cdef zdbl[::1] w = w_arr
    cdef zdbl[::1] z = z_arr
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, j
    cdef int it
    cdef zdbl S, T, inv, d, step
    cdef bint bad
    for it in range(steps):
        for i in range(m):
            S = 0
            T = 0
            bad = False
            for j in range(n):
                d = z[i] - w[j]
                if d.real == 0.0 and d.imag == 0.0:
                    bad = True
                    break
                inv = 1.0 / d
                S = S + inv
                T = T + inv * inv
            if bad or (T.real == 0.0 and T.imag == 0.0):
                continue
            step = S / T
            if _finite(step):
                z[i] = z[i] + step
    return z_arr


def residuals(w_in, z_in):
    """|S(z_j)| for each iterate."""
    w_arr = np.ascontiguousarray(w_in, dtype=complex)
    z_arr = np.ascontiguousarray(z_in, dtype=complex)
    out_arr = np.empty(z_arr.shape[0], dtype=float)
    cdef zdbl[::1] w = w_arr
    cdef zdbl[::1] z = z_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t i, j
    cdef zdbl S, d
    cdef bint bad
    for i in range(m):
        S = 0
        bad = False
        for j in range(n):
            d = z[i] - w[j]
            if d.real == 0.0 and d.imag == 0.0:
                bad = True
                break
            S = S + 1.0 / d
        out[i] = float("inf") if bad else sqrt(_abs2(S))
    return out_arr
