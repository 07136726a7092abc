"""Exact arithmetic on polynomials in powers of pi.

A value sum_p c_p pi^p with rational c_p is represented as a dict mapping the
integer pi-power p to a Fraction; powers may be negative. Zero coefficients
are never stored, so the zero value is the empty dict. Truncated power series
in some expansion variable are lists of such dicts indexed by the power of
that variable. These helpers keep the series assembly code free of
bookkeeping noise; all real work happens in the callers.
"""
from fractions import Fraction
from math import pi


def pp_add(a, b):
    out = dict(a)
    for p, c in b.items():
        v = out.get(p, 0) + c
        if v == 0:
            out.pop(p, None)
        else:
            out[p] = v
    return out


def pp_scale(a, r):
    if r == 0:
        return {}
    return {p: c * r for p, c in a.items()}


def pp_mul(a, b):
    out = {}
    for p1, c1 in a.items():
        for p2, c2 in b.items():
            p = p1 + p2
            v = out.get(p, 0) + c1 * c2
            if v == 0:
                out.pop(p, None)
            else:
                out[p] = v
    return out


def pp_shift(a, dp):
    """Multiply by pi^dp."""
    return {p + dp: c for p, c in a.items()}


def pp_eval(a):
    """Evaluate to double precision (one rounding per term)."""
    return float(sum(float(c) * pi ** p for p, c in sorted(a.items())))


def pp_format(a):
    """Human-readable exact form, e.g. '1/36*pi^2' or '-1' or '0'."""
    if not a:
        return "0"
    parts = []
    for p, c in sorted(a.items()):
        if p == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(f"pi^{p}")
        else:
            parts.append(f"{c}*pi^{p}")
    return " + ".join(parts).replace("+ -", "- ")


def series_mul(a, b, max_order):
    """Cauchy product of two coefficient lists, truncated."""
    out = [dict() for _ in range(max_order + 1)]
    for i, ai in enumerate(a):
        if i > max_order:
            break
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > max_order:
                break
            if not bj:
                continue
            out[i + j] = pp_add(out[i + j], pp_mul(ai, bj))
    return out


def series_exp(log_terms, max_order):
    """exp of a series with zero constant term, via E' = L' E.

    log_terms[k] is the coefficient dict of the k-th power (index 0 must be
    absent or empty). Returns coefficient dicts of the exponential.
    """
    if len(log_terms) > 0 and log_terms[0]:
        raise ValueError("series_exp requires zero constant term")
    out = [dict() for _ in range(max_order + 1)]
    out[0] = {0: Fraction(1)}
    for k in range(1, max_order + 1):
        acc = {}
        for j in range(1, k + 1):
            if j >= len(log_terms) or not log_terms[j]:
                continue
            for p1, c1 in log_terms[j].items():
                for p2, c2 in out[k - j].items():
                    p = p1 + p2
                    acc[p] = acc.get(p, Fraction(0)) + j * c1 * c2
        out[k] = {p: c / k for p, c in acc.items() if c != 0}
    return out
