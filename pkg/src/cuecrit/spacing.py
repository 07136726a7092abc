"""Exact Taylor coefficients of the sine-kernel gap probability.

E(s) = det(I - K_s) with K(x, y) = sin(pi(x-y))/(pi(x-y)) on [0, s] is the
probability that an interval of rescaled length s contains no eigenphases.
Its Taylor coefficients at s = 0 are finite rational combinations of even
powers of pi and are computed here exactly, by two independent methods whose
term-by-term agreement is asserted in the tests:

1. Trace expansion (the default). Rescaling the kernel to [0, 1] gives the
   degenerate kernel sum_p c_p v^p (x-y)^{2p} * s with v = (pi s)^2 and
   c_p = (-1)^p/(2p+1)!, whose action on the monomial basis x^a is a finite
   matrix C(v). Then log E = -sum_m s^m Tr(C(v)^m)/m, expanded in s with all
   matrix entries exact rationals, and exponentiated as a formal series.

2. A Painleve-type recursion (sigma_form_series) for the logarithmic
   derivative of the same determinant, which produces the coefficients from
   a quadratic ODE identity order by order.

The small-s expansion of the spacing density P(S) = E''(S) and the induced
small-x series for the radial law of derivative roots are evaluated from
these coefficients; see p_cue, ipx_small_x and ipx_coefficients.
"""
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import comb, factorial, lcm, pi

import numpy as np

from .errors import CapabilityError
from .exact import pp_add, pp_eval, pp_scale, series_exp, series_mul

MAX_SUPPORTED_ORDER = 40
SIGMA_MAX_ORDER = 24
CACHE_VERSION = 1
TAIL_BUDGET = 1e-3

_CACHE_HEADER = f"# gap-series cache v{CACHE_VERSION}"


@dataclass(frozen=True)
class GapProbabilitySeries:
    """Taylor series of the gap probability E(s) up to s^max_order.

    Attributes
    ----------
    max_order : int
        Highest retained power of s.
    coefficients : tuple
        coefficients[k] is a dict {pi_power: Fraction} representing the
        exact coefficient of s^k as sum_p c_p pi^p (even powers only).
    """

    max_order: int
    coefficients: tuple

    def __post_init__(self):
        if self.max_order < 4:
            raise ValueError("series must extend at least to s^4")
        coeffs = tuple(dict(c) for c in self.coefficients)
        if len(coeffs) != self.max_order + 1:
            raise ValueError("coefficient count must be max_order + 1")
        if coeffs[0] != {0: Fraction(1)} or coeffs[1] != {0: Fraction(-1)}:
            raise ValueError("gap probability must start 1 - s")
        if coeffs[2] or coeffs[3]:
            raise ValueError("s^2 and s^3 coefficients must vanish")
        object.__setattr__(self, "coefficients", coeffs)

    def e_coefficient(self, l):
        """E_l, the exact coefficient of s^(l+4), as a {pi_power: Fraction} dict."""
        if l < 0:
            raise ValueError("l must be >= 0")
        if l + 4 > self.max_order:
            raise CapabilityError(
                f"E_{l} needs order {l + 4}, series holds {self.max_order}")
        return dict(self.coefficients[l + 4])

    def truncated(self, max_order):
        if max_order > self.max_order:
            raise CapabilityError(
                f"cannot extend order {self.max_order} series to {max_order}")
        return GapProbabilitySeries(max_order=max_order,
                                    coefficients=self.coefficients[:max_order + 1])

    def evaluate(self, s, derivative=0):
        """Raw truncated value of E or a derivative, in double precision.

        No trust-region policing here; p_cue applies the tail check before
        trusting the numbers as a density.
        """
        s = float(s)
        total = 0.0
        for k in range(derivative, self.max_order + 1):
            c = self.coefficients[k]
            if not c:
                continue
            fall = 1.0
            for i in range(derivative):
                fall *= k - i
            total += fall * pp_eval(c) * s ** (k - derivative)
        return total


def _trace_coefficients(max_order):
    """v-coefficients of Tr(C(v)^m) for m = 1..max_order, exact but scaled.

    C(v) = sum_p c_p v^p B_p with (B_p)_{ab} = (-1)^a binom(2p, a)/(2p-a+b+1)
    for a <= 2p (rows above 2p vanish), acting on monomials x^b of degree up
    to 2P, P = ceil((max_order - 2)/2). To keep the matrix products in big
    integers, every B_p block is premultiplied by the global denominator lcm
    L; the returned traces of C(v)^m then carry a factor L^m which the
    assembly divides back out.

    Returns (traces, L) where traces[m][q] is the integer v^q-coefficient of
    L^m Tr(C(v)^m), truncated at the v-degree that can still contribute to
    s^max_order (each factor of v costs s^2 on top of the s^m prefactor).
    """
    big_p = (max_order - 1) // 2
    dim = 2 * big_p + 1

    denominators = set()
    for p in range(big_p + 1):
        f = factorial(2 * p + 1)
        for a in range(2 * p + 1):
            for b in range(dim):
                denominators.add(Fraction(comb(2 * p, a), f * (2 * p - a + b + 1)).denominator)
    scale = 1
    for d in denominators:
        scale = lcm(scale, d)

    blocks = []
    for p in range(big_p + 1):
        f = factorial(2 * p + 1)
        sign_p = (-1) ** p
        m = [[0] * dim for _ in range(dim)]
        for a in range(2 * p + 1):
            sign = sign_p * (-1) ** a
            for b in range(dim):
                q = Fraction(sign * comb(2 * p, a) * scale, f * (2 * p - a + b + 1))
                m[a][b] = q.numerator
        blocks.append(m)
    block_rows = [2 * p + 1 for p in range(big_p + 1)]

    def matmul_top_rows(a, b, nrows):
        # b has nonzero entries only in its first nrows rows
        bt = list(zip(*b[:nrows]))
        out = [[0] * dim for _ in range(dim)]
        for i in range(dim):
            ai = a[i][:nrows]
            oi = out[i]
            for j in range(dim):
                col = bt[j]
                acc = 0
                for x, y in zip(ai, col):
                    if x and y:
                        acc += x * y
                oi[j] = acc
        return out

    powers = {q: blocks[q] for q in range(big_p + 1)}
    traces = {}
    qmax = (max_order - 1) // 2
    traces[1] = [sum(powers[q][i][i] for i in range(dim)) if q in powers else 0
                 for q in range(qmax + 1)]
    for m in range(2, max_order + 1):
        qnext = (max_order - m) // 2
        nxt = {}
        for d in range(qnext + 1):
            acc = None
            for j in range(min(d, big_p) + 1):
                i = d - j
                if i not in powers:
                    continue
                prod = matmul_top_rows(powers[i], blocks[j], block_rows[j])
                if acc is None:
                    acc = prod
                else:
                    for r in range(dim):
                        ar, pr = acc[r], prod[r]
                        for c in range(dim):
                            ar[c] += pr[c]
            nxt[d] = acc if acc is not None else [[0] * dim for _ in range(dim)]
        powers = nxt
        traces[m] = [sum(powers[q][i][i] for i in range(dim)) if q in powers else 0
                     for q in range(qnext + 1)]
    return traces, scale


def _assemble_from_traces(max_order, traces, scale):
    """log E = -sum_m s^m Tr(C^m)/m with v = (pi s)^2, then exponentiate."""
    log_e = [dict() for _ in range(max_order + 1)]
    for m, tr in traces.items():
        denom = scale ** m * m
        for q, t in enumerate(tr):
            k = m + 2 * q
            if k > max_order or t == 0:
                continue
            log_e[k] = pp_add(log_e[k], {2 * q: Fraction(-t, denom)})
    return series_exp(log_e, max_order)


def compute_gap_series(max_order):
    """Compute the series from scratch by the trace expansion."""
    if max_order < 4:
        raise ValueError("max_order must be >= 4")
    if max_order > MAX_SUPPORTED_ORDER:
        raise CapabilityError(
            f"max_order {max_order} beyond supported {MAX_SUPPORTED_ORDER}")
    traces, scale = _trace_coefficients(max_order)
    coeffs = _assemble_from_traces(max_order, traces, scale)
    return GapProbabilitySeries(max_order=max_order, coefficients=tuple(coeffs))


def sigma_form_series(max_order):
    """Same coefficients from the quadratic ODE recursion, independently.

    Writing log E(s) = sum_k b_k s^k / k, the function sigma(x) = x d/dx
    log E at x = pi s satisfies a Painleve-V sigma-form identity which in
    the s variable reads A^2 + 4 pi^2 B^2 + 4 B C^2 = 0 with
    A = sum k(k-1) b_k s^(k-1), B = sum (k-1) b_k s^k, C = sum k b_k s^(k-1).
    With b_1 = b_2 = -1 fixed, the s^n coefficient of the identity is linear
    in b_n, giving b_n = r_n / (4 (n-1)^2) where r_n is the identity residual
    evaluated with b_n = 0. Cost grows like O(n^4) big-rational operations,
    hence the lower order cap; this path exists to cross-check the trace
    expansion, not to replace it.
    """
    if max_order < 4:
        raise ValueError("max_order must be >= 4")
    if max_order > SIGMA_MAX_ORDER:
        raise CapabilityError(
            f"sigma recursion capped at order {SIGMA_MAX_ORDER}")
    b = [None, {0: Fraction(-1)}, {0: Fraction(-1)}]
    for n in range(3, max_order + 1):
        b.append({})
        a_ser = [dict() for _ in range(max_order + 1)]
        b_ser = [dict() for _ in range(max_order + 1)]
        c_ser = [dict() for _ in range(max_order + 1)]
        for k in range(1, n + 1):
            for p, c in b[k].items():
                a_ser[k - 1] = pp_add(a_ser[k - 1], {p: k * (k - 1) * c})
                c_ser[k - 1] = pp_add(c_ser[k - 1], {p: k * c})
                b_ser[k] = pp_add(b_ser[k], {p: (k - 1) * c})
        aa = series_mul(a_ser, a_ser, n)
        bb = series_mul(b_ser, b_ser, n)
        bcc = series_mul(b_ser, series_mul(c_ser, c_ser, n), n)
        residual = pp_add(aa[n], {p + 2: 4 * c for p, c in bb[n].items()})
        residual = pp_add(residual, pp_scale(bcc[n], 4))
        b[n] = {p: c / (4 * (n - 1) ** 2) for p, c in residual.items() if c != 0}
    log_e = [dict()] + [{p: c / k for p, c in b[k].items()}
                        for k in range(1, max_order + 1)]
    coeffs = series_exp(log_e, max_order)
    return GapProbabilitySeries(max_order=max_order, coefficients=tuple(coeffs))


def write_cache(series, path):
    """Versioned text cache: one line per term, `order num/den pi_power`."""
    lines = [f"{_CACHE_HEADER} max_order={series.max_order}"]
    for k, coeff in enumerate(series.coefficients):
        for p in sorted(coeff):
            c = coeff[p]
            lines.append(f"{k} {c.numerator}/{c.denominator} {p}")
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def _parse_cache(text):
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith(_CACHE_HEADER):
        raise ValueError("unrecognized gap-series cache header")
    max_order = int(lines[0].rsplit("max_order=", 1)[1])
    coeffs = [dict() for _ in range(max_order + 1)]
    for line in lines[1:]:
        if not line.strip():
            continue
        k_str, frac_str, p_str = line.split()
        num, den = frac_str.split("/")
        coeffs[int(k_str)][int(p_str)] = Fraction(int(num), int(den))
    return GapProbabilitySeries(max_order=max_order, coefficients=tuple(coeffs))


def read_cache(path):
    with open(path, "r", encoding="ascii") as fh:
        return _parse_cache(fh.read())


def _shipped_series(max_order):
    """Best shipped cache covering max_order, or None."""
    best = None
    data_dir = resources.files("cuecrit").joinpath("data")
    try:
        entries = list(data_dir.iterdir())
    except FileNotFoundError:
        return None
    for entry in entries:
        name = entry.name
        if not (name.startswith("gap_series_order") and name.endswith(".txt")):
            continue
        series = _parse_cache(entry.read_text(encoding="ascii"))
        if series.max_order >= max_order:
            if best is None or series.max_order < best.max_order:
                best = series
    return best


def gap_series(max_order, cache_dir=None):
    """Gap probability series to the requested order, cached when possible.

    Lookup order: an exact-order cache file in cache_dir, then the cache
    shipped with the package (truncated down if it extends further), then a
    fresh computation, which is written back to cache_dir when one is given.

    Raises
    ------
    ValueError
        max_order < 4.
    CapabilityError
        max_order beyond the supported recursion depth (40).
    """
    max_order = int(max_order)
    if max_order < 4:
        raise ValueError("max_order must be >= 4")
    if max_order > MAX_SUPPORTED_ORDER:
        raise CapabilityError(
            f"max_order {max_order} beyond supported {MAX_SUPPORTED_ORDER}")
    cache_path = None
    if cache_dir is not None:
        cache_path = os.path.join(cache_dir, f"gap_series_order{max_order}.txt")
        if os.path.exists(cache_path):
            return read_cache(cache_path)
    shipped = _shipped_series(max_order)
    if shipped is not None:
        return shipped if shipped.max_order == max_order else shipped.truncated(max_order)
    series = compute_gap_series(max_order)
    if cache_path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        write_cache(series, cache_path)
    return series


def trust_radius(series, tail_budget=TAIL_BUDGET):
    """Largest s at which the final retained density term stays below budget.

    The spacing density P(s) = E''(s) is an alternating-ish truncated series;
    beyond the point where its last term passes tail_budget the truncation
    dominates and values are noise. Solved in closed form from that single
    term.
    """
    for k in range(series.max_order, 1, -1):
        if series.coefficients[k]:
            last = abs(pp_eval(series.coefficients[k])) * k * (k - 1)
            return (tail_budget / last) ** (1.0 / (k - 2))
    raise ValueError("series has no density terms")


def p_cue(series, s):
    """Spacing density P(s) = E''(s) from the truncated series.

    Values are floored at 0 (truncation noise can dip below near the edge of
    the trust region).

    Raises
    ------
    ValueError
        s < 0, or s beyond the trust radius of this truncation (the last
        retained term exceeds its error budget there).
    """
    s = float(s)
    if s < 0:
        raise ValueError("s must be >= 0")
    radius = trust_radius(series)
    if s > radius:
        raise ValueError(
            f"s={s:g} beyond trust radius {radius:.3f} of order-{series.max_order} "
            f"truncation (last-term bound {TAIL_BUDGET:g})")
    return max(0.0, series.evaluate(s, derivative=2))


def _ipx_scale_exact(beta, l):
    """(2/(beta pi^2))^((l+3)/2) as {pi_power: Fraction}, or None.

    Exact only when 2/beta (for odd l+3, its square root) is rational.
    """
    try:
        q = Fraction(2) / Fraction(beta)
    except (TypeError, ValueError):
        return None
    j = l + 3
    if j % 2 == 0:
        return {-j: q ** (j // 2)}
    num_root = _exact_sqrt(q.numerator)
    den_root = _exact_sqrt(q.denominator)
    if num_root is None or den_root is None:
        return None
    return {-j: Fraction(num_root, den_root) ** j}


def _exact_sqrt(n):
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


def ipx_coefficient_exact(series, l, beta=Fraction(1, 2)):
    """Exact Ip series coefficient (2/(beta pi^2))^((l+3)/2) (l+4) E_l.

    Returns (exponent, coefficient) with the exponent (l+3)/2 as a Fraction
    and the coefficient as a {pi_power: Fraction} dict. Requires a beta for
    which the scale factor is rational-times-pi-power (beta = 1/2 works for
    every l); raises ValueError otherwise.
    """
    scale = _ipx_scale_exact(beta, l)
    if scale is None:
        raise ValueError(f"no exact representation for beta={beta}, l={l}")
    e_l = series.e_coefficient(l)
    power, factor = next(iter(scale.items()))
    out = {p + power: c * factor * (l + 4) for p, c in e_l.items() if c != 0}
    return Fraction(l + 3, 2), out


def ipx_coefficients(series, beta=0.5, l_max=30):
    """Coefficients of the small-x series for Ip(x).

    Ip(x) ~ sum_l (2/(beta pi^2))^((l+3)/2) (l+4) E_l x^((l+3)/2); returns
    the list of (exponent as Fraction, coefficient as float) pairs for
    l = 0..l_max. Exact rational-times-pi-power arithmetic is used whenever
    beta allows it, with a single rounding at the end.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    if l_max > series.max_order - 4:
        raise CapabilityError(
            f"l_max {l_max} needs series order {l_max + 4} > {series.max_order}")
    out = []
    for l in range(l_max + 1):
        exponent = Fraction(l + 3, 2)
        scale = _ipx_scale_exact(beta, l)
        if scale is not None:
            power, factor = next(iter(scale.items()))
            coeff = pp_eval({p + power: c * factor * (l + 4)
                             for p, c in series.e_coefficient(l).items()})
        else:
            coeff = (2.0 / (beta * pi ** 2)) ** (float(exponent)) * (l + 4) \
                * pp_eval(series.e_coefficient(l))
        out.append((exponent, coeff))
    return out


def ipx_small_x(series, x, beta=0.5, l_max=30):
    """Truncated small-x series for Ip(x); accepts scalar or array x.

    Raises
    ------
    ValueError
        beta <= 0 or any x < 0.
    CapabilityError
        l_max beyond the series order.
    """
    coeffs = ipx_coefficients(series, beta=beta, l_max=l_max)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x must be >= 0")
    total = np.zeros_like(x_arr)
    for exponent, coeff in coeffs:
        if coeff != 0.0:
            total = total + coeff * np.power(x_arr, float(exponent))
    return float(total) if total.ndim == 0 else total
