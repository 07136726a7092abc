"""Command line experiments over the simulation and asymptotics toolkit.

Each subcommand writes one or more data tables (CSV by default, JSON via
--format json) plus a run manifest into --out. Outputs are deterministic
functions of the manifest identity; progress goes to stderr, data never
does. Column contracts live in docs/formats.md.

Exit codes: 0 success, 2 parameter/usage error, 3 numeric failure,
4 insufficient statistics.
"""
import argparse
import json
import multiprocessing
import os
import sys
import time
import warnings
from fractions import Fraction

import numpy as np

from . import __version__
from .critical import critical_points
from .errors import ConvergenceError, ResolutionError, StatisticsError
from .exact import pp_eval, pp_format
from .haar import EnsembleConfig, derived_seed, ensemble_phases, sample_eigenphases, spectrum_from_row
from .manifest import RunManifest
from .spacing import gap_series, ipx_coefficient_exact, ipx_small_x
from .stats import (ScaledRadialSample, SpacingCorrelationSample, beta_hat,
                    default_x_grid, empirical_ipx, ipx_large_x,
                    spacing_correlation)
from .szego import (SzegoParameters, ds_moment_mc, exact_power_moment,
                    second_derivative_check, symbol_fourier, szego_limit_error,
                    szego_sum, toeplitz_determinant)

DEFAULT_SEED = 20020521


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_table(out_dir, name, fmt, header, rows):
    """Write one table as CSV or JSON; returns the path written."""
    os.makedirs(out_dir, exist_ok=True)
    if fmt == "csv":
        path = os.path.join(out_dir, f"{name}.csv")
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        path = os.path.join(out_dir, f"{name}.json")
        records = [dict(zip(header, row)) for row in rows]
        with open(path, "w", encoding="ascii") as fh:
            json.dump(records, fh, indent=1)
            fh.write("\n")
    return path


def _progress(label):
    def callback(done, total):
        print(f"{label}: {done}/{total}", file=sys.stderr, flush=True)
    return callback


def _finish(args, command, parameters, t0):
    manifest = RunManifest(command=command, parameters=parameters,
                           duration_seconds=round(time.time() - t0, 3))
    os.makedirs(args.out, exist_ok=True)
    manifest.write(os.path.join(args.out, f"{command}.manifest.json"))
    return 0


def _row_scaled_x(row):
    cps = critical_points(spectrum_from_row(row))
    return (cps.n - 1) * (1.0 - np.abs(cps.points))


def _row_spacing_pairs(row):
    spectrum = spectrum_from_row(row)
    return spacing_correlation(spectrum, critical_points(spectrum)).pairs


def _map_rows(worker, rows, threads, label):
    if threads > 1:
        with multiprocessing.Pool(threads) as pool:
            out = pool.map(worker, list(rows))
        print(f"{label}: {len(out)}/{len(out)}", file=sys.stderr, flush=True)
        return out
    out = []
    report = _progress(label)
    for i, row in enumerate(rows):
        out.append(worker(row))
        if (i + 1) % 50 == 0 or i + 1 == len(rows):
            report(i + 1, len(rows))
    return out


def cmd_sample(args):
    t0 = time.time()
    if args.n < 2:
        raise ValueError("need --n >= 2 (a single eigenvalue has no derivative roots)")
    spectrum = sample_eigenphases(args.n, derived_seed(args.seed, 0))
    cps = critical_points(spectrum)
    _write_table(args.out, "sample_phases", args.format,
                 ["index", "theta"],
                 [(j, float(t)) for j, t in enumerate(spectrum.phases)])
    rows = []
    for j, (p, r) in enumerate(zip(cps.points, cps.residuals)):
        rows.append((j, float(p.real), float(p.imag), float(abs(p)),
                     float(np.mod(np.angle(p), 2.0 * np.pi)), float(r)))
    _write_table(args.out, "sample_critical", args.format,
                 ["index", "re", "im", "modulus", "argument", "residual"], rows)
    return _finish(args, "sample",
                   {"n": args.n, "seed": args.seed, "format": args.format}, t0)


def cmd_ipx(args):
    t0 = time.time()
    if args.n < 2:
        raise ValueError("need --n >= 2")
    config = EnsembleConfig(n=args.n, num_samples=args.samples,
                            master_seed=args.seed)
    phases = ensemble_phases(config, progress=_progress("sampling"))
    pooled_x = _map_rows(_row_scaled_x, list(phases), args.threads,
                         "critical points")
    grid = default_x_grid(args.x_min, args.x_max, args.x_points)
    curve = empirical_ipx([ScaledRadialSample(n=args.n, x_values=x)
                           for x in pooled_x], grid)
    values, errors = curve.values, curve.std_errors()
    series = gap_series(max(args.l_max + 4, 4))
    small = ipx_small_x(series, grid, beta=args.beta, l_max=args.l_max)
    large = ipx_large_x(grid)
    rows = []
    for k in range(grid.size):
        rows.append((float(grid[k]), float(values[k]), float(errors[k]),
                     float(large[k]), float(small[k]),
                     float(values[k] - large[k]), float(values[k] - small[k])))
    _write_table(args.out, "ipx", args.format,
                 ["x", "ipx_empirical", "std_error", "large_x_law",
                  "small_x_series", "diff_large", "diff_small"], rows)
    return _finish(args, "ipx",
                   {"n": args.n, "samples": args.samples, "seed": args.seed,
                    "x_grid": {"min": args.x_min, "max": args.x_max,
                               "points": args.x_points},
                    "l_max": args.l_max, "beta": args.beta,
                    "format": args.format}, t0)


def cmd_coeffs(args):
    t0 = time.time()
    series = gap_series(max(args.l_max + 4, 4))
    beta = Fraction(1, 2)
    rows = []
    for l in range(args.l_max + 1):
        e_l = series.e_coefficient(l)
        exponent, ip_exact = ipx_coefficient_exact(series, l, beta)
        rows.append((l, l + 4, pp_format(e_l), repr(pp_eval(e_l)),
                     str(exponent), pp_format(ip_exact), repr(pp_eval(ip_exact))))
    _write_table(args.out, "coeffs", args.format,
                 ["l", "s_power", "e_exact", "e_decimal",
                  "ip_exponent", "ip_exact", "ip_decimal"], rows)
    return _finish(args, "coeffs",
                   {"l_max": args.l_max, "beta": "1/2", "format": args.format}, t0)


def cmd_szego(args):
    t0 = time.time()
    w = complex(args.w_re, args.w_im)
    params = SzegoParameters(w=w, alpha=args.alpha, z=complex(args.r, 0.0))
    n_list = [int(v) for v in args.n_list.split(",")]
    rows = []
    for which in ("g", "h"):
        limit = float(np.exp(-szego_sum(params, which)))
        for n in n_list:
            grid = 1024
            while grid < 8 * n:
                grid *= 2
            det = toeplitz_determinant(symbol_fourier(params, which, grid), n)
            rows.append((which, n, float(det.real), float(det.imag), limit,
                         float(abs(det - limit))))
    fd, closed = second_derivative_check(w, params.z, max(n_list),
                                         delta_alpha=1e-3)
    _write_table(args.out, "szego", args.format,
                 ["which", "n", "det_re", "det_im", "szego_limit", "error"],
                 rows)
    _write_table(args.out, "szego_alpha2", args.format,
                 ["n", "delta_alpha", "finite_difference", "closed_form"],
                 [(max(n_list), 1e-3, fd, closed)])
    return _finish(args, "szego",
                   {"r": args.r, "w": [args.w_re, args.w_im],
                    "alpha": args.alpha, "n_list": n_list,
                    "format": args.format}, t0)


def cmd_moments(args):
    t0 = time.time()
    rows = []
    for i, spec_str in enumerate(p for p in args.partitions.split(";") if p):
        partition = [int(v) for v in spec_str.split(",")]
        weight = sum(partition)
        exact = exact_power_moment(partition)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            estimate, std_error = ds_moment_mc(partition, args.n, args.samples,
                                               derived_seed(args.seed, i))
        sigmas = abs(estimate - exact) / std_error if std_error > 0 else 0.0
        regime = "exact" if weight <= args.n else "inequality"
        rows.append(("+".join(str(v) for v in partition), weight, regime,
                     exact, float(estimate), float(std_error), float(sigmas)))
    _write_table(args.out, "moments", args.format,
                 ["partition", "weight", "regime", "exact", "estimate",
                  "std_error", "deviation_sigmas"], rows)
    return _finish(args, "moments",
                   {"partitions": args.partitions, "n": args.n,
                    "samples": args.samples, "seed": args.seed,
                    "format": args.format}, t0)


def cmd_spacing_corr(args):
    t0 = time.time()
    if args.n < 2:
        raise ValueError("need --n >= 2")
    config = EnsembleConfig(n=args.n, num_samples=args.samples,
                            master_seed=args.seed)
    phases = ensemble_phases(config, progress=_progress("sampling"))
    all_pairs = _map_rows(_row_spacing_pairs, list(phases), args.threads,
                          "critical points")
    rows = []
    for i, pairs in enumerate(all_pairs):
        for s, x in pairs:
            rows.append((i, float(s), float(x)))
    _write_table(args.out, "spacing_corr_pairs", args.format,
                 ["sample_index", "s", "x"], rows)
    samples = [SpacingCorrelationSample(pairs=p) for p in all_pairs]
    estimate, std_error = beta_hat(samples, x_cut=1.0)
    used = sum(int((p[:, 1] <= 1.0).sum()) for p in all_pairs)
    _write_table(args.out, "spacing_corr_summary", args.format,
                 ["pairs_used", "x_cut", "beta_hat", "std_error",
                  "ci_low", "ci_high"],
                 [(used, 1.0, float(estimate), float(std_error),
                   float(estimate - 2 * std_error),
                   float(estimate + 2 * std_error))])
    return _finish(args, "spacing_corr",
                   {"n": args.n, "samples": args.samples, "seed": args.seed,
                    "format": args.format}, t0)


def _add_common(sub, *, samples=None):
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help="master seed of the derived-seed schedule")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=".", help="output directory")
    if samples is not None:
        sub.add_argument("--samples", type=int, default=samples,
                         help="number of matrices")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cuecrit",
        description="Simulation and asymptotics of critical points of CUE "
                    "characteristic polynomials.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sample", help="one matrix: eigenphases and critical points")
    p.add_argument("--n", type=int, default=20)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("ipx", help="empirical Ip(x) against both asymptotic laws")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--x-min", type=float, default=0.01)
    p.add_argument("--x-max", type=float, default=100.0)
    p.add_argument("--x-points", type=int, default=200)
    p.add_argument("--l-max", type=int, default=30)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_common(p, samples=250)
    p.set_defaults(func=cmd_ipx)

    p = subs.add_parser("coeffs", help="exact gap-series and Ip coefficients")
    p.add_argument("--l-max", type=int, default=30)
    _add_common(p)
    p.set_defaults(func=cmd_coeffs)

    p = subs.add_parser("szego", help="Toeplitz determinants against the Szego limit")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--w-re", type=float, default=1.0)
    p.add_argument("--w-im", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--n-list", default="8,16,32,64")
    _add_common(p)
    p.set_defaults(func=cmd_szego)

    p = subs.add_parser("moments", help="Haar moments of power-sum traces")
    p.add_argument("--partitions", default="1;2;1,1",
                   help="semicolon-separated partitions, e.g. '1;2;1,1'")
    p.add_argument("--n", type=int, default=8)
    _add_common(p, samples=10000)
    p.set_defaults(func=cmd_moments)

    p = subs.add_parser("spacing-corr", help="(S, x) pairs and the beta-hat fit")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_common(p, samples=250)
    p.set_defaults(func=cmd_spacing_corr)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ResolutionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except StatisticsError as exc:
        print(f"insufficient statistics: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
