"""Command-line entry point.

Subcommands: analyze, exact, series, asymptotics, constants, simulate.
Outputs are byte-stable for identical configuration.  Exit codes:
0 success, 2 input parse failure, 3 I/O failure, 4 ceiling exceeded,
5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_CEILING = 4
EXIT_INVARIANT = 5

PRECISION_ENV = "ITERMAP_PRECISION_BITS"


def _default_precision() -> int | None:
    raw = os.environ.get(PRECISION_ENV)
    return int(raw) if raw else None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_analyze(args) -> int:
    from . import mapping

    try:
        with open(args.input, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        f = mapping.parse_mapping(text)
    except mapping.MappingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    cs = mapping.analyze(f)
    ps = mapping.period_stats(cs)
    try:
        _write_text(args.out, _json_dumps(mapping.stats_to_json_dict(f, cs, ps)))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_exact(args) -> int:
    from . import exact

    n = args.n
    buf = io.StringIO()
    writer = csv.writer(buf)
    ok = True
    try:
        if args.orders:
            writer.writerow(["m", "M_num", "M_den", "b_num", "b_den"])
            if n > exact.M_MAX_DEFAULT:
                raise exact.CeilingError("partition enumeration too large")
            for m in range(1, n + 1):
                M = exact.perm_order_mean(m)
                b = exact.perm_B_mean(m)
                writer.writerow([m, M.numerator, M.denominator, b.numerator, b.denominator])
        else:
            writer.writerow(["n", "E_T_num", "E_T_den", "E_B_num", "E_B_den"])
            for k in range(1, n + 1):
                et = exact.exact_E_T(k)
                eb = exact.exact_E_B_conditional(k)
                writer.writerow([k, et.numerator, et.denominator, eb.numerator, eb.denominator])
            # oracle cross-checks against full enumeration
            for k in range(1, min(n, 7) + 1):
                bt, bb = exact.brute_force_expectations(k)
                match = bt == exact.exact_E_T(k) and bb == exact.exact_E_B_conditional(k)
                print(f"n={k} brute-force cross-check: {'PASS' if match else 'FAIL'}", file=sys.stderr)
                ok = ok and match
    except exact.CeilingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    try:
        _write_text(args.out, buf.getvalue())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_series(args) -> int:
    from . import renyi, series

    buf = io.StringIO()
    writer = csv.writer(buf)
    try:
        if args.renyi_table:
            writer.writerow(["d", "U_d", "kappa_num", "kappa_den", "Q_d", "c_d"])
            tab = renyi.renyi_table(args.degree, exact_upto=min(args.degree, args.exact_ceiling))
            for d in range(1, args.degree + 1):
                if d <= tab.exact_upto:
                    kap = tab.kappa_exact[d - 1]
                    u, knum, kden = tab.U[d - 1], kap.numerator, kap.denominator
                else:
                    u, knum, kden = "", "", ""
                q = renyi.q_factor(d, prec=args.precision) if args.precision else float(tab.Q[d - 1])
                writer.writerow([d, u, knum, kden, repr(q), repr(float(tab.c[d - 1]))])
            _write_text(args.out, buf.getvalue())
            return EXIT_OK
        table = series.mu_table(args.degree, args.mode)
        if args.coefficients:
            writer.writerow(["m", "e_coeff", "mu"])
            for m in range(args.degree + 1):
                writer.writerow([m, repr(float(table.e[m])), repr(float(table.mu[m]))])
        else:
            header = ["n", "log_E_B", "rankin_log_bound", "s_star", "A_n"]
            if args.with_mu_variant:
                header.append("log_E_B_with_mu_variant")
            writer.writerow(header)
            for n in args.eval_n or [args.degree]:
                if n > args.degree:
                    raise series.SeriesError("degree above configured cap")
                rep = series.saddle_point(n)
                row = [
                    n,
                    repr(series.log_expected_B(n, table)),
                    repr(rep.rankin_log_value),
                    repr(rep.s_star),
                    repr(rep.A_n),
                ]
                if args.with_mu_variant:
                    row.append(repr(series.log_expected_B_with_mu(n, table)))
                writer.writerow(row)
    except series.SeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    try:
        _write_text(args.out, buf.getvalue())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    from . import asymptotics

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "leading", "lower_log", "upper_log", "x_star", "m_star"])
    try:
        for n in args.n:
            est = asymptotics.en_T_estimate(n, eps=args.eps)
            writer.writerow(
                [n]
                + [repr(v) for v in (est.leading, est.lower_log, est.upper_log, est.x_star, est.m_star)]
            )
    except asymptotics.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    try:
        _write_text(args.out, buf.getvalue())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_constants(args) -> int:
    from . import asymptotics

    try:
        c = asymptotics.compute_constants(args.tolerance)
    except asymptotics.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    payload = {
        "I": c.I,
        "beta0": c.beta0,
        "k0": c.k0,
        "quadrature_error": c.quadrature_error,
    }
    if not 3.35 <= c.k0 <= 3.37:
        print("error: k0 outside expected range", file=sys.stderr)
        return EXIT_INVARIANT
    try:
        _write_text(args.out, _json_dumps(payload))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_simulate(args) -> int:
    from . import montecarlo
    from . import asymptotics

    try:
        summary = montecarlo.run_experiment(
            args.n, args.samples, args.seed, blocks=args.blocks, crosscheck=args.crosscheck
        )
    except montecarlo.ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        [
            "n", "samples", "seed", "blocks",
            "mean_log_T", "var_log_T", "mean_log_B", "var_log_B",
            "mean_diff", "var_diff", "frac_norm_nonpos",
            "viol_T_divides_B", "viol_denes", "viol_logB_lt_logT",
            "crosscheck_max_rel",
        ]
    )
    writer.writerow(
        [
            summary.n, summary.samples, summary.seed, summary.blocks,
            repr(summary.mean_log_T), repr(summary.var_log_T),
            repr(summary.mean_log_B), repr(summary.var_log_B),
            repr(summary.mean_diff), repr(summary.var_diff),
            repr(summary.frac_norm_nonpos),
            summary.violations["T_divides_B"],
            summary.violations["denes"],
            summary.violations["logB_lt_logT"],
            repr(summary.crosscheck_max_rel),
        ]
    )
    try:
        _write_text(args.out, buf.getvalue())
        if args.histogram:
            edges = montecarlo.hist_bin_edges()
            hbuf = io.StringIO()
            hw = csv.writer(hbuf)
            hw.writerow(["bin_low", "bin_high", "count", "phi_delta"])
            hw.writerow(["-inf", repr(edges[0]), int(summary.hist[0]), ""])
            total = summary.samples
            for i in range(len(edges) - 1):
                lo, hi = float(edges[i]), float(edges[i + 1])
                expected = (asymptotics.normal_cdf(hi) - asymptotics.normal_cdf(lo)) * total
                hw.writerow([repr(lo), repr(hi), int(summary.hist[1 + i]), repr(int(summary.hist[1 + i]) - expected)])
            hw.writerow([repr(edges[-1]), "inf", int(summary.hist[-1]), ""])
            _write_text(args.histogram, hbuf.getvalue())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if any(v for v in summary.violations.values()):
        print("error: invariant violations observed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itermap",
        description="Statistics of iterated functions on a finite set",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="period statistics of one mapping file")
    p.add_argument("input", help="mapping file: n followed by n 1-based targets")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("exact", help="exact expectations E_n(T), E_n(B)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--orders", action="store_true", help="emit the (m, M_m, b_m) table instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("series", help="generating-function route to E_n(B)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="float")
    p.add_argument("--precision", type=int, default=_default_precision(), help="float precision bits")
    p.add_argument("--coefficients", action="store_true", help="emit (m, e_coeff, mu) table")
    p.add_argument("--renyi-table", action="store_true",
                   help="emit the (d, U_d, kappa, Q_d, c_d) connected-mapping table")
    p.add_argument("--exact-ceiling", type=int, default=200,
                   help="largest d carried exactly in the renyi table")
    p.add_argument("--eval-n", dest="eval_n", type=int, nargs="*", default=None)
    p.add_argument("--with-mu-variant", action="store_true",
                   help="also emit the with-mu convolution variant")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("asymptotics", help="asymptotic bracket for log E_n(T)")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("constants", help="the constants I, beta0, k0 by quadrature")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("simulate", help="Monte-Carlo sampling of random mappings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--crosscheck", action="store_true", help="check sieve log T against big-int T")
    p.add_argument("--histogram", default=None, help="write the normalized-log-T histogram CSV here")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
