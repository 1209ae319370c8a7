"""Command-line driver.

Exit codes: 0 success, 1 failed check, 2 parse/usage error, 3 degree mismatch,
4 domain error (``s`` outside the admissible range).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import astuple
from fractions import Fraction
from pathlib import Path

import numpy as np

from .analytic import DomainError, alpha_of, certify_all, saddle, voiculescu_R_empirical
from .convolution import boxplus
from .experiments import (
    BoxplusRow,
    ExperimentRow,
    fit_slope,
    row_header,
    run_boxplus_converge,
    run_converge,
)
from .fileio import ParseError, load_poly, poly_to_json
from .measures import MeasureSpecError, parse_measure
from .polycore import EXACT_MAX_DEGREE, to_exact
from .transforms import (
    MOBIUS_MAX_N,
    finite_R,
    finite_cumulants_logseries,
    finite_cumulants_mobius,
)

EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_DEGREE = 3
EXIT_DOMAIN = 4


def fmt(x) -> str:
    if isinstance(x, (str, int, Fraction)):
        return str(x)
    # + 0.0 folds -0.0 into 0.0
    return "%.17g" % (x + 0.0)


def parse_s_grid(text: str):
    try:
        lo, hi, count = text.split(":")
        count = int(count)
        lo, hi = float(Fraction(lo)), float(Fraction(hi))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count, got {text!r}") from exc
    if count < 1:
        raise argparse.ArgumentTypeError("count must be positive")
    return [float(v) for v in np.linspace(lo, hi, count)]


def parse_n_list(text: str):
    try:
        ns = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not ns or any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError("degrees must be positive")
    return ns


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def cmd_convolve(args) -> int:
    p = load_poly(args.p, exact=args.exact)
    q = load_poly(args.q, exact=args.exact)
    if p.degree != q.degree:
        print(f"error: degree mismatch ({p.degree} vs {q.degree})", file=sys.stderr)
        return EXIT_DEGREE
    _emit(poly_to_json(boxplus(p, q)) + "\n", args.out)
    return 0


def cmd_cumulants(args) -> int:
    p = load_poly(args.poly, exact=args.exact)
    max_n = p.degree if args.max_n is None else args.max_n
    if not 1 <= max_n <= p.degree:
        print(f"error: max-n must lie in [1, {p.degree}]", file=sys.stderr)
        return EXIT_PARSE
    # high cumulants cancel catastrophically in floats, so float input is
    # lifted to its exact rational image and only the output is rounded
    work = p if p.exact or p.degree > EXACT_MAX_DEGREE else to_exact(p)
    cast = (lambda v: v) if p.exact else float
    kappa = [cast(k) for k in finite_cumulants_logseries(work).kappa[:max_n]]
    header, rows, status = ["n", "kappa"], [], 0
    check_n = min(max_n, MOBIUS_MAX_N) if args.check else 0
    if args.check:
        header.append("kappa_mobius")
        mob = [cast(k) for k in finite_cumulants_mobius(work, check_n).kappa]
    for n in range(1, max_n + 1):
        row = [n, kappa[n - 1]]
        if args.check:
            if n <= check_n:
                row.append(mob[n - 1])
                a, b = kappa[n - 1], mob[n - 1]
                same = a == b if p.exact else abs(a - b) <= 1e-9 * max(abs(a), abs(b), 1.0)
                if not same:
                    status = EXIT_FAILED
            else:
                row.append("")
        rows.append(row)
    _emit(_csv(header, rows), args.out)
    if status:
        print("error: Moebius and log-series cumulants disagree", file=sys.stderr)
    return status


def cmd_rtransform(args) -> int:
    p = load_poly(args.poly, exact=args.exact)
    rows = []
    alpha = alpha_of(p) if p.has_roots and all(r < 0 for r in p.roots) else None
    for s in args.s_grid:
        s_val = Fraction(s) if args.exact else s
        r_fin = finite_R(p, s_val)
        if alpha is not None and 0 < s < alpha:
            r_lim = voiculescu_R_empirical(saddle(p, s))
            rows.append([s, float(r_fin), r_lim, float(r_fin) - r_lim])
        else:
            rows.append([s, float(r_fin), "", ""])
    _emit(_csv(["s", "r_finite", "r_limit", "delta"], rows), args.out)
    return 0


def cmd_bounds(args) -> int:
    p = load_poly(args.poly, exact=args.exact)
    certs = certify_all(p, float(Fraction(args.s)))
    text = "".join(c.line() + "\n" for c in certs)
    _emit(text, args.out)
    return 0 if all(c.holds for c in certs) else EXIT_FAILED


def cmd_converge(args) -> int:
    mu = parse_measure(args.measure)
    if args.exact and max(args.n_list) > EXACT_MAX_DEGREE:
        print(f"error: --exact is limited to N <= {EXACT_MAX_DEGREE}", file=sys.stderr)
        return EXIT_PARSE
    rows = run_converge(mu, args.n_list, float(Fraction(args.s)), exact=args.exact)
    header = row_header(ExperimentRow, timing=args.timing)
    data = [astuple(r)[: len(header)] for r in rows]
    _emit(_csv(header, data), args.out)
    if len(rows) >= 2:
        slope = fit_slope([r.N for r in rows], [r.delta for r in rows])
        print(f"# log-log slope of |delta| vs N: {slope:.6f}", file=sys.stderr)
    outside = [r.N for r in rows if not r.inside]
    if outside:
        print(f"error: delta outside the envelope for N in {outside}", file=sys.stderr)
        return EXIT_FAILED
    return 0


def cmd_boxplus_converge(args) -> int:
    mu, nu = parse_measure(args.mu), parse_measure(args.nu)
    rows = run_boxplus_converge(mu, nu, args.n_list, args.s_grid)
    _emit(_csv(row_header(BoxplusRow), [astuple(r) for r in rows]), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finitefree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--exact", action="store_true",
                        help=f"rational arithmetic (N <= {EXACT_MAX_DEGREE})")

    sp = sub.add_parser("convolve", help="finite free additive convolution of two polynomials")
    sp.add_argument("p")
    sp.add_argument("q")
    common(sp)
    sp.set_defaults(func=cmd_convolve)

    sp = sub.add_parser("cumulants", help="finite free cumulants as CSV")
    sp.add_argument("poly")
    sp.add_argument("--max-n", type=int)
    sp.add_argument("--check", action="store_true", help="cross-check with the Moebius sum")
    common(sp)
    sp.set_defaults(func=cmd_cumulants)

    sp = sub.add_parser("rtransform", help="finite R-transform over an s-grid")
    sp.add_argument("poly")
    sp.add_argument("--s-grid", type=parse_s_grid, required=True, help="lo:hi:count")
    common(sp)
    sp.set_defaults(func=cmd_rtransform)

    sp = sub.add_parser("bounds", help="certify the saddle-point inequalities at one s")
    sp.add_argument("poly")
    sp.add_argument("--s", required=True)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("converge", help="R^(N) - R^(inf) for quantile polynomials")
    sp.add_argument("measure", help="e.g. uniform:-2:-1")
    sp.add_argument("--n-list", type=parse_n_list, default=parse_n_list("8,16,32,64,128"))
    sp.add_argument("--s", required=True)
    sp.add_argument("--timing", action="store_true", help="add a runtime_ms column")
    common(sp)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("boxplus-converge", help="finite free convolution vs. free convolution")
    sp.add_argument("mu")
    sp.add_argument("nu")
    sp.add_argument("--n-list", type=parse_n_list, default=parse_n_list("16,32,64,128"))
    sp.add_argument("--s-grid", type=parse_s_grid, required=True, help="lo:hi:count")
    common(sp)
    sp.set_defaults(func=cmd_boxplus_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, MeasureSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
