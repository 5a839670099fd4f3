"""Command-line interface.

Subcommands: bound, rational, sweep, density-grid, cubature,
reproduce-table1.  Exit codes: 0 success, 2 input error, 3 numerical or
certification failure, 4 reference-diff failure (reproduce-table1 only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bounds import CertificationError, ConditioningError, density_grid, extract_density, \
    rational_upper_bound, upper_bound
from .cubature import save_rule_csv, sphere_product_rule
from .harness import TABLE1_REFERENCE, TABLE1_TOLERANCE, fit_rate, reproduce_table1, \
    save_density_csv, save_sweep_csv, sweep
from .polynomials import ParseError, parse_poly

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4


def _read_poly(text, n):
    """Accept a polynomial literal or a path to a file holding one."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    return parse_poly(text, n)


def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _write_json(res, path):
    fh, close = _open_out(path)
    try:
        json.dump(res.to_json_dict(), fh, indent=2)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spherebound",
        description="Sum-of-squares density upper bounds for polynomial "
                    "minimization on the unit sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="single upper bound as JSON")
    b.add_argument("--poly", required=True, help="polynomial literal or file")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--dps", type=int, default=None,
                   help="decimal precision for the high-precision solve")
    b.add_argument("--json", default=None, help="output file (default stdout)")

    q = sub.add_parser("rational", help="rational-objective upper bound as JSON")
    q.add_argument("--p", required=True, help="numerator literal or file")
    q.add_argument("--q", required=True, help="denominator literal or file")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--dps", type=int, default=None)
    q.add_argument("--json", default=None)

    s = sub.add_parser("sweep", help="bounds over a level range as CSV")
    s.add_argument("--poly", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r-min", type=int, required=True)
    s.add_argument("--r-max", type=int, required=True)
    s.add_argument("--fmin", type=float, default=None,
                   help="known minimum; prints a rate fit to stderr")
    s.add_argument("--no-certificates", action="store_true",
                   help="skip cubature lower certificates")
    s.add_argument("--dps", type=int, default=None)
    s.add_argument("--csv", default=None, help="output file (default stdout)")

    g = sub.add_parser("density-grid", help="optimal density on a grid as CSV")
    g.add_argument("--poly", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--resolution", type=int, default=100)
    g.add_argument("--dps", type=int, default=None)
    g.add_argument("--csv", default=None)

    c = sub.add_parser("cubature", help="product cubature rule as CSV")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--csv", default=None)

    t = sub.add_parser("reproduce-table1",
                       help="recompute the published Motzkin bounds and diff")
    t.add_argument("--csv", default=None, help="also write the sweep CSV")
    return parser


def _cmd_bound(args):
    f = _read_poly(args.poly, args.n)
    res = upper_bound(f, args.n, args.r, dps=args.dps)
    _write_json(res, args.json)
    return EXIT_OK


def _cmd_rational(args):
    p = _read_poly(args.p, args.n)
    q = _read_poly(args.q, args.n)
    res = rational_upper_bound(p, q, args.n, args.r, dps=args.dps)
    _write_json(res, args.json)
    return EXIT_OK


def _cmd_sweep(args):
    f = _read_poly(args.poly, args.n)
    records = sweep(f, args.n, args.r_min, args.r_max, f_ref=args.fmin,
                    certificates=not args.no_certificates, dps=args.dps)
    fh, close = _open_out(args.csv)
    try:
        save_sweep_csv(records, fh)
    finally:
        if close:
            fh.close()
    if args.fmin is not None:
        fit = fit_rate(records, args.fmin)
        print(f"rate fit over r={fit.r_range[0]}..{fit.r_range[1]}: "
              f"slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
              f"residual={fit.residual:.2e}", file=sys.stderr)
    return EXIT_OK


def _cmd_density_grid(args):
    f = _read_poly(args.poly, args.n)
    res = upper_bound(f, args.n, args.r, dps=args.dps)
    grid = density_grid(extract_density(res), args.n, args.resolution)
    fh, close = _open_out(args.csv)
    try:
        save_density_csv(grid, fh)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _cmd_cubature(args):
    rule = sphere_product_rule(args.n, args.d)
    fh, close = _open_out(args.csv)
    try:
        save_rule_csv(rule, fh)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _cmd_reproduce_table1(args):
    records, diffs, ok = reproduce_table1()
    for rec, ref, diff in zip(records, TABLE1_REFERENCE, diffs):
        status = "ok" if abs(diff) <= TABLE1_TOLERANCE else "MISMATCH"
        print(f"r={rec.r}  computed={rec.bound:.6f}  reference={ref:.4f}  "
              f"diff={diff:+.2e}  {status}")
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8") as fh:
            save_sweep_csv(records, fh)
    if not ok:
        print(f"reference mismatch beyond {TABLE1_TOLERANCE:g}", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"all {len(records)} levels within {TABLE1_TOLERANCE:g}")
    return EXIT_OK


_HANDLERS = {
    "bound": _cmd_bound,
    "rational": _cmd_rational,
    "sweep": _cmd_sweep,
    "density-grid": _cmd_density_grid,
    "cubature": _cmd_cubature,
    "reproduce-table1": _cmd_reproduce_table1,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConditioningError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
