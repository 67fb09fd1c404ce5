"""Command-line front end.

Exit codes: 0 success, 1 failed check, 2 bad arguments or syntax,
3 resource cap or non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .combinatorics import bell_poly, render_cell, stirling_degenerate
from .exact import as_rational
from .fock import ConvergenceError, dobinski_eval
from .parser import ParseError, normal_order
from .verify import SUITES, run_suite

MAX_STIRLING_N = 200


class UsageError(Exception):
    pass


class ResourceError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an exact rational such as 1/2") from exc


def _nonneg_real(text: str) -> Fraction:
    """Rational literal, or a decimal converted exactly from its double."""
    try:
        value = as_rational(text)
    except (ValueError, ZeroDivisionError):
        try:
            value = Fraction(float(text))
        except (ValueError, OverflowError) as exc:
            raise argparse.ArgumentTypeError(f"{text!r} is not a real number") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("x must be nonnegative")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normord",
        description="Degenerate Stirling numbers, Bell polynomials and normal ordering of boson operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", help="degenerate Stirling table")
    p.add_argument("--max-n", type=_nat, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational)
    p.add_argument("--format", choices=["plain", "json", "csv"], default="plain")

    p = sub.add_parser("bell", help="degenerate Bell polynomial")
    p.add_argument("--n", type=_nat, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational)
    p.add_argument("--x", type=_rational, help="evaluate at x (x=1 gives the Bell number)")
    p.add_argument("--format", choices=["plain", "json"], default="plain")

    p = sub.add_parser("normal-order", help="normal-order an operator expression")
    p.add_argument("expr")
    p.add_argument("--lambda", dest="lam", type=_rational)
    p.add_argument("--format", choices=["plain", "json"], default="plain")

    p = sub.add_parser("dobinski", help="evaluate the Dobinski-type series")
    p.add_argument("--k", type=_nat, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational, default=Fraction(0))
    p.add_argument("--x", type=_nonneg_real, default=Fraction(1))
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--format", choices=["plain", "json"], default="plain")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--max-n", type=_nat)
    p.add_argument("--max-k", type=_nat)
    p.add_argument("--order", type=_nat)
    p.add_argument("--words", type=_nat)
    p.add_argument("--seed", type=int)
    p.add_argument("--cutoff", type=_nat)
    p.add_argument("--tol", type=_positive_float)
    p.add_argument("--lambda", dest="lam", type=_rational)
    return parser


def cmd_stirling(args, out) -> int:
    if args.max_n > MAX_STIRLING_N:
        raise ResourceError(f"--max-n is capped at {MAX_STIRLING_N}")
    table = stirling_degenerate(args.max_n)
    if args.format == "csv":
        out.write(table.to_csv(args.lam))
    elif args.format == "json":
        rows = []
        for row in table.rows:
            if args.lam is None:
                rows.append([c.to_json() for c in row])
            else:
                rows.append([render_cell(c, args.lam) for c in row])
        lam = "symbolic" if args.lam is None else str(args.lam)
        out.write(json.dumps({"max_n": args.max_n, "lambda": lam, "rows": rows}) + "\n")
    else:
        for n, row in enumerate(table.rows):
            cells = row if n == 0 else row[1:]
            out.write(", ".join(render_cell(c, args.lam) for c in cells) + "\n")
    return 0


def cmd_bell(args, out) -> int:
    poly = bell_poly(args.n).poly
    assignments = {}
    if args.lam is not None:
        assignments["lambda"] = args.lam
    if args.x is not None:
        assignments["x"] = args.x
    value = poly.evaluate(assignments) if assignments else poly
    if args.format == "json":
        payload = value.to_json() if hasattr(value, "to_json") else str(value)
        out.write(json.dumps({"n": args.n, "value": payload}) + "\n")
    else:
        out.write(f"{value}\n")
    return 0


def cmd_normal_order(args, out) -> int:
    nf = normal_order(args.expr)
    if args.lam is not None:
        nf = nf.specialize({"lambda": args.lam})
    if args.format == "json":
        out.write(json.dumps(nf.to_json()) + "\n")
    else:
        out.write(nf.render() + "\n")
    return 0


def cmd_dobinski(args, out) -> int:
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    res = dobinski_eval(args.k, float(args.lam), float(args.x), args.tol)
    exact = bell_poly(args.k).poly.evaluate({"lambda": args.lam, "x": args.x})
    err = abs(res.value - float(exact))
    shifted_err = abs(res.shifted_value - float(exact))
    fields = {
        "k": args.k,
        "lambda": str(args.lam),
        "x": float(args.x),
        "tol": args.tol,
        "value": res.value,
        "shifted_value": res.shifted_value,
        "exact": str(exact),
        "error": err,
        "shifted_error": shifted_err,
        "terms": res.terms,
        "tail_bound": res.tail_bound,
    }
    if args.format == "json":
        out.write(json.dumps(fields) + "\n")
    else:
        for key, value in fields.items():
            out.write(f"{key}: {value!r}\n" if isinstance(value, float) else f"{key}: {value}\n")
    return 0 if err < 5 * args.tol and shifted_err < 5 * args.tol else 1


def cmd_verify(args, out) -> int:
    reports = run_suite(
        args.suite,
        max_n=args.max_n,
        max_k=args.max_k,
        order=args.order,
        words=args.words,
        seed=args.seed,
        cutoff=args.cutoff,
        tol=args.tol,
        lam=args.lam,
    )
    for r in reports:
        out.write(json.dumps(r) + "\n")
    return 0 if all(r["pass"] for r in reports) else 1


COMMANDS = {
    "stirling": cmd_stirling,
    "bell": cmd_bell,
    "normal-order": cmd_normal_order,
    "dobinski": cmd_dobinski,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ParseError as exc:
        err.write(json.dumps(exc.to_dict()) + "\n")
        return 2
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (ResourceError, ConvergenceError) as exc:
        err.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
