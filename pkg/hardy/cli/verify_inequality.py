"""
Hardy verify-inequality - property suites for the convexity inequality.
"""

import sys

from hardy.errors import EXIT_OK, EXIT_VIOLATION, UsageError
from hardy.inequality import REGIMES, Quadruple, convexity_gap, convexity_terms, quadruple_suite, regimes_for
from hardy.cli import base_parser, emit


def main(args):
    if args.quad:
        try:
            a, b, c, d = (float(x) for x in args.quad.split(','))
        except ValueError:
            raise UsageError(f"--quad expects a,b,c,d, got '{args.quad}'")
        q = 2.0 if args.q is None else args.q
        quad = Quadruple(a, b, c, d, q)
        lhs, rhs = convexity_terms(a, b, c, d, q)
        result = {"quadruple": quad, "gap": convexity_gap(quad), "lhs": float(lhs), "rhs": float(rhs)}
        return emit(args, result)

    if args.regime != "all":
        regimes = (args.regime,)
    else:
        regimes = REGIMES if args.q is None else regimes_for(args.q)
    reports = []
    for regime in regimes:
        report = quadruple_suite(regime, args.samples, args.seed, args.shards, n_proc=args.threads, q=args.q)
        sys.stderr.write(f"> {regime}: {report.violations} violations in {report.samples} samples\n")
        reports.append(report.to_dict())
    passed = all(report["passed"] for report in reports)
    return emit(args, {"suites": reports, "passed": passed}, EXIT_OK if passed else EXIT_VIOLATION)


def argparser():
    parser = base_parser()
    parser.add_argument("--regime", choices=("all",) + REGIMES, default="all")
    parser.add_argument("--samples", type=int, default=100_000, help="quadruples per regime")
    parser.add_argument("--shards", type=int, default=8, help="independent seed shards")
    parser.add_argument("--threads", type=int, default=0, help="worker processes (0 runs inline)")
    parser.add_argument("--quad", default=None, help="a,b,c,d: evaluate a single quadruple")
    parser.add_argument(
        "--q", type=float, default=None,
        help="fix the exponent of the random quadruples (only the regimes valid at q run); 2 for --quad",
    )
    return parser
