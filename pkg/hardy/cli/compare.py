"""
Hardy compare - comparison principle, growth dichotomy and quotient scans on annuli.
"""

import sys

from hardy.comparison import comparison_suite, comparison_verify, growth_dichotomy_check, quotient_suite
from hardy.errors import EXIT_OK, EXIT_VIOLATION
from hardy.family import RadialFamily
from hardy.ode import quotient_extrema_scan
from hardy.cli import (
    add_annulus, add_params, annulus_from, base_parser, emit, family_from, grid_from,
    params_from, potential_from,
)


def main(args):
    if args.trials:
        suite = quotient_suite if args.mode == "quotient" else comparison_suite
        records, failures = suite(args.trials, args.seed, n_proc=args.threads, show_progress=not args.quiet)
        sys.stderr.write(f"> {len(failures)} failures in {len(records)} random pairs\n")
        result = {"trials": len(records), "failures": failures, "passed": not failures}
        return emit(args, result, EXIT_VIOLATION if failures else EXIT_OK)

    params = params_from(args)
    potential = potential_from(args, params)
    u = family_from(args, "u", params, potential)
    v = family_from(args, "v", params, potential)
    ann, grid = annulus_from(args), grid_from(args)
    head = {"u": str(u), "v": str(v), "potential": potential.spec}

    if args.mode == "growth":
        report = growth_dichotomy_check(params, potential, u, v, ann, grid)
        return emit(args, {**head, **report.to_dict()}, EXIT_VIOLATION if report.regime == "neither" else EXIT_OK)
    if args.mode == "quotient":
        report = quotient_extrema_scan(params, u, v, potential, ann, grid)
        return emit(args, {**head, **report.to_dict()}, EXIT_VIOLATION if report.counterexample else EXIT_OK)

    witness = RadialFamily.from_spec(args.witness, params, potential) if args.witness else None
    report = comparison_verify(params, potential, ann, u, v, grid, witness)
    return emit(args, {**head, **report.to_dict()}, EXIT_OK if report.holds else EXIT_VIOLATION)


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--u", default=None, help="subsolution, alpha=..,beta=..,tau=..,c=..")
    parser.add_argument("--v", default=None, help="supersolution")
    add_annulus(parser, r0=1.0, R0=10.0)
    parser.add_argument("--mode", choices=("comparison", "growth", "quotient"), default="comparison")
    parser.add_argument("--witness", default=None, help="strict supersolution certifying the principle")
    parser.add_argument("--trials", type=int, default=0, help="run the randomized suite of the mode instead (catalog pairs for quotient)")
    parser.add_argument("--threads", type=int, default=0, help="worker processes (0 runs inline)")
    parser.add_argument("--quiet", action="store_true", default=False)
    return parser
