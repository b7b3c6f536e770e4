"""
Hardy verify-superposition - u - v for ordered sub/supersolution pairs.
"""

import sys

from hardy.errors import EXIT_OK, EXIT_VIOLATION, UsageError
from hardy.family import RadialFamily
from hardy.inequality import (
    admissible_pair, superposition_check, superposition_suite, supersolution_difference_check,
)
from hardy.cli import (
    add_annulus, add_params, annulus_from, base_parser, emit, family_from, grid_from,
    params_from, potential_from,
)


def main(args):
    if args.trials:
        records, failures = superposition_suite(
            args.trials, args.seed, n_proc=args.threads, show_progress=not args.quiet,
        )
        skipped = sum(record["holds"] is None for record in records)
        sys.stderr.write(f"> {len(failures)} failures in {len(records)} random pairs ({skipped} skipped)\n")
        result = {"trials": len(records), "skipped": skipped, "failures": failures, "passed": not failures}
        return emit(args, result, EXIT_VIOLATION if failures else EXIT_OK)

    params = params_from(args)
    potential = potential_from(args, params)
    u, v = pair_from(args, params, potential)
    ann, grid = annulus_from(args), grid_from(args)
    if args.admissible:
        u, v = admissible_pair(u, v, ann.grid(grid))

    check = supersolution_difference_check if args.difference else superposition_check
    report = check(params, u, v, potential, ann, grid)
    result = {"u": str(u), "v": str(v), "potential": potential.spec, **report.to_dict()}
    return emit(args, result, EXIT_OK if report.holds else EXIT_VIOLATION)


def pair_from(args, params, potential):
    """
    (u, v) from `--pair-spec u;v` or from --u and --v.
    """
    if args.pair_spec is None:
        return family_from(args, "u", params, potential), family_from(args, "v", params, potential)
    specs = args.pair_spec.split(';')
    if len(specs) != 2:
        raise UsageError(f"--pair-spec expects '<u profile>;<v profile>', got '{args.pair_spec}'")
    return tuple(RadialFamily.from_spec(spec, params, potential) for spec in specs)


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--u", default=None, help="the larger profile, alpha=..,beta=..,tau=..,c=..")
    parser.add_argument("--v", default=None, help="the smaller profile")
    parser.add_argument("--pair-spec", default=None, help="both profiles at once: '<u profile>;<v profile>'")
    add_annulus(parser, r0=1.0, R0=100.0)
    parser.add_argument("--admissible", action="store_true", default=False, help="rescale v below u first")
    parser.add_argument("--difference", action="store_true", default=False,
                        help="check u - v is a supersolution (1 < p <= 2, u super and v sub)")
    parser.add_argument("--trials", type=int, default=0, help="run the randomized suite instead")
    parser.add_argument("--threads", type=int, default=0, help="worker processes (0 runs inline)")
    parser.add_argument("--quiet", action="store_true", default=False)
    return parser
