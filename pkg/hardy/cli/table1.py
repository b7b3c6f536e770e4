"""
Hardy table1 - sub/supersolution table of the improved Hardy potential.
"""

import sys

from hardy.errors import EXIT_INCONCLUSIVE, EXIT_OK
from hardy.family import resolve_epsilon, table1_suite
from hardy.cli import add_params, base_parser, emit, params_from


def main(args):
    params = params_from(args)
    cases = [resolve_epsilon(params, token) for token in args.epsilon.split(',') if token.strip()]
    report = table1_suite(
        params, cases, r0=args.r0, rmax=args.rmax, nodes=args.nodes,
        confirm_below=args.confirm_below, n_proc=args.threads, show_progress=not args.quiet,
    )
    for cell in report.failures.itertuples():
        sys.stderr.write(
            f"> unconfirmed: eps={cell.epsilon:.6g} {cell.column} ({cell.rule}) "
            f"expected {cell.expected}, got {cell.verdict} rho0={cell.rho0:.3g}\n"
        )
    return emit(args, report.to_dict(), EXIT_OK if report.confirmed else EXIT_INCONCLUSIVE, frame=report.frame)


def argparser():
    parser = base_parser()
    add_params(parser, potential=False)
    parser.add_argument(
        "--eps-list", "--epsilon", dest="epsilon", default="0,mid,cstar",
        help="comma separated: numbers, mid or cstar",
    )
    parser.add_argument("--r0", type=float, default=3.0)
    parser.add_argument("--rmax", type=float, default=1e6)
    parser.add_argument("--nodes", type=int, default=512)
    parser.add_argument("--confirm-below", type=float, default=1e4, help="largest rho0 that confirms a cell")
    parser.add_argument("--threads", type=int, default=0, help="worker processes (0 runs inline)")
    parser.add_argument("--quiet", action="store_true", default=False)
    return parser
