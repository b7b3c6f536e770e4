"""
Hardy pl-check - finite horizon evidence for the Phragmén-Lindelöf alternatives.
"""

import sys

from hardy.catalog import catalog_check, catalog_pairs
from hardy.errors import EXIT_INCONCLUSIVE, EXIT_OK
from hardy.family import resolve_epsilon, resolve_lambda
from hardy.ode import Trend, pl_alternative
from hardy.cli import (
    add_annulus, add_params, annulus_from, base_parser, emit, family_from, params_from, potential_from,
)


def main(args):
    params = params_from(args)

    if args.catalog:
        lam = None if args.lam is None else resolve_lambda(params, args.lam)
        epsilon = None if args.epsilon is None else resolve_epsilon(params, args.epsilon)
        pairs = catalog_pairs(params, lam, epsilon, args.tau)
        results = catalog_check(params, pairs, r0=args.r0, horizon=args.horizon, nodes=args.nodes)
        for result in results:
            if not result["confirmed"]:
                sys.stderr.write(
                    f"> unconfirmed: {result['name']} expected {result['expected']}, got {result['supports']}\n"
                )
        confirmed = all(result["confirmed"] for result in results)
        return emit(args, {"pairs": results, "confirmed": confirmed}, EXIT_OK if confirmed else EXIT_INCONCLUSIVE)

    potential = potential_from(args, params)
    u = family_from(args, "u", params, potential)
    w = family_from(args, "w", params, potential)
    diagnostic = pl_alternative(params, u, w, annulus_from(args), horizon=args.horizon, nodes=args.nodes)
    result = {"u": str(u), "w": str(w), **diagnostic.to_dict(evidence=args.evidence)}
    return emit(args, result, EXIT_INCONCLUSIVE if diagnostic.trend is Trend.OSCILLATING else EXIT_OK)


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--u", default=None, help="subsolution profile, alpha=..,beta=..,tau=..,c=..")
    parser.add_argument("--w", default=None, help="supersolution profile")
    add_annulus(parser, rmax=None)
    parser.add_argument("--rmax", "--horizon", dest="horizon", type=float, default=1e8, help="largest sampled radius")
    parser.add_argument("--catalog", action="store_true", default=False, help="run every catalog pair for (p, N)")
    parser.add_argument("--lambda", "--lam", dest="lam", default=None, help="catalog Hardy strength (default C_H/2)")
    parser.add_argument("--epsilon", default=None, help="catalog improved strength (default C_*/2)")
    parser.add_argument("--tau", type=float, default=None, help="catalog log log exponent (default 1/p)")
    parser.add_argument("--evidence", action="store_true", default=False)
    return parser
