"""
Hardy classify - residual sign of u = c r^α log^β r (log log r)^τ.
"""

from hardy.errors import EXIT_INCONCLUSIVE, EXIT_OK
from hardy.family import Verdict, classify
from hardy.cli import (
    add_annulus, add_family, add_params, annulus_from, base_parser, emit, family_from_terms, grid_from,
    params_from, potential_from,
)


def main(args):
    params = params_from(args)
    potential = potential_from(args, params)
    u = family_from_terms(args, "family", params, potential)
    report = classify(params, u, potential, annulus_from(args), grid_from(args))

    result = {"family": str(u), "potential": potential.spec, **report.to_dict(evidence=args.evidence)}
    inconclusive = report.verdict in (Verdict.MIXED_SIGN, Verdict.NEITHER)
    return emit(args, result, EXIT_INCONCLUSIVE if inconclusive else EXIT_OK, frame=report.evidence)


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--family", default=None, help="alpha=..,beta=..,tau=..,c=.. (or the flags below)")
    add_family(parser)
    add_annulus(parser)
    parser.add_argument("--evidence", action="store_true", default=False, help="include the sampled residuals")
    return parser
