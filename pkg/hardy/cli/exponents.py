"""
Hardy exponents - critical constants and exponent roots for (p, N).
"""

from hardy.exponents import hardy_report
from hardy.family import resolve_epsilon, resolve_lambda
from hardy.cli import add_params, base_parser, emit, params_from


def main(args):
    params = params_from(args)
    lam = None if args.lam is None else resolve_lambda(params, args.lam)
    epsilon = None if args.epsilon is None else resolve_epsilon(params, args.epsilon)
    return emit(args, hardy_report(params, lam, epsilon))


def argparser():
    parser = base_parser()
    add_params(parser, potential=False)
    parser.add_argument("--lambda", "--lam", dest="lam", default=None, help="Hardy strength: a number, mid or ch")
    parser.add_argument("--epsilon", default=None, help="improved Hardy strength: a number, mid or cstar")
    return parser
