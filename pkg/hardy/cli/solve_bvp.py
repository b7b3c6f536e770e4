"""
Hardy solve-bvp - shooting solver for φ(r0) = inner, φ(R0) = outer.
"""

from hardy.comparison import BvpProblem, shooting_profile, solve_bvp
from hardy.family import Annulus
from hardy.cli import add_params, base_parser, emit, params_from, potential_from, require


def main(args):
    require(args, "inner", "outer")
    params = params_from(args)
    potential = potential_from(args, params)
    prob = BvpProblem(params, potential, Annulus(args.r0, args.R0), args.inner, args.outer)
    traj = solve_bvp(prob, args.tol, nodes=args.nodes)

    result = {
        "potential": potential.spec,
        "slope": float(traj.derivative[0]),
        "boundary_residual": abs(float(traj.values[-1]) - prob.outer),
        **traj.to_dict(),
    }
    if args.profile:
        result["shooting"] = shooting_profile(prob).to_dict()
    return emit(args, result, frame=traj.frame())


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--r0", type=float, default=1.0)
    parser.add_argument("--R0", type=float, default=2.0)
    parser.add_argument("--inner", type=float, default=None, help="value at r0")
    parser.add_argument("--outer", type=float, default=None, help="value at R0")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--nodes", type=int, default=512)
    parser.add_argument("--profile", action="store_true", default=False, help="report the outer value per slope")
    return parser
