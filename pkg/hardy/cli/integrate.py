"""
Hardy integrate - radial trajectory from Cauchy data at r0.
"""

import numpy as np

from hardy.errors import InsufficientWindow
from hardy.ode import decay_fit, flux_balance, integrate, integrate_from
from hardy.family import RadialFamily
from hardy.cli import add_params, base_parser, emit, params_from, potential_from, require


def main(args):
    params = params_from(args)
    potential = potential_from(args, params)
    if args.family:
        u = RadialFamily.from_spec(args.family, params, potential)
        traj = integrate_from(params, potential, u, args.r0, args.rmax, args.tol, args.nodes)
    else:
        require(args, "phi0", "dphi0")
        traj = integrate(params, potential, args.r0, args.phi0, args.dphi0, args.rmax, args.tol, args.nodes)

    result = {"potential": potential.spec, **traj.to_dict()}
    try:
        result["decay_exponent"] = decay_fit(traj, (traj.nodes[3 * len(traj.nodes) // 4], traj.r1))
    except InsufficientWindow:
        result["decay_exponent"] = None
    if args.flux_balance:
        _, relative = flux_balance(traj)
        result["max_flux_defect"] = float(np.max(np.abs(relative))) if len(relative) else 0.0
    return emit(args, result, frame=traj.frame())


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--r0", type=float, default=1.0)
    parser.add_argument("--phi0", type=float, default=None)
    parser.add_argument("--dphi0", type=float, default=None)
    parser.add_argument("--family", default=None, help="take phi0 and dphi0 from this profile at r0")
    parser.add_argument("--rmax", type=float, default=100.0)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--nodes", type=int, default=512)
    parser.add_argument("--flux-balance", action="store_true", default=False)
    return parser
