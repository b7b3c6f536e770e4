"""
Hardy residual - pointwise residual of a family member.
"""

import numpy as np
import pandas as pd

from hardy.family import radial_L, residual, scaled_residual
from hardy.util import geometric_grid
from hardy.cli import add_params, base_parser, emit, family_from, params_from, potential_from


def main(args):
    params = params_from(args)
    potential = potential_from(args, params)
    u = family_from(args, "family", params, potential)
    if args.r:
        r = np.array([float(x) for x in args.r.split(',') if x.strip()])
    else:
        r = geometric_grid(args.r0, args.rmax, args.nodes)

    res = residual(params, u, potential, r)
    frame = pd.DataFrame({
        "r": r,
        "u": u(r),
        "du": u.derivative(r),
        "radial_L": radial_L(params, u, r),
        "residual": res,
        "scaled_residual": scaled_residual(params, u, potential, r),
    })
    result = {"family": str(u), "potential": potential.spec, "rows": frame.to_dict(orient="records")}
    return emit(args, result, frame=frame)


def argparser():
    parser = base_parser()
    add_params(parser)
    parser.add_argument("--family", default=None, help="alpha=..,beta=..,tau=..,c=..")
    parser.add_argument("--r", default=None, help="comma separated radii (overrides the grid)")
    parser.add_argument("--r0", type=float, default=3.0)
    parser.add_argument("--rmax", type=float, default=1e6)
    parser.add_argument("--nodes", type=int, default=16)
    return parser
