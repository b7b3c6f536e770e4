"""
Hardy command line helpers shared by the subcommands.
"""

import sys
import json
import math
from pathlib import Path
from datetime import datetime, timezone
from argparse import ArgumentDefaultsHelpFormatter, ArgumentParser

from hardy.errors import EXIT_OK, UsageError
from hardy.exponents import Params
from hardy.family import Annulus, RadialFamily, potential_from_spec
from hardy.util import SCHEMA_VERSION, GridSpec, dump_config, to_jsonable


INTERNAL = ('func', 'command', 'config', 'save_config', 'output', 'no_timestamp', 'verbose')


def base_parser():
    """
    Arguments every subcommand takes: seeding, report output and config files.
    """
    parser = ArgumentParser(formatter_class=ArgumentDefaultsHelpFormatter, add_help=False)
    parser.add_argument("--seed", type=int, default=0, help="seed recorded in (and used by) the report")
    parser.add_argument(
        "--out", choices=["json", "csv", "text"], default="json",
        help="report format: json, csv evidence or key: value lines",
    )
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")
    parser.add_argument("--config", default=None, help="key = value file of defaults; flags win")
    parser.add_argument("--save-config", default=None, help="dump the resolved configuration as toml")
    parser.add_argument("--no-timestamp", action="store_true", default=False)
    parser.add_argument("--verbose", action="store_true", default=False)
    return parser


def add_params(parser, potential=True):
    parser.add_argument("--p", type=float, default=None, help="exponent of the p-Laplacian, p > 1")
    parser.add_argument("--N", type=int, default=None, help="dimension, N >= 2")
    if potential:
        parser.add_argument(
            "--potential", default="zero",
            help="zero, hardy:<lambda>, improved:<epsilon> or table:<csv>; strengths may be ch, cstar or mid",
        )


def add_annulus(parser, r0=3.0, R0=math.inf, nodes=512, rmax=1e6):
    parser.add_argument("--r0", type=float, default=r0, help="inner radius")
    parser.add_argument("--R0", type=float, default=R0, help="outer radius (inf for an exterior domain)")
    parser.add_argument("--nodes", type=int, default=nodes, help="geometric grid nodes")
    if rmax is not None:
        parser.add_argument("--rmax", type=float, default=rmax, help="grid end for unbounded annuli")


def add_family(parser):
    """
    Profile exponents as separate flags, an alternative to a profile string.
    """
    parser.add_argument("--alpha", default=None, help="power of r: a number, critical, alpha_lower or alpha_upper")
    parser.add_argument("--beta", default=None, help="power of log r: a number, beta_lower or beta_upper")
    parser.add_argument("--tau", default=None, help="power of log log r")
    parser.add_argument("--c", default=None, help="amplitude")


def require(args, *names):
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name, None) is None]
    if missing:
        raise UsageError(f"missing required argument(s): {', '.join(missing)}")


def params_from(args):
    require(args, "p", "N")
    return Params(args.p, args.N)


def potential_from(args, params):
    return potential_from_spec(args.potential, params)


def family_from(args, name, params, potential):
    require(args, name)
    return RadialFamily.from_spec(getattr(args, name), params, potential)


def family_from_terms(args, name, params, potential):
    """
    The profile string `--<name>`, or one assembled from --alpha, --beta, --tau and --c.
    """
    if getattr(args, name, None) is not None:
        return family_from(args, name, params, potential)
    terms = [
        f"{key}={getattr(args, key)}" for key in ("alpha", "beta", "tau", "c")
        if getattr(args, key, None) is not None
    ]
    if not terms:
        raise UsageError(f"missing required argument(s): --{name} or --alpha")
    return RadialFamily.from_spec(",".join(terms), params, potential)


def annulus_from(args):
    return Annulus(args.r0, args.R0)


def grid_from(args):
    return GridSpec(nodes=args.nodes, rmax=args.rmax)


def resolved_config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in INTERNAL}


def _write(args, text):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def envelope(args, **content):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "seed": args.seed,
        "config": resolved_config(args),
        **content,
    }
    if not args.no_timestamp:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    return payload


def as_text(payload):
    """
    `key: value` lines; nested tables are flattened one level as `table.key`.
    """
    def show(value):
        return value if isinstance(value, str) else json.dumps(value, sort_keys=True)

    lines = []
    for key, value in sorted(payload.items()):
        if isinstance(value, dict):
            lines.extend(f"{key}.{k}: {show(v)}" for k, v in sorted(value.items()))
        else:
            lines.append(f"{key}: {show(value)}")
    return "\n".join(lines) + "\n"


def _report(args, payload):
    payload = to_jsonable(payload)
    if args.out == "text":
        return as_text(payload)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit(args, result, exit_code=EXIT_OK, frame=None):
    """
    Write `result` (or `frame` for --out csv) and return the exit code.
    """
    if args.save_config:
        dump_config(resolved_config(args), args.save_config)
    if args.out == "csv" and frame is not None:
        _write(args, frame.to_csv(index=False))
    else:
        _write(args, _report(args, envelope(args, exit_code=exit_code, result=result)))
    return exit_code


def emit_error(args, exc):
    sys.stderr.write(f"> error: {exc}\n")
    _write(args, _report(args, envelope(args, exit_code=exc.exit_code, error=exc.to_dict())))
    return exc.exit_code
