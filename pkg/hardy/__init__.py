import sys
import logging
from argparse import ArgumentDefaultsHelpFormatter, ArgumentParser

from hardy.errors import EXIT_USAGE, HardyError
from hardy.util import config_defaults, init, load_config
from hardy.cli import emit_error
from hardy.cli import (
    classify, compare, exponents, integrate, pl_check, residual, solve_bvp, table1,
    verify_inequality, verify_superposition,
)

modules = [
    'exponents', 'classify', 'table1', 'residual', 'verify_inequality',
    'verify_superposition', 'integrate', 'pl_check', 'solve_bvp', 'compare',
]

__version__ = '0.1.0'


class Parser(ArgumentParser):
    """ Usage errors exit with 64. """
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"> error: {message}\n")
        sys.exit(EXIT_USAGE)


def argparser():
    parser = Parser('hardy', formatter_class=ArgumentDefaultsHelpFormatter)

    parser.add_argument(
        '-v', '--version', action='version',
        version='%(prog)s {}'.format(__version__)
    )

    subparsers = parser.add_subparsers(
        title='subcommands', description='valid commands',
        help='additional help', dest='command'
    )
    subparsers.required = True

    for module in modules:
        mod = globals()[module]
        p = subparsers.add_parser(module.replace('_', '-'), parents=[mod.argparser()])
        p.set_defaults(func=mod.main)

    return parser, subparsers


def main(argv=None):
    parser, subparsers = argparser()
    args = parser.parse_args(argv)

    if args.config:
        try:
            config = load_config(args.config)
        except (OSError, HardyError) as exc:
            parser.error(str(exc))
        subparsers.choices[args.command].set_defaults(**config_defaults(config, args.command))
        args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="> %(name)s: %(message)s", stream=sys.stderr,
    )
    init(args.seed)

    try:
        code = args.func(args)
    except HardyError as exc:
        code = emit_error(args, exc)
    sys.exit(code)
