import argparse
import logging
import sys

from app.commands import accuracy, bench, clothoid, evaluate, golden, plan, selftest, table
from app.commands.common import EXIT_USAGE, CommandError, add_shared_flags
from app.config import FresnelConfig

COMMANDS = (evaluate, table, plan, clothoid, selftest, bench, accuracy, golden)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fresnel",
        description="Fresnel integrals C(x), S(x) with analytic error bounds.",
    )
    # accepted before or after the command name
    add_shared_flags(parser)
    subparsers = parser.add_subparsers(dest="command", required=True)
    # Bind all command modules
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, FresnelConfig.LOG_LEVEL.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        FresnelConfig.validate()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        return args.handler(args)
    except CommandError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
