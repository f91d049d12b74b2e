import argparse

from app.commands.common import EXIT_USAGE, CommandError, format_real, resolve_plan, shared_flags
from app.exceptions import FresnelError


def register(subparsers):
    parser = subparsers.add_parser("plan", parents=[shared_flags()],
                                   help="orders, cut-offs and achieved bounds for a target accuracy")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        summary = resolve_plan(args).summary()
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Planning failed: {e}") from e

    # the plan is JSON either way; --json only drops the indentation
    if args.json:
        print(summary.model_dump_json())
    else:
        print(summary.model_dump_json(indent=2))
        if summary.eps < 2.0 ** -53:
            print(f"note: eps={format_real(summary.eps)} is below double-precision round-off")
    return 0
