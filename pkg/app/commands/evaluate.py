import argparse

from app.commands.common import EXIT_USAGE, CommandError, format_real, resolve_plan, shared_flags
from app.exceptions import FresnelError
from app.services.evaluator_service import EvaluatorService


def register(subparsers):
    parser = subparsers.add_parser("eval", parents=[shared_flags()], help="evaluate C(x) and S(x)")
    parser.add_argument("x", type=float)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        record = EvaluatorService.evaluate_record(args.x, resolve_plan(args))
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Could not evaluate at x={args.x}: {e}") from e

    if args.json:
        print(record.model_dump_json())
    else:
        print(f"{format_real(record.c)} {format_real(record.s)}")
    return 0
