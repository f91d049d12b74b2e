import argparse
import csv
import sys

from app.commands.common import EXIT_USAGE, CommandError, format_real, resolve_plan, shared_flags
from app.exceptions import FresnelError
from app.services.evaluator_service import EvaluatorService


def register(subparsers):
    parser = subparsers.add_parser("table", parents=[shared_flags()],
                                   help="CSV of x, C, S and branch over a uniform grid")
    parser.add_argument("a", type=float)
    parser.add_argument("b", type=float)
    parser.add_argument("n", type=int)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        records = EvaluatorService.tabulate(args.a, args.b, args.n, resolve_plan(args))
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Could not tabulate [{args.a}, {args.b}]: {e}") from e

    if args.json:
        print("[" + ",".join(r.model_dump_json() for r in records) + "]")
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["x", "C", "S", "branch"])
    for r in records:
        writer.writerow([format_real(r.x), format_real(r.c), format_real(r.s), r.branch])
    return 0
