import argparse
import csv
import sys

from app.commands.common import EXIT_USAGE, CommandError, format_real, resolve_plan, shared_flags
from app.exceptions import FresnelError
from app.schemas import ClothoidRow
from app.services.evaluator_service import EvaluatorService


def register(subparsers):
    parser = subparsers.add_parser("clothoid", parents=[shared_flags()],
                                   help="CSV of clothoid points (C(s), S(s))")
    parser.add_argument("s0", type=float)
    parser.add_argument("s1", type=float)
    parser.add_argument("n", type=int)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        points = EvaluatorService.clothoid_sample(args.s0, args.s1, args.n, resolve_plan(args))
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Could not sample the clothoid: {e}") from e

    if args.json:
        rows = [ClothoidRow(s=p.s, c=p.c, sv=p.sv).model_dump_json() for p in points]
        print("[" + ",".join(rows) + "]")
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["s", "C", "S"])
    for p in points:
        writer.writerow([format_real(p.s), format_real(p.c), format_real(p.sv)])
    return 0
