import argparse

import numpy as np

from app.commands.common import EXIT_USAGE, CommandError, shared_flags
from app.exceptions import FresnelError
from app.schemas import GoldenFileSummary
from app.services.oracle_service import OracleService


def default_points() -> list[float]:
    """Quarter steps over [0, 25] and a few decades beyond."""
    grid = np.linspace(0.0, 25.0, 101)
    far = np.array([50.0, 1e2, 1e3, 1e4, 1e6, 1e9])
    return np.concatenate([grid, far]).tolist()


def register(subparsers):
    parser = subparsers.add_parser("golden", parents=[shared_flags()],
                                   help="write oracle values x, C, S to 30 digits")
    parser.add_argument("path")
    parser.add_argument("--points", type=float, nargs="+", default=None,
                        help="arguments to tabulate (default: a fixed grid)")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    points = args.points if args.points is not None else default_points()
    try:
        count = OracleService.write_golden(args.path, points)
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Could not compute golden values: {e}") from e
    except OSError as e:
        raise CommandError(EXIT_USAGE, f"Could not write {args.path}: {e}") from e

    summary = GoldenFileSummary(path=args.path, count=count)
    if args.json:
        print(summary.model_dump_json())
    else:
        print(f"wrote {summary.count} values to {summary.path}")
    return 0
