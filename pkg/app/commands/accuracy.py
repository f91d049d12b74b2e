import argparse

import numpy as np

from app.commands.common import EXIT_USAGE, CommandError, resolve_plan, shared_flags
from app.config import FresnelConfig
from app.exceptions import FresnelError
from app.schemas import AccuracyReport
from app.services.selftest_service import SelfTestService


def register(subparsers):
    parser = subparsers.add_parser("accuracy", parents=[shared_flags()],
                                   help="max and mean error against the oracle per subinterval")
    parser.add_argument("--samples", type=int, default=FresnelConfig.ACCURACY_SAMPLES)
    parser.add_argument("--upper", type=float, default=FresnelConfig.TABLE_UPPER,
                        help="right end of the asymptotic subinterval")
    parser.add_argument("--seed", type=int, default=FresnelConfig.SEED)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.samples < 1:
        raise CommandError(EXIT_USAGE, f"--samples must be positive, got {args.samples}.")
    try:
        plan = resolve_plan(args)
        rng = np.random.default_rng(args.seed)
        intervals = SelfTestService.interval_errors(plan, args.samples, rng, upper=args.upper)
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Accuracy run failed: {e}") from e

    report = AccuracyReport(plan=plan.summary(), intervals=intervals)
    if args.json:
        print(report.model_dump_json())
        return 0
    print(f"{'branch':<11} {'interval':>18} {'max error':>11} {'mean error':>11}")
    for i in report.intervals:
        interval = f"[{i.lower:.3f}, {i.upper:.3f}]"
        print(f"{i.branch:<11} {interval:>18} {i.max_error:>11.3e} {i.mean_error:>11.3e}")
    return 0
