import argparse
import logging

from app.commands.common import EXIT_FAILURE, EXIT_USAGE, CommandError, resolve_plan, shared_flags
from app.config import FresnelConfig
from app.exceptions import DomainError, FresnelError, PlannerError
from app.services.planner_service import PlannerService
from app.services.selftest_service import SelfTestService

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("selftest", parents=[shared_flags()],
                                   help="oracle self-check and property suites; exit 0 iff all pass")
    parser.add_argument("--samples", type=int, default=FresnelConfig.SELFTEST_SAMPLES,
                        help="random points per suite")
    parser.add_argument("--seed", type=int, default=FresnelConfig.SEED)
    # fault injection: replaces x1 without re-checking the plan
    parser.add_argument("--inject-x1", type=float, default=None, help=argparse.SUPPRESS)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        plan = resolve_plan(args)
    except (DomainError, PlannerError) as e:
        raise CommandError(EXIT_USAGE, f"Could not build the plan under test: {e}") from e
    if args.samples < 1:
        raise CommandError(EXIT_USAGE, f"--samples must be positive, got {args.samples}.")

    if args.inject_x1 is not None:
        logger.warning("Injecting x1=%s into the plan under test", args.inject_x1)
        plan = PlannerService.custom_plan(plan.eps, plan.n_taylor, plan.n_trap, plan.n_asym,
                                          args.inject_x1, plan.x2, check=False)

    try:
        report = SelfTestService.run(plan, samples=args.samples, seed=args.seed)
    except FresnelError as e:
        raise CommandError(EXIT_FAILURE, f"Self-test aborted: {e}") from e

    if args.json:
        print(report.model_dump_json())
    else:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            line = f"{status}  {check.name}"
            if check.value is not None:
                line += f"  value={check.value:.3e}"
            if check.threshold is not None:
                line += f"  limit={check.threshold:.3e}"
            if not check.passed and check.detail:
                line += f"  ({check.detail})"
            print(line)
        print("selftest: " + ("all checks passed" if report.passed else "FAILED"))
    return 0 if report.passed else EXIT_FAILURE
