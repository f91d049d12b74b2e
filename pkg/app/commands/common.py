import argparse

from app.config import FresnelConfig
from app.services.planner_service import HybridPlan, PlannerService


class CommandError(Exception):
    """Carries the process exit code and the message printed to stderr."""

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


EXIT_FAILURE = 1
EXIT_USAGE = 2


def add_shared_flags(parser: argparse.ArgumentParser, suppress: bool = False) -> None:
    """--eps and --json; the root parser owns the defaults, subcommands only override."""
    parser.add_argument("--eps", type=float, default=argparse.SUPPRESS if suppress else None,
                        help="target absolute accuracy; replans instead of using the pinned double plan")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="machine-readable output")


def shared_flags() -> argparse.ArgumentParser:
    """Parent parser with the flags every command accepts."""
    parser = argparse.ArgumentParser(add_help=False)
    add_shared_flags(parser, suppress=True)
    return parser


def resolve_plan(args: argparse.Namespace) -> HybridPlan:
    # --eps wins over FRESNEL_PLAN_FILE, which wins over the pinned plan
    if args.eps is not None:
        return PlannerService.plan(args.eps)
    if FresnelConfig.PLAN_FILE:
        return PlannerService.load_plan_file(FresnelConfig.PLAN_FILE)
    return PlannerService.default_double_plan()


def format_real(value: float) -> str:
    """17 significant digits: round-trip exact for binary64."""
    return format(value, ".17g")
