import argparse

from app.commands.common import EXIT_USAGE, CommandError, resolve_plan, shared_flags
from app.config import FresnelConfig
from app.exceptions import FresnelError
from app.services.bench_service import BenchService


def register(subparsers):
    parser = subparsers.add_parser("bench", parents=[shared_flags()],
                                   help="per-branch evaluation time and their max/min ratio")
    parser.add_argument("--samples", type=int, default=FresnelConfig.BENCH_SAMPLES,
                        help="evaluations per branch and repeat")
    parser.add_argument("--repeats", type=int, default=FresnelConfig.BENCH_REPEATS)
    parser.add_argument("--seed", type=int, default=FresnelConfig.SEED)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.samples < 1 or args.repeats < 1:
        raise CommandError(EXIT_USAGE, "--samples and --repeats must be positive.")
    try:
        report = BenchService.run(resolve_plan(args), samples=args.samples,
                                  repeats=args.repeats, seed=args.seed)
    except FresnelError as e:
        raise CommandError(EXIT_USAGE, f"Benchmark failed: {e}") from e

    if args.json:
        print(report.model_dump_json())
        return 0
    print(f"{'branch':<11} {'interval':>18} {'ns/eval':>10}")
    for t in report.timings:
        interval = f"[{t.lower:.3f}, {t.upper:.3f}]"
        print(f"{t.branch:<11} {interval:>18} {t.ns_per_eval:>10.1f}")
    print(f"max/min ratio: {report.ratio:.3f} (median of {report.repeats} x {report.samples})")
    return 0
