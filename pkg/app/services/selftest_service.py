import logging
import math

import numpy as np

from app.config import FresnelConfig
from app.kernels import (
    asym_bound,
    asym_coefficients,
    asym_eval,
    taylor_bound,
    taylor_coefficients,
    taylor_eval,
    trap_bound,
    trap_constants,
    trap_eval,
)
from app.schemas import CheckResult, IntervalError, SelfTestReport
from app.services.evaluator_service import G_LIMIT, Branch, EvaluatorService
from app.services.oracle_service import OracleService
from app.services.planner_service import HybridPlan

logger = logging.getLogger(__name__)

TAYLOR_ORDERS = (6, 10, 14)
ASYM_ORDERS = (4, 8, 12)
TRAP_ORDER = 12
TRAP_SLACK = 1e-15
# kernel-level trapezoid suite samples the double plan's mid-range
TRAP_RANGE = (0.688, 6.725)


def _magnitude_ulp(value) -> float:
    return math.ulp(math.hypot(value.re, value.im))


def _worst(name: str, excesses: list[tuple[float, str]], threshold: float = 0.0) -> CheckResult:
    """Passes when no sample's error exceeds its own allowance."""
    worst, where = max(excesses, default=(-math.inf, ""))
    return CheckResult(
        name=name, passed=worst <= threshold, value=worst, threshold=threshold, detail=where,
    )


class SelfTestService:

    @staticmethod
    def taylor_bound_suite(samples: int, rng: np.random.Generator) -> CheckResult:
        """|oracle - T_N| <= taylor_bound + 4 ulp on [0, 1]."""
        excesses = []
        for order in TAYLOR_ORDERS:
            coeffs = taylor_coefficients(order)
            for x in rng.uniform(0.0, 1.0, size=samples):
                x = float(x)
                value = taylor_eval(x, coeffs)
                err = OracleService.oracle_g(x).distance(value)
                allowance = taylor_bound(x, order) + 4 * _magnitude_ulp(value)
                excesses.append((err - allowance, f"N={order} x={x!r}"))
        return _worst("taylor-bound-validity", excesses)

    @staticmethod
    def trapezoid_bound_suite(samples: int, rng: np.random.Generator) -> CheckResult:
        """|oracle - G_12| <= trap_bound(12) + round-off slack on the mid range."""
        tc = trap_constants(TRAP_ORDER)
        allowance = trap_bound(TRAP_ORDER) + TRAP_SLACK
        excesses = []
        for x in rng.uniform(*TRAP_RANGE, size=samples):
            x = float(x)
            err = OracleService.oracle_g(x).distance(trap_eval(x, tc))
            excesses.append((err - allowance, f"x={x!r}"))
        return _worst("trapezoid-bound-validity", excesses)

    @staticmethod
    def asymptotic_bound_suite(samples: int, rng: np.random.Generator) -> CheckResult:
        """|oracle - Q_N| <= asym_bound + 4 ulp on [4, 100]."""
        excesses = []
        for order in ASYM_ORDERS:
            coeffs = asym_coefficients(order)
            for x in rng.uniform(4.0, 100.0, size=samples):
                x = float(x)
                value = asym_eval(x, coeffs)
                err = OracleService.oracle_g(x).distance(value)
                allowance = asym_bound(x, order) + 4 * _magnitude_ulp(value)
                excesses.append((err - allowance, f"N={order} x={x!r}"))
        return _worst("asymptotic-bound-validity", excesses)

    @staticmethod
    def plan_bound_suite(plan: HybridPlan, samples: int, rng: np.random.Generator) -> CheckResult:
        """Every evaluated point's active bound stays within the plan target."""
        excesses = []
        for branch, lo, hi in EvaluatorService.branch_intervals(plan, FresnelConfig.TABLE_UPPER):
            for x in rng.uniform(lo, hi, size=samples):
                record = EvaluatorService.evaluate_record(float(x), plan)
                excesses.append((record.bound - plan.eps, f"{record.branch} x={record.x!r}"))
        return _worst("plan-bound-validity", excesses)

    @staticmethod
    def interval_errors(plan: HybridPlan, samples: int, rng: np.random.Generator,
                        upper: float = FresnelConfig.TABLE_UPPER) -> list[IntervalError]:
        """Max and mean |G~ - oracle| over random points of each subinterval."""
        results = []
        for branch, lo, hi in EvaluatorService.branch_intervals(plan, upper):
            errors = []
            for x in rng.uniform(lo, hi, size=samples):
                x = float(x)
                value, _ = EvaluatorService.fresnel_g(x, plan)
                errors.append(OracleService.oracle_g(x).distance(value))
            results.append(IntervalError(
                branch=branch.value, lower=lo, upper=hi, samples=samples,
                max_error=float(np.max(errors)), mean_error=float(np.mean(errors)),
            ))
        return results

    @classmethod
    def accuracy_suite(cls, plan: HybridPlan, samples: int, rng: np.random.Generator) -> list[CheckResult]:
        max_limit = max(1e-15, plan.eps + 5e-16)
        mean_limit = max(5e-16, plan.eps)
        checks = []
        for interval in cls.interval_errors(plan, samples, rng):
            checks.append(CheckResult(
                name=f"accuracy-max[{interval.branch}]", passed=interval.max_error <= max_limit,
                value=interval.max_error, threshold=max_limit,
            ))
            checks.append(CheckResult(
                name=f"accuracy-mean[{interval.branch}]", passed=interval.mean_error <= mean_limit,
                value=interval.mean_error, threshold=mean_limit,
            ))
        return checks

    @staticmethod
    def oddness_suite(plan: HybridPlan, samples: int, rng: np.random.Generator) -> CheckResult:
        """G~(-x) == -G~(x) bit for bit, cut-offs included."""
        xs = [plan.x1, plan.x2, *(10.0 ** rng.uniform(-6.0, 9.0, size=samples))]
        failures = 0
        for x in xs:
            x = float(x)
            plus, _ = EvaluatorService.fresnel_g(x, plan)
            minus, _ = EvaluatorService.fresnel_g(-x, plan)
            if minus != -plus:
                failures += 1
        return CheckResult(name="exact-oddness", passed=failures == 0, value=float(failures), threshold=0.0)

    @staticmethod
    def continuity_suite(plan: HybridPlan) -> list[CheckResult]:
        limit = max(1e-15, 2 * plan.eps + 5e-16)
        checks = []
        for name, inside, outside in (
            ("x1", plan.x1, math.nextafter(plan.x1, math.inf)),
            ("x2", math.nextafter(plan.x2, -math.inf), plan.x2),
        ):
            a, _ = EvaluatorService.fresnel_g(inside, plan)
            b, _ = EvaluatorService.fresnel_g(outside, plan)
            jump = math.hypot(a.re - b.re, a.im - b.im)
            checks.append(CheckResult(
                name=f"branch-continuity@{name}", passed=jump <= limit, value=jump, threshold=limit,
            ))
        return checks

    @staticmethod
    def dispatch_suite(plan: HybridPlan) -> CheckResult:
        down, up = -math.inf, math.inf
        expected = [
            (math.nextafter(plan.x1, down), Branch.TAYLOR),
            (plan.x1, Branch.TAYLOR),
            (math.nextafter(plan.x1, up), Branch.TRAPEZOID),
            (math.nextafter(plan.x2, down), Branch.TRAPEZOID),
            (plan.x2, Branch.ASYMPTOTIC),
            (math.nextafter(plan.x2, up), Branch.ASYMPTOTIC),
        ]
        wrong = [x for x, branch in expected if EvaluatorService.fresnel_g(x, plan)[1].branch is not branch]
        return CheckResult(
            name="branch-dispatch", passed=not wrong, value=float(len(wrong)), threshold=0.0,
            detail=", ".join(repr(x) for x in wrong) or None,
        )

    @staticmethod
    def envelope_suite(plan: HybridPlan, samples: int, rng: np.random.Generator) -> CheckResult:
        """|G~(x) - (1+i)/2| <= 2/(pi x) beyond x2."""
        xs = [*rng.uniform(plan.x2, 100.0, size=samples), 1e3, 1e6, 1e9]
        excesses = []
        for x in xs:
            x = float(x)
            value, _ = EvaluatorService.fresnel_g(x, plan)
            gap = math.hypot(value.re - G_LIMIT.re, value.im - G_LIMIT.im)
            excesses.append((gap - 2.0 / (math.pi * x), f"x={x!r}"))
        return _worst("asymptotic-envelope", excesses)

    @classmethod
    def run(cls, plan: HybridPlan, samples: int = FresnelConfig.SELFTEST_SAMPLES,
            seed: int = FresnelConfig.SEED) -> SelfTestReport:
        """Oracle self-check followed by every property suite at the given sample count."""
        rng = np.random.default_rng(seed)
        checks = list(OracleService.oracle_selfcheck(seed).checks)
        checks.append(cls.taylor_bound_suite(samples, rng))
        checks.append(cls.trapezoid_bound_suite(samples, rng))
        checks.append(cls.asymptotic_bound_suite(samples, rng))
        checks.append(cls.plan_bound_suite(plan, samples, rng))
        checks.extend(cls.accuracy_suite(plan, samples, rng))
        checks.append(cls.oddness_suite(plan, samples, rng))
        checks.extend(cls.continuity_suite(plan))
        checks.append(cls.dispatch_suite(plan))
        checks.append(cls.envelope_suite(plan, samples, rng))

        for check in checks:
            level = logging.INFO if check.passed else logging.WARNING
            logger.log(level, "%s: %s", check.name, "pass" if check.passed else "FAIL")
        return SelfTestReport(passed=all(c.passed for c in checks), checks=checks)
