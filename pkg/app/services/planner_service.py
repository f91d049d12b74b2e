import json
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from app.exceptions import DomainError, PlannerError
from app.kernels import (
    AsymCoefficients,
    TaylorCoefficients,
    TrapCoefficients,
    asym_bound,
    asym_coefficients,
    taylor_bound,
    taylor_coefficients,
    trap_bound,
    trap_constants,
)
from app.schemas import PlanSummary

logger = logging.getLogger(__name__)

DOUBLE_EPS = 2.0 ** -52
EPS_FLOOR = 2.0 ** -75
EPS_CEILING = 1e-2

# Double-precision parameters; pinned, never re-derived
DOUBLE_ORDERS = (14, 12, 12)
DOUBLE_CUTOFFS = (0.688, 6.725)

_MAX_TRAP_ORDER = 60
_CUTOFF_STEP = 1e-3

OrderRule = Callable[[int], tuple[int, int]]


@dataclass(frozen=True)
class HybridPlan:
    eps: float
    n_taylor: int
    n_trap: int
    n_asym: int
    x1: float
    x2: float
    taylor_coeffs: TaylorCoefficients
    trap_coeffs: TrapCoefficients
    asym_coeffs: AsymCoefficients
    achieved: tuple[float, float, float]

    def summary(self) -> PlanSummary:
        return PlanSummary(
            eps=self.eps,
            n_taylor=self.n_taylor,
            n_trap=self.n_trap,
            n_asym=self.n_asym,
            x1=self.x1,
            x2=self.x2,
            achieved=list(self.achieved),
        )


def balance_orders(n_trap: int) -> tuple[int, int]:
    """Default cost-balance rule: N1 = ceil(7*N2/6), N3 = N2.

    Taylor terms are cheaper than trapezoid terms once coefficients are
    precomputed, hence the slightly higher Taylor order. Gives (14, 12) at N2 = 12.
    """
    return math.ceil(7 * n_trap / 6), n_trap


def _check_eps(eps: float):
    if not (EPS_FLOOR <= eps <= EPS_CEILING):
        raise DomainError(
            f"Target accuracy must lie in [2^-75, 1e-2], got {eps!r}."
        )


def _bisect(fn: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Shrinks [lo, hi] around the sign change of fn (fn(lo) <= 0 < fn(hi))."""
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if fn(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


class PlannerService:

    @staticmethod
    def min_trap_order(eps: float) -> int:
        """Smallest N >= 1 with trap_bound(N) <= eps, by upward scan."""
        for order in range(1, _MAX_TRAP_ORDER + 1):
            if trap_bound(order) <= eps:
                return order
        raise PlannerError(f"No trapezoid order up to {_MAX_TRAP_ORDER} reaches eps={eps!r}.")

    @staticmethod
    def solve_x1(order: int, eps: float) -> float:
        """Largest 3-decimal x with taylor_bound(x, N) <= eps."""
        if order < 0:
            raise DomainError(f"Taylor order must be >= 0, got {order}.")
        hi = 1.0
        while taylor_bound(hi, order) <= eps:
            hi *= 2.0
        lo, _ = _bisect(lambda x: taylor_bound(x, order) - eps, 0.0, hi)

        x1 = math.floor(lo / _CUTOFF_STEP) * _CUTOFF_STEP
        x1 = round(x1, 3)
        # decimal rounding of the product can land one step too high
        while x1 > 0 and taylor_bound(x1, order) > eps:
            x1 = round(x1 - _CUTOFF_STEP, 3)
        return x1

    @staticmethod
    def solve_x2(order: int, eps: float) -> float:
        """Smallest 3-decimal x with asym_bound(x, N) <= eps."""
        if order < 0:
            raise DomainError(f"Asymptotic order must be >= 0, got {order}.")
        lo = 1.0
        while asym_bound(lo, order) <= eps:
            lo *= 0.5
        hi = 2.0 * lo
        while asym_bound(hi, order) > eps:
            hi *= 2.0
        _, hi = _bisect(lambda x: eps - asym_bound(x, order), lo, hi)

        x2 = round(math.ceil(hi / _CUTOFF_STEP) * _CUTOFF_STEP, 3)
        while asym_bound(x2, order) > eps:
            x2 = round(x2 + _CUTOFF_STEP, 3)
        return x2

    @staticmethod
    def custom_plan(eps: float, n_taylor: int, n_trap: int, n_asym: int,
                    x1: float, x2: float, check: bool = True) -> HybridPlan:
        """
        Builds coefficient tables for explicit parameters. With check=True every
        plan invariant is verified; check=False is reserved for fault injection.
        """
        achieved = (taylor_bound(x1, n_taylor), trap_bound(n_trap), asym_bound(x2, n_asym))
        plan = HybridPlan(
            eps=eps,
            n_taylor=n_taylor,
            n_trap=n_trap,
            n_asym=n_asym,
            x1=x1,
            x2=x2,
            taylor_coeffs=taylor_coefficients(n_taylor),
            trap_coeffs=trap_constants(n_trap),
            asym_coeffs=asym_coefficients(n_asym),
            achieved=achieved,
        )
        if check:
            PlannerService.check_plan(plan)
        return plan

    @staticmethod
    def check_plan(plan: HybridPlan):
        if not 0 < plan.eps < 1:
            raise PlannerError(f"Plan eps must lie in (0, 1), got {plan.eps!r}.")
        if not 0 < plan.x1 < plan.x2:
            raise PlannerError(f"Cut-offs must satisfy 0 < x1 < x2, got x1={plan.x1}, x2={plan.x2}.")
        names = ("taylor", "trapezoid", "asymptotic")
        for name, bound in zip(names, plan.achieved):
            if bound > plan.eps:
                raise PlannerError(
                    f"The {name} bound {bound:.4g} exceeds the plan target {plan.eps:.4g}."
                )

    @staticmethod
    @lru_cache(maxsize=1)
    def default_double_plan() -> HybridPlan:
        """The pinned double-precision plan (14, 12, 12, 0.688, 6.725)."""
        n_taylor, n_trap, n_asym = DOUBLE_ORDERS
        x1, x2 = DOUBLE_CUTOFFS
        return PlannerService.custom_plan(DOUBLE_EPS, n_taylor, n_trap, n_asym, x1, x2)

    @classmethod
    def plan(cls, eps: float, order_rule: OrderRule = balance_orders) -> HybridPlan:
        """
        Derives orders and cut-offs for a target absolute accuracy eps.
        The trapezoid order is the smallest admissible one; the Taylor and
        asymptotic orders come from order_rule; cut-offs invert the bounds.
        """
        _check_eps(eps)
        n_trap = cls.min_trap_order(eps)
        n_taylor, n_asym = order_rule(n_trap)
        x1 = cls.solve_x1(n_taylor, eps)
        x2 = cls.solve_x2(n_asym, eps)
        if not 0 < x1 < x2:
            raise PlannerError(
                f"Cut-off solves did not bracket a trapezoid range: x1={x1}, x2={x2}."
            )
        if eps == DOUBLE_EPS and n_trap != DOUBLE_ORDERS[1]:
            logger.warning(
                "trap_bound admits N2=%d at eps=2^-52 (bound %.4g); the pinned "
                "double plan keeps N2=%d",
                n_trap, trap_bound(n_trap), DOUBLE_ORDERS[1],
            )
        if eps < 2.0 ** -53:
            logger.info("eps=%.3g is below what double-precision kernels can deliver", eps)
        logger.debug("plan eps=%.3g -> N=(%d, %d, %d) x1=%.3f x2=%.3f",
                     eps, n_taylor, n_trap, n_asym, x1, x2)
        return cls.custom_plan(eps, n_taylor, n_trap, n_asym, x1, x2)

    @classmethod
    def from_summary(cls, summary: PlanSummary) -> HybridPlan:
        return cls.custom_plan(
            summary.eps, summary.n_taylor, summary.n_trap, summary.n_asym,
            summary.x1, summary.x2,
        )

    @classmethod
    def load_plan_file(cls, path: str) -> HybridPlan:
        """Rebuilds a plan from its serialized summary; invariants are re-checked."""
        try:
            with open(path, "r", encoding="utf-8") as handle:
                summary = PlanSummary.model_validate(json.load(handle))
        except (OSError, ValueError) as e:
            raise DomainError(f"Could not read plan file {path}: {e}") from e
        logger.info("Loaded plan from %s", path)
        return cls.from_summary(summary)
