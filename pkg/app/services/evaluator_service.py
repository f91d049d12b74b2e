import math
from enum import Enum
from typing import NamedTuple

import numpy as np

from app.exceptions import DomainError, InvalidInputError
from app.kernels import (
    ComplexValue,
    asym_bound,
    asym_eval,
    taylor_bound,
    taylor_eval,
    trap_bound,
    trap_eval,
)
from app.schemas import EvalRecord
from app.services.planner_service import HybridPlan

# G(x) -> G_LIMIT as x -> +inf (and -G_LIMIT as x -> -inf)
G_LIMIT = ComplexValue(0.5, 0.5)


class Branch(str, Enum):
    TAYLOR = "taylor"
    TRAPEZOID = "trapezoid"
    ASYMPTOTIC = "asymptotic"


class BranchTag(NamedTuple):
    branch: Branch
    sign: int = 1


class ClothoidPoint(NamedTuple):
    s: float
    c: float
    sv: float


def _dispatch(ax: float, plan: HybridPlan) -> tuple[ComplexValue, Branch]:
    # closures: [0, x1] taylor, (x1, x2) trapezoid, [x2, inf) asymptotic
    if ax <= plan.x1:
        return taylor_eval(ax, plan.taylor_coeffs), Branch.TAYLOR
    if ax < plan.x2:
        return trap_eval(ax, plan.trap_coeffs), Branch.TRAPEZOID
    return asym_eval(ax, plan.asym_coeffs), Branch.ASYMPTOTIC


def _grid(lo: float, hi: float, n: int, what: str) -> np.ndarray:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"{what} range endpoints must be finite.")
    if not lo < hi:
        raise DomainError(f"{what} range needs start < end, got {lo} and {hi}.")
    if n < 2:
        raise DomainError(f"{what} sampling needs n >= 2 points, got {n}.")
    return np.linspace(lo, hi, n)


class EvaluatorService:

    @staticmethod
    def fresnel_g(x: float, plan: HybridPlan) -> tuple[ComplexValue, BranchTag]:
        """
        Piecewise approximation of G(x) = C(x) + iS(x) for any finite x.
        Negative arguments are evaluated at |x| and negated, so the result is
        odd bit for bit.
        """
        if math.isnan(x):
            raise InvalidInputError("Cannot evaluate the Fresnel integrals at NaN.")
        if math.isinf(x):
            raise InvalidInputError(
                "Infinite argument; the limit is +/-(1+i)/2 (see G_LIMIT)."
            )
        if x < 0:
            value, branch = _dispatch(-x, plan)
            return -value, BranchTag(branch, -1)
        value, branch = _dispatch(x, plan)
        return value, BranchTag(branch, 1)

    @classmethod
    def fresnel_c(cls, x: float, plan: HybridPlan) -> float:
        return cls.fresnel_g(x, plan)[0].re

    @classmethod
    def fresnel_s(cls, x: float, plan: HybridPlan) -> float:
        return cls.fresnel_g(x, plan)[0].im

    @staticmethod
    def branch_bound(x: float, tag: BranchTag, plan: HybridPlan) -> float:
        """Analytic error bound of the active branch at |x|."""
        ax = abs(x)
        if tag.branch is Branch.TAYLOR:
            return taylor_bound(ax, plan.n_taylor)
        if tag.branch is Branch.TRAPEZOID:
            return trap_bound(plan.n_trap)
        return asym_bound(ax, plan.n_asym)

    @classmethod
    def evaluate_record(cls, x: float, plan: HybridPlan) -> EvalRecord:
        value, tag = cls.fresnel_g(x, plan)
        return EvalRecord(
            x=x,
            c=value.re,
            s=value.im,
            branch=tag.branch.value,
            sign=tag.sign,
            bound=cls.branch_bound(x, tag, plan),
        )

    @staticmethod
    def branch_intervals(plan: HybridPlan, upper: float) -> list[tuple[Branch, float, float]]:
        """The three sampling subintervals [0, x1], (x1, x2), [x2, upper]."""
        return [
            (Branch.TAYLOR, 0.0, plan.x1),
            (Branch.TRAPEZOID, plan.x1, plan.x2),
            (Branch.ASYMPTOTIC, plan.x2, max(upper, plan.x2 + 1.0)),
        ]

    @classmethod
    def tabulate(cls, a: float, b: float, n: int, plan: HybridPlan) -> list[EvalRecord]:
        """Evaluation records at n uniformly spaced points of [a, b]."""
        return [cls.evaluate_record(float(x), plan) for x in _grid(a, b, n, "Table")]

    @classmethod
    def clothoid_sample(cls, s0: float, s1: float, n: int, plan: HybridPlan) -> list[ClothoidPoint]:
        """
        Samples the clothoid (C(s), S(s)) at n uniformly spaced arc lengths,
        endpoints included exactly.
        """
        points = []
        for s in _grid(s0, s1, n, "Clothoid"):
            s = float(s)
            value, _ = cls.fresnel_g(s, plan)
            points.append(ClothoidPoint(s=s, c=value.re, sv=value.im))
        return points
