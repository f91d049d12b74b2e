import logging
import time

import numpy as np

from app.config import FresnelConfig
from app.schemas import BenchReport, BranchTiming
from app.services.evaluator_service import EvaluatorService
from app.services.planner_service import HybridPlan

logger = logging.getLogger(__name__)

_WARMUP = 1000


class BenchService:

    @staticmethod
    def time_branch(xs: list[float], plan: HybridPlan, repeats: int) -> float:
        """Median wall time per evaluation in nanoseconds, after a warm-up pass."""
        fresnel_g = EvaluatorService.fresnel_g
        for x in xs[:_WARMUP]:
            fresnel_g(x, plan)
        totals = []
        for _ in range(repeats):
            start = time.perf_counter_ns()
            for x in xs:
                fresnel_g(x, plan)
            totals.append(time.perf_counter_ns() - start)
        return float(np.median(totals)) / len(xs)

    @classmethod
    def run(cls, plan: HybridPlan, samples: int = FresnelConfig.BENCH_SAMPLES,
            repeats: int = FresnelConfig.BENCH_REPEATS, seed: int = FresnelConfig.SEED) -> BenchReport:
        """
        Times fresnel_g over uniform random points of each subinterval
        [0, x1], (x1, x2), [x2, TABLE_UPPER] and reports max/min of the means.
        """
        rng = np.random.default_rng(seed)
        timings = []
        for branch, lo, hi in EvaluatorService.branch_intervals(plan, FresnelConfig.TABLE_UPPER):
            xs = rng.uniform(lo, hi, size=samples).tolist()
            ns = cls.time_branch(xs, plan, repeats)
            logger.info("%s on [%.3f, %.3f]: %.1f ns/eval", branch.value, lo, hi, ns)
            timings.append(BranchTiming(branch=branch.value, lower=lo, upper=hi, ns_per_eval=ns))

        means = [t.ns_per_eval for t in timings]
        return BenchReport(samples=samples, repeats=repeats, timings=timings, ratio=max(means) / min(means))
