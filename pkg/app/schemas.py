from pydantic import BaseModel, ConfigDict, Field
from typing import List, Optional

class PlanSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps: float = Field(..., gt=0, lt=1, examples=[2.220446049250313e-16])
    n_taylor: int = Field(..., ge=0, examples=[14])
    n_trap: int = Field(..., ge=1, examples=[12])
    n_asym: int = Field(..., ge=0, examples=[12])
    x1: float = Field(..., gt=0, examples=[0.688])
    x2: float = Field(..., gt=0, examples=[6.725])

    # (taylor_bound(x1, N1), trap_bound(N2), asym_bound(x2, N3))
    achieved: List[float] = Field(default=[], min_length=0, max_length=3)

class EvalRecord(BaseModel):
    x: float = Field(..., examples=[1.0])
    c: float = Field(..., description="Fresnel cosine integral C(x).")
    s: float = Field(..., description="Fresnel sine integral S(x).")
    branch: str = Field(..., examples=["trapezoid"])
    sign: int = Field(1, description="Sign applied by parity: -1 for negative x.")
    bound: float = Field(..., description="Analytic bound of the active branch at |x|.")

class ClothoidRow(BaseModel):
    s: float
    c: float
    sv: float

class CheckResult(BaseModel):
    name: str = Field(..., examples=["oracle-route-overlap@2.5"])
    passed: bool
    value: Optional[float] = Field(None, description="Measured quantity, e.g. a max error.")
    threshold: Optional[float] = Field(None, description="Limit the value is compared with.")
    detail: Optional[str] = None

class SelfTestReport(BaseModel):
    passed: bool
    checks: List[CheckResult] = Field(default=[])

class BranchTiming(BaseModel):
    branch: str
    lower: float
    upper: float
    ns_per_eval: float

class BenchReport(BaseModel):
    samples: int
    repeats: int
    timings: List[BranchTiming] = Field(default=[])
    ratio: float = Field(..., description="max/min of the per-branch mean times.")

class IntervalError(BaseModel):
    branch: str
    lower: float
    upper: float
    samples: int
    max_error: float
    mean_error: float

class GoldenFileSummary(BaseModel):
    path: str
    count: int = Field(..., ge=0)

class AccuracyReport(BaseModel):
    plan: PlanSummary
    intervals: List[IntervalError] = Field(default=[])
