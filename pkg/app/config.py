import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int, malformed: list) -> Optional[int]:
    """Integer setting from the environment; unparsable values are recorded for validate()."""
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        malformed.append(f"{name}={raw!r}")
        return None


class FresnelConfig:
    # Optional serialized plan used whenever no --eps is given
    PLAN_FILE = os.getenv("FRESNEL_PLAN_FILE")
    LOG_LEVEL = os.getenv("FRESNEL_LOG_LEVEL", "WARNING")

    MALFORMED: list = []

    # Benchmark and validation sample sizes
    BENCH_SAMPLES = _env_int("FRESNEL_BENCH_SAMPLES", 1000000, MALFORMED)
    BENCH_REPEATS = _env_int("FRESNEL_BENCH_REPEATS", 5, MALFORMED)
    SELFTEST_SAMPLES = _env_int("FRESNEL_SELFTEST_SAMPLES", 100, MALFORMED)
    ACCURACY_SAMPLES = _env_int("FRESNEL_ACCURACY_SAMPLES", 1000, MALFORMED)
    SEED = _env_int("FRESNEL_SEED", 20240117, MALFORMED)

    # Upper end of the asymptotic subinterval used by experiments
    TABLE_UPPER = 15.0

    # Oracle quadrature order (nodes per panel)
    GL_ORDER = 32

    @classmethod
    def validate(cls):
        if cls.MALFORMED:
            raise ValueError(f"Expected integers for {', '.join(cls.MALFORMED)}. Check your .env file.")
        if min(cls.BENCH_SAMPLES, cls.BENCH_REPEATS, cls.SELFTEST_SAMPLES, cls.ACCURACY_SAMPLES) < 1:
            raise ValueError("Sample counts and repeats must be positive. Check your .env file.")
        if cls.GL_ORDER < 32:
            raise ValueError("The oracle needs a Gauss-Legendre order of at least 32.")
        if cls.PLAN_FILE and not os.path.isfile(cls.PLAN_FILE):
            raise ValueError(f"FRESNEL_PLAN_FILE points to a missing file: {cls.PLAN_FILE}")
