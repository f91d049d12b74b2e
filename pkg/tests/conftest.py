import numpy as np
import pytest

from app.services.oracle_service import OracleService
from app.services.planner_service import PlannerService
from tests.reference import GOLDEN_POINTS


@pytest.fixture(scope="session")
def double_plan():
    return PlannerService.default_double_plan()


@pytest.fixture
def rng():
    return np.random.default_rng(20240117)


@pytest.fixture(scope="session")
def golden_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("golden") / "fresnel_golden.txt"
    OracleService.write_golden(str(path), GOLDEN_POINTS)
    return path
