import json

import pytest

from app.exceptions import DomainError, PlannerError
from app.kernels import asym_bound, taylor_bound, trap_bound
from app.schemas import PlanSummary
from app.services.planner_service import (
    DOUBLE_EPS,
    PlannerService,
    balance_orders,
)

EPS_LADDER = [1e-4, 1e-8, 1e-12, DOUBLE_EPS]


def assert_plan_invariants(plan):
    assert 0 < plan.x1 < plan.x2
    assert taylor_bound(plan.x1, plan.n_taylor) <= plan.eps
    assert trap_bound(plan.n_trap) <= plan.eps
    assert asym_bound(plan.x2, plan.n_asym) <= plan.eps
    assert plan.taylor_coeffs.order == plan.n_taylor
    assert plan.trap_coeffs.order == plan.n_trap
    assert plan.asym_coeffs.order == plan.n_asym
    assert len(plan.taylor_coeffs.coeffs) == plan.n_taylor + 1
    assert len(plan.asym_coeffs.coeffs) == plan.n_asym + 1


def test_default_double_plan_is_pinned(double_plan):
    assert (double_plan.n_taylor, double_plan.n_trap, double_plan.n_asym) == (14, 12, 12)
    assert (double_plan.x1, double_plan.x2) == (0.688, 6.725)
    assert double_plan.eps == 2.0 ** -52 == 2.220446049250313e-16
    assert_plan_invariants(double_plan)


def test_default_double_plan_is_constant(double_plan):
    again = PlannerService.default_double_plan()
    assert again.taylor_coeffs == double_plan.taylor_coeffs
    assert again.trap_coeffs == double_plan.trap_coeffs
    assert again.asym_coeffs == double_plan.asym_coeffs


def test_balance_rule_reproduces_double_orders():
    assert balance_orders(12) == (14, 12)
    assert balance_orders(6) == (7, 6)


@pytest.mark.parametrize("eps", EPS_LADDER + [1e-2, 1e-6, 2.0 ** -75])
def test_plan_satisfies_invariants(eps):
    plan = PlannerService.plan(eps)
    assert plan.eps == eps
    assert_plan_invariants(plan)


def test_plan_monotone_in_eps():
    plans = [PlannerService.plan(eps) for eps in EPS_LADDER]
    for looser, tighter in zip(plans, plans[1:]):
        assert tighter.n_trap >= looser.n_trap
        assert tighter.n_taylor >= looser.n_taylor


@pytest.mark.parametrize("order", [6, 14])
def test_solve_x1_monotone_in_eps(order):
    cutoffs = [PlannerService.solve_x1(order, eps) for eps in EPS_LADDER]
    assert cutoffs == sorted(cutoffs, reverse=True)


@pytest.mark.parametrize("order", [4, 12])
def test_solve_x2_monotone_in_eps(order):
    cutoffs = [PlannerService.solve_x2(order, eps) for eps in EPS_LADDER]
    assert cutoffs == sorted(cutoffs)


@pytest.mark.parametrize("eps", EPS_LADDER)
def test_cutoffs_round_in_the_safe_direction(eps):
    for order in (4, 8, 12, 14):
        x1 = PlannerService.solve_x1(order, eps)
        x2 = PlannerService.solve_x2(order, eps)
        assert taylor_bound(x1, order) <= eps
        assert asym_bound(x2, order) <= eps
        # one rounding step further would break the target
        assert taylor_bound(x1 + 1e-3, order) > eps
        assert asym_bound(x2 - 1e-3, order) > eps
        assert round(x1, 3) == x1 and round(x2, 3) == x2


def test_solve_x1_double_precision():
    assert 0.688 <= PlannerService.solve_x1(14, DOUBLE_EPS) <= 0.70
    assert PlannerService.solve_x1(14, 2.078e-16) == pytest.approx(0.688, abs=2e-3)


def test_solve_x2_double_precision():
    assert 6.4 <= PlannerService.solve_x2(12, DOUBLE_EPS) <= 6.73
    assert PlannerService.solve_x2(12, 2.212e-16) == pytest.approx(6.725, abs=2e-3)


def test_solve_against_fine_grid():
    grid = [k * 1e-3 for k in range(1, 20001)]
    x1 = PlannerService.solve_x1(6, 1e-8)
    assert x1 == pytest.approx(max(x for x in grid if taylor_bound(x, 6) <= 1e-8), abs=1e-9)
    x2 = PlannerService.solve_x2(4, 1e-10)
    assert x2 == pytest.approx(min(x for x in grid if asym_bound(x, 4) <= 1e-10), abs=1e-9)


@pytest.mark.parametrize("eps", [1e-2, 1e-6, 1e-8, 1e-12, DOUBLE_EPS])
def test_min_trap_order_matches_brute_scan(eps):
    expected = next(n for n in range(1, 61) if trap_bound(n) <= eps)
    order = PlannerService.min_trap_order(eps)
    assert order == expected
    assert order == 1 or trap_bound(order - 1) > eps


def test_min_trap_order_between_eleven_and_twelve():
    eps = 0.5 * (trap_bound(11) + trap_bound(12))
    assert PlannerService.min_trap_order(eps) == 12


def test_min_trap_order_reference_values():
    assert PlannerService.min_trap_order(1e-2) == 2
    assert PlannerService.min_trap_order(1e-6) == 4
    assert PlannerService.min_trap_order(1e-8) == 6


def test_looser_eps_gives_smaller_orders():
    loose = PlannerService.plan(1e-8)
    tight = PlannerService.plan(DOUBLE_EPS)
    assert loose.n_trap < tight.n_trap
    assert loose.n_taylor < tight.n_taylor
    assert loose.n_asym < tight.n_asym


def test_double_eps_replan_logs_order_gap(caplog):
    with caplog.at_level("WARNING", logger="app.services.planner_service"):
        plan = PlannerService.plan(DOUBLE_EPS)
    assert_plan_invariants(plan)
    if plan.n_trap != 12:
        assert "pinned double plan" in caplog.text


@pytest.mark.parametrize("eps", [1.0, 0.5, 2.0 ** -80, 0.0, -1e-8])
def test_plan_rejects_out_of_range(eps):
    with pytest.raises(DomainError):
        PlannerService.plan(eps)


def test_custom_plan_checks_invariants():
    with pytest.raises(PlannerError):
        PlannerService.custom_plan(DOUBLE_EPS, 14, 12, 12, 2.0, 6.725)
    unchecked = PlannerService.custom_plan(DOUBLE_EPS, 14, 12, 12, 2.0, 6.725, check=False)
    assert unchecked.x1 == 2.0
    assert unchecked.achieved[0] > DOUBLE_EPS


def test_summary_field_names(double_plan):
    payload = json.loads(double_plan.summary().model_dump_json())
    assert set(payload) == {"eps", "n_taylor", "n_trap", "n_asym", "x1", "x2", "achieved"}
    assert payload["achieved"][1] == trap_bound(12)


def test_load_plan_file_round_trip(tmp_path):
    plan = PlannerService.plan(1e-8)
    path = tmp_path / "plan.json"
    path.write_text(plan.summary().model_dump_json(), encoding="utf-8")
    loaded = PlannerService.load_plan_file(str(path))
    assert loaded.summary() == plan.summary()
    assert loaded.trap_coeffs == plan.trap_coeffs


def test_load_plan_file_rejects_broken_files(tmp_path):
    with pytest.raises(DomainError):
        PlannerService.load_plan_file(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text('{"eps": 2}', encoding="utf-8")
    with pytest.raises(DomainError):
        PlannerService.load_plan_file(str(broken))


def test_load_plan_file_rechecks_invariants(tmp_path):
    summary = PlanSummary(eps=DOUBLE_EPS, n_taylor=14, n_trap=12, n_asym=12, x1=2.0, x2=6.725)
    path = tmp_path / "tampered.json"
    path.write_text(summary.model_dump_json(), encoding="utf-8")
    with pytest.raises(PlannerError):
        PlannerService.load_plan_file(str(path))
