import logging
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.exceptions import DomainError
from app.kernels import (
    ComplexValue,
    asym_bound,
    asym_coefficients,
    asym_eval,
    double_factorial,
    half_pi_square_cis,
    taylor_bound,
    taylor_coefficients,
    taylor_eval,
    trap_bound,
    trap_constants,
    trap_eval,
)
from app.services.oracle_service import OracleService
from app.services.selftest_service import SelfTestService
from tests.reference import C_HALF, C_ONE, S_HALF, S_ONE

logger = logging.getLogger(__name__)

# published reference values for the double-precision plan
REFERENCE_TRAP_BOUNDS = {12: 1.0733e-17, 11: 2.301e-16}


def mp_trap_c(order: int):
    """The c_N constant of the trapezoid bound in 40-digit arithmetic."""
    with mpmath.workdps(40):
        pi = mpmath.pi
        sqrt2 = mpmath.sqrt(2)
        a_sq = mpmath.mpf(order) + mpmath.mpf(1) / 2
        beta = 1 - 1 / sqrt2 - (2 * sqrt2 + 1) / 16
        return (
            20 * sqrt2 * mpmath.exp(-pi / 2) / (9 * pi * (1 - mpmath.exp(-2 * pi * a_sq)))
            * (1 + 2 * mpmath.sqrt(pi) * mpmath.exp(-beta * pi * a_sq))
            + (2 * pi + 1) * mpmath.exp(-pi / 2) / (2 * sqrt2 * pi ** mpmath.mpf(1.5))
        )


def mp_trap_bound(order: int):
    """Global trapezoid bound evaluated verbatim in 40-digit arithmetic."""
    with mpmath.workdps(40):
        c_n = mp_trap_c(order)
        return 2 * mpmath.sqrt(2) * c_n * mpmath.exp(-mpmath.pi * order) / (2 * order + 1)


# --- Taylor -----------------------------------------------------------------

def test_taylor_at_zero_is_zero():
    assert taylor_eval(0.0, taylor_coefficients(14)) == ComplexValue(0.0, 0.0)


def test_taylor_order_zero_is_identity():
    assert taylor_eval(0.5, taylor_coefficients(0)) == ComplexValue(0.5, 0.0)


def test_taylor_half():
    value = taylor_eval(0.5, taylor_coefficients(14))
    assert value.re == pytest.approx(C_HALF, abs=2e-16)
    assert value.im == pytest.approx(S_HALF, abs=1e-15)


@given(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
def test_taylor_is_odd_bit_for_bit(x):
    coeffs = taylor_coefficients(14)
    assert taylor_eval(-x, coeffs) == -taylor_eval(x, coeffs)


def test_taylor_coefficients_match_direct_formula():
    coeffs = taylor_coefficients(20).coeffs
    assert coeffs[0] == ComplexValue(1.0, 0.0)
    with mpmath.workdps(40):
        for k, c in enumerate(coeffs):
            magnitude = mpmath.pi ** k / (2 ** k * (2 * k + 1) * mpmath.factorial(k))
            component = c.re if k % 2 == 0 else c.im
            expected = float(magnitude) * (1 if k % 4 in (0, 1) else -1)
            assert abs(component - expected) <= 2 * math.ulp(expected)
            assert (c.im if k % 2 == 0 else c.re) == 0.0


def test_taylor_bound_reference_point():
    assert taylor_bound(0.688, 14) == pytest.approx(2.078e-16, rel=0.01)


def test_taylor_bound_vanishes_at_zero():
    assert taylor_bound(0.0, 5) == 0.0


def test_taylor_bound_at_one_matches_direct_sum():
    with mpmath.workdps(40):
        pi = mpmath.pi
        expected = sum(
            pi ** j / (2 ** j * (2 * j + 1) * mpmath.factorial(j)) for j in (15, 16)
        )
    assert taylor_bound(1.0, 14) == pytest.approx(float(expected), rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=10.0), st.integers(min_value=0, max_value=30))
def test_taylor_bound_increases_with_x(x, order):
    assert taylor_bound(x, order) < taylor_bound(x * 1.01, order)


@given(st.floats(min_value=1e-3, max_value=1.0), st.integers(min_value=0, max_value=12))
def test_taylor_bound_decreases_with_order(x, order):
    assert taylor_bound(x, order + 1) < taylor_bound(x, order)


def test_taylor_bound_rejects_bad_input():
    with pytest.raises(DomainError):
        taylor_bound(-0.1, 14)
    with pytest.raises(DomainError):
        taylor_bound(0.5, -1)


def test_taylor_bound_validity(rng):
    check = SelfTestService.taylor_bound_suite(500, rng)
    assert check.passed, check


# --- modified trapezoid ------------------------------------------------------

def test_trap_constants():
    tc = trap_constants(12)
    assert tc.a_n == pytest.approx(3.5355339059327378, abs=1e-15)
    assert tc.beta == pytest.approx(1 - 1 / math.sqrt(2) - (2 * math.sqrt(2) + 1) / 16, abs=1e-16)
    assert tc.beta == pytest.approx(0.0536, abs=1e-3)
    assert len(tc.weights) == len(tc.denoms) == 12
    assert trap_constants(12) == tc


# c_N of the double-precision plan's trapezoid order
TRAP_C_TWELVE = 0.39386


@pytest.mark.parametrize("order", [1, 2, 5, 11, 12, 13, 30])
def test_trap_constants_invariants(order):
    tc = trap_constants(order)
    assert tc.order == order
    assert tc.a_n ** 2 == pytest.approx(order + 0.5, rel=1e-15)
    assert all(0.0 < w <= 1.0 for w in tc.weights)
    assert all(a > b for a, b in zip(tc.weights, tc.weights[1:]))
    assert all(d > 0.0 for d in tc.denoms)
    assert all(a < b for a, b in zip(tc.denoms, tc.denoms[1:]))
    assert tc.c_n > 0.0
    assert tc.c_n == pytest.approx(float(mp_trap_c(order)), rel=1e-13)


def test_trap_c_for_order_twelve():
    assert trap_constants(12).c_n == pytest.approx(TRAP_C_TWELVE, rel=1e-4)
    assert float(mp_trap_c(12)) == pytest.approx(TRAP_C_TWELVE, rel=1e-4)


def test_trap_constants_rejects_order_zero():
    with pytest.raises(DomainError):
        trap_constants(0)


def test_trap_at_one():
    value = trap_eval(1.0, trap_constants(12))
    assert value.re == pytest.approx(C_ONE, abs=1e-15)
    assert value.im == pytest.approx(S_ONE, abs=1e-15)


def test_trap_at_six_matches_oracle():
    value = trap_eval(6.0, trap_constants(12))
    err = OracleService.oracle_g(6.0).distance(value)
    assert err <= max(trap_bound(12), 5 * math.ulp(1.0)) + 1e-15


def test_trap_precomputed_equals_from_scratch(rng):
    tc = trap_constants(12)
    pa = math.pi * math.sqrt(12.5)
    for x in rng.uniform(0.688, 6.725, size=50):
        x = float(x)
        decay = math.exp(-pa * x)
        e = complex(decay * math.cos(pa * x), decay * math.sin(pa * x))
        fermi = (1 + 1j) * e / (1.0 + e)
        total = 0j
        for k in range(1, 13):
            shift = (k - 0.5) ** 2
            total += math.exp(-math.pi * shift * (1.0 / 12.5)) / complex(x * x, 2.0 * shift * (1.0 / 12.5))
        cos_p, sin_p = half_pi_square_cis(x)
        g = (0.5 + 0.5j) - fermi - 2j * x * complex(cos_p, sin_p) / pa * total
        assert trap_eval(x, tc) == ComplexValue(g.real, g.imag)


def test_trap_rejects_out_of_range():
    tc = trap_constants(12)
    for x in (0.0, -1.0, 1e300):
        with pytest.raises(DomainError):
            trap_eval(x, tc)


def test_trap_bound_is_below_double_eps():
    assert 0 < trap_bound(12) <= 2.0 ** -52


def test_trap_bound_matches_extended_precision():
    for order in (1, 5, 11, 12, 20):
        assert trap_bound(order) == pytest.approx(float(mp_trap_bound(order)), rel=1e-12)


def test_trap_bound_against_reference_values():
    # recorded in the log; only agreement within an order of magnitude is required
    for order, reference in REFERENCE_TRAP_BOUNDS.items():
        ratio = reference / trap_bound(order)
        logger.info("trap_bound(%d) = %.4e, reference %.4e, ratio %.2f", order, trap_bound(order), reference, ratio)
        assert 0.1 <= ratio <= 10


def test_trap_bound_decreases_with_order():
    bounds = [trap_bound(n) for n in range(1, 40)]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_trap_bound_validity(rng):
    check = SelfTestService.trapezoid_bound_suite(500, rng)
    assert check.passed, check


# --- asymptotic ---------------------------------------------------------------

def test_asym_coefficients_first_and_ratio():
    coeffs = asym_coefficients(12).coeffs
    assert coeffs[0].re == 0.0
    assert coeffs[0].im == pytest.approx(-1 / math.pi, rel=1e-15)
    for k in range(12):
        ratio = math.hypot(*coeffs[k + 1]) / math.hypot(*coeffs[k])
        assert ratio == pytest.approx((2 * k + 1) / math.pi, rel=1e-15)


def test_asym_coefficients_match_direct_formula():
    coeffs = asym_coefficients(20).coeffs
    with mpmath.workdps(40):
        for k, c in enumerate(coeffs):
            magnitude = mpmath.mpf(math.prod(range(1, 2 * k, 2))) / mpmath.pi ** (k + 1)
            # (-i)^(k+1): -i, -1, i, 1
            turn = (k + 1) % 4
            expected = float(magnitude) * (1 if turn in (0, 3) else -1)
            component, other = (c.re, c.im) if turn % 2 == 0 else (c.im, c.re)
            assert abs(component - expected) <= 2 * math.ulp(expected), k
            assert other == 0.0


def test_asym_order_zero_at_one():
    value = asym_eval(1.0, asym_coefficients(0))
    assert value.re == pytest.approx(0.5 + 1 / math.pi, abs=1e-16)
    assert value.im == pytest.approx(0.5, abs=1e-16)


def test_asym_limit_at_large_x():
    value = asym_eval(1e300, asym_coefficients(12))
    assert value == ComplexValue(0.5, 0.5)


def test_asym_at_upper_cutoff_matches_oracle():
    value = asym_eval(6.725, asym_coefficients(12))
    err = OracleService.oracle_g(6.725).distance(value)
    assert err <= 2.212e-16 + 5 * math.ulp(1.0)


def test_asym_rejects_non_positive():
    with pytest.raises(DomainError):
        asym_eval(0.0, asym_coefficients(4))


def test_asym_bound_values():
    assert asym_bound(6.725, 12) == pytest.approx(2.212e-16, rel=0.005)
    assert asym_bound(1.0, 0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert asym_bound(10.0, 12) == pytest.approx(316234143225 / (math.pi ** 13 * 1e25), rel=1e-13)


@given(st.floats(min_value=0.5, max_value=1e3), st.integers(min_value=0, max_value=20))
def test_asym_bound_decreases_with_x(x, order):
    assert asym_bound(x * 1.01, order) < asym_bound(x, order)


@given(st.floats(min_value=3.0, max_value=1e3), st.integers(min_value=0, max_value=12))
def test_asym_bound_decreases_with_order(x, order):
    assert asym_bound(x, order + 1) < asym_bound(x, order)


def test_asym_bound_rejects_bad_input():
    with pytest.raises(DomainError):
        asym_bound(0.0, 3)
    with pytest.raises(DomainError):
        asym_bound(1.0, -1)


def test_asym_bound_validity(rng):
    check = SelfTestService.asymptotic_bound_suite(500, rng)
    assert check.passed, check


def test_large_argument_q12_against_oracle(rng):
    coeffs = asym_coefficients(12)
    for x in 10.0 ** rng.uniform(1.0, 9.0, size=2000):
        x = float(x)
        value = asym_eval(x, coeffs)
        err = OracleService.oracle_g(x).distance(value)
        assert err <= asym_bound(x, 12) + 4 * math.ulp(1.0), x


# --- helpers ------------------------------------------------------------------

def test_double_factorial():
    assert double_factorial(-1) == 1.0
    assert double_factorial(5) == 15.0
    assert double_factorial(23) == 316234143225.0
    assert double_factorial(1001) == math.inf


@pytest.mark.parametrize("m", [-3, 0, 4])
def test_double_factorial_rejects_even_and_small(m):
    with pytest.raises(DomainError):
        double_factorial(m)


def test_half_pi_square_cis_reduces_phase():
    # x^2 = 2^52 + 2^26 + 1/4 splits into hi = 2^52 + 2^26, lo = 1/4; phase reduces to pi/8
    x = 2.0 ** 26 + 0.5
    cos_p, sin_p = half_pi_square_cis(x)
    with mpmath.workprec(200):
        phase = mpmath.pi * mpmath.mpf(x) ** 2 / 2
        assert cos_p == pytest.approx(float(mpmath.cos(phase)), abs=1e-15)
        assert sin_p == pytest.approx(float(mpmath.sin(phase)), abs=1e-15)


def test_half_pi_square_cis_beyond_two_pow_54():
    assert half_pi_square_cis(2.0 ** 60) == (1.0, 0.0)


def test_coefficient_tables_are_deterministic():
    assert taylor_coefficients(14) == taylor_coefficients(14)
    assert asym_coefficients(12) == asym_coefficients(12)
    assert np.all(np.isfinite(np.array(taylor_coefficients(60).coeffs)))
