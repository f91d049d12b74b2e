"""Stateless approximants of G(x) = C(x) + iS(x) and their error bounds.

Three families are provided, each with a coefficient table built once and an
evaluation routine that only does working-precision arithmetic:

* truncated Taylor series T_N, accurate for small x,
* the modified trapezoid sum G_N with an x-independent error bound,
* the asymptotic expansion Q_N obtained by repeated integration by parts.

Bounds are evaluated in log space so that factorials, double factorials and
powers of pi never overflow before the bound itself does.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath

from app.exceptions import DomainError
from app.extended import two_prod

_LOG_PI = math.log(math.pi)
_LOG_2 = math.log(2.0)
_HALF_PI = 0.5 * math.pi
_MAX_EXP_ARG = math.log(1.7976931348623157e308)
_TWO_POW_54 = 2.0 ** 54

# coefficient tables are generated at this precision, then rounded once
_TABLE_DPS = 40


class ComplexValue(NamedTuple):
    re: float
    im: float

    def __neg__(self) -> "ComplexValue":
        return ComplexValue(-self.re, -self.im)


@dataclass(frozen=True, slots=True)
class TaylorCoefficients:
    order: int
    coeffs: tuple[ComplexValue, ...]


@dataclass(frozen=True, slots=True)
class AsymCoefficients:
    order: int
    coeffs: tuple[ComplexValue, ...]


@dataclass(frozen=True, slots=True)
class TrapCoefficients:
    order: int
    a_n: float
    beta: float
    c_n: float
    weights: tuple[float, ...]
    denoms: tuple[float, ...]


def _rotate(magnitude, quarter_turns: int) -> ComplexValue:
    """magnitude * i**quarter_turns, rounded to working precision."""
    value = float(magnitude)
    turn = quarter_turns % 4
    if turn == 0:
        return ComplexValue(value, 0.0)
    if turn == 1:
        return ComplexValue(0.0, value)
    if turn == 2:
        return ComplexValue(-value, 0.0)
    return ComplexValue(0.0, -value)


def taylor_coefficients(order: int) -> TaylorCoefficients:
    """(i*pi)^k / (2^k (2k+1) k!) for k = 0..order.

    Magnitudes follow the running ratio pi / (2k) in extended precision and are
    rounded once, so every entry is the correctly rounded coefficient.
    """
    if order < 0:
        raise DomainError(f"Taylor order must be >= 0, got {order}.")
    coeffs = []
    with mpmath.workdps(_TABLE_DPS):
        ratio = mpmath.pi / 2
        running = mpmath.mpf(1)
        for k in range(order + 1):
            if k:
                running = running * ratio / k
            coeffs.append(_rotate(running / (2 * k + 1), k))
    return TaylorCoefficients(order=order, coeffs=tuple(coeffs))


def asym_coefficients(order: int) -> AsymCoefficients:
    """(2k-1)!! (-i)^(k+1) / pi^(k+1) for k = 0..order, with (-1)!! = 1."""
    if order < 0:
        raise DomainError(f"Asymptotic order must be >= 0, got {order}.")
    coeffs = []
    with mpmath.workdps(_TABLE_DPS):
        running = 1 / mpmath.pi
        for k in range(order + 1):
            if k:
                running = running * (2 * k - 1) / mpmath.pi
            # (-i)^(k+1) == i^(3(k+1))
            coeffs.append(_rotate(running, 3 * (k + 1)))
    return AsymCoefficients(order=order, coeffs=tuple(coeffs))


def trap_constants(order: int) -> TrapCoefficients:
    """Constants of the modified trapezoid sum of order N."""
    if order < 1:
        raise DomainError(f"Trapezoid order must be >= 1, got {order}.")
    a_sq = order + 0.5
    a_n = math.sqrt(a_sq)
    inv_a2 = 1.0 / a_sq
    beta = 1.0 - 1.0 / math.sqrt(2.0) - (2.0 * math.sqrt(2.0) + 1.0) / 16.0
    c_n = (
        20.0 * math.sqrt(2.0) * math.exp(-_HALF_PI)
        / (9.0 * math.pi * (1.0 - math.exp(-2.0 * math.pi * a_sq)))
        * (1.0 + 2.0 * math.sqrt(math.pi) * math.exp(-beta * math.pi * a_sq))
        + (2.0 * math.pi + 1.0) * math.exp(-_HALF_PI) / (2.0 * math.sqrt(2.0) * math.pi ** 1.5)
    )
    weights = []
    denoms = []
    for k in range(1, order + 1):
        shift = (k - 0.5) ** 2
        weights.append(math.exp(-math.pi * shift * inv_a2))
        denoms.append(2.0 * shift * inv_a2)
    return TrapCoefficients(
        order=order, a_n=a_n, beta=beta, c_n=c_n,
        weights=tuple(weights), denoms=tuple(denoms),
    )


def double_factorial(m: int) -> float:
    """m!! for odd m >= -1, with (-1)!! = 1; inf once the value leaves float range."""
    if m < -1 or (m != -1 and m % 2 == 0):
        raise DomainError(f"Double factorial needs an odd m >= -1, got {m}.")
    product = math.prod(range(m, 0, -2))
    try:
        return float(product)
    except OverflowError:
        return math.inf


def _log_double_factorial(m: int) -> float:
    # (2n-1)!! = (2n)! / (2^n n!) with m = 2n - 1
    n = (m + 1) // 2
    return math.lgamma(2 * n + 1) - n * _LOG_2 - math.lgamma(n + 1)


def half_pi_square_cis(x: float) -> tuple[float, float]:
    """cos and sin of pi*x^2/2.

    x^2 is split exactly into hi + lo and hi is reduced modulo 4 (the period of
    the phase in x^2) before scaling, so the phase error does not grow with x.
    """
    ax = abs(x)
    if ax >= _TWO_POW_54:
        # x is then an even integer and x^2 a multiple of 4
        return 1.0, 0.0
    hi, lo = two_prod(ax, ax)
    r = math.fmod(hi, 4.0)
    if r >= 2.0:
        r -= 4.0
    phase = _HALF_PI * (r + math.fmod(lo, 4.0))
    return math.cos(phase), math.sin(phase)


def taylor_eval(x: float, coeffs: TaylorCoefficients) -> ComplexValue:
    """T_N(x) = x * Horner(coeffs, x^2); odd in x bit for bit."""
    x2 = x * x
    acc_re = 0.0
    acc_im = 0.0
    for c_re, c_im in reversed(coeffs.coeffs):
        acc_re = acc_re * x2 + c_re
        acc_im = acc_im * x2 + c_im
    return ComplexValue(x * acc_re, x * acc_im)


def taylor_bound(x: float, order: int) -> float:
    """Sum of the first two omitted Taylor terms at x."""
    if x < 0 or order < 0:
        raise DomainError(f"taylor_bound needs x >= 0 and N >= 0, got x={x}, N={order}.")
    if x == 0:
        return 0.0
    log_x = math.log(x)
    total = 0.0
    for j in (order + 1, order + 2):
        total += math.exp(
            j * (_LOG_PI - _LOG_2) + (2 * j + 1) * log_x
            - math.log(2 * j + 1) - math.lgamma(j + 1)
        )
    return total


def trap_eval(x: float, tc: TrapCoefficients) -> ComplexValue:
    """Modified trapezoid sum G_N(x) for mid-range x > 0.

    The Fermi term (1+i)/(exp((1-i)*pi*A*x) + 1) is evaluated as
    (1+i) E / (1 + E) with E = exp(-(1-i)*pi*A*x), which decays instead of
    overflowing.
    """
    pa = math.pi * tc.a_n
    if not x > 0 or pa * x >= _MAX_EXP_ARG:
        raise DomainError(f"trap_eval needs 0 < x < {_MAX_EXP_ARG / pa:.6g}, got {x}.")
    decay = math.exp(-pa * x)
    e = complex(decay * math.cos(pa * x), decay * math.sin(pa * x))
    fermi = (1 + 1j) * e / (1.0 + e)

    x2 = x * x
    total = 0j
    for w, d in zip(tc.weights, tc.denoms):
        total += w / complex(x2, d)
    cos_p, sin_p = half_pi_square_cis(x)
    tail = 2j * x * complex(cos_p, sin_p) / pa * total

    g = (0.5 + 0.5j) - fermi - tail
    return ComplexValue(g.real, g.imag)


def trap_bound(order: int) -> float:
    """Global bound 2*sqrt(2)*c_N*exp(-pi*N)/(2N+1), independent of x."""
    if order < 1:
        raise DomainError(f"Trapezoid order must be >= 1, got {order}.")
    c_n = trap_constants(order).c_n
    return 2.0 * math.sqrt(2.0) * c_n * math.exp(-math.pi * order) / (2 * order + 1)


def asym_eval(x: float, coeffs: AsymCoefficients) -> ComplexValue:
    """Q_N(x) = (1+i)/2 + exp(i*pi*x^2/2) * (1/x) * Horner(coeffs, 1/x^2)."""
    if not x > 0:
        raise DomainError(f"asym_eval needs x > 0, got {x}.")
    inv_x = 1.0 / x
    y = inv_x * inv_x
    acc_re = 0.0
    acc_im = 0.0
    for c_re, c_im in reversed(coeffs.coeffs):
        acc_re = acc_re * y + c_re
        acc_im = acc_im * y + c_im
    cos_p, sin_p = half_pi_square_cis(x)
    return ComplexValue(
        0.5 + (cos_p * acc_re - sin_p * acc_im) * inv_x,
        0.5 + (sin_p * acc_re + cos_p * acc_im) * inv_x,
    )


def asym_bound(x: float, order: int) -> float:
    """(2N-1)!! / (pi^(N+1) x^(2N+1)), with (-1)!! = 1."""
    if not x > 0 or order < 0:
        raise DomainError(f"asym_bound needs x > 0 and N >= 0, got x={x}, N={order}.")
    return math.exp(
        _log_double_factorial(2 * order - 1)
        - (order + 1) * _LOG_PI
        - (2 * order + 1) * math.log(x)
    )
