"""Independent high-precision reference for G(x).

Everything here runs in double-word arithmetic (about 31 digits) and never
touches the approximants under test. Three routes cover the real line:

* |x| <= 2.5: the Taylor series of the definition, summed until terms drop
  below 1e-34 (worst cancellation is about five digits);
* 2.5 < |x| <= 20: composite Gauss-Legendre quadrature of the definition on
  dyadic panels no longer than min(0.25, 1/|x|), refined by halving until two
  successive levels agree to 1e-27;
* |x| > 20: the asymptotic series truncated at its smallest term.
"""
import logging
import math
import threading
from functools import lru_cache

import mpmath
import numpy as np

from app.config import FresnelConfig
from app.exceptions import DomainError, OracleError
from app.extended import (
    ExtendedComplex,
    ExtendedReal,
    dd_add,
    dd_div,
    dd_div_float,
    dd_mul,
    dd_mul_float,
    dd_sub,
    two_prod,
    two_sum,
)
from app.schemas import CheckResult, SelfTestReport

logger = logging.getLogger(__name__)

TAYLOR_LIMIT = 2.5
QUADRATURE_LIMIT = 20.0
ORACLE_RANGE = 1e12
ROUTES = ("taylor", "quadrature", "asymptotic")

GOLDEN_HEADER = "# fresnel golden values v1: x<TAB>C<TAB>S"

_TERM_FLOOR = 1e-34
_AGREEMENT = 1e-27
_MAX_REFINEMENTS = 4
_MAX_TERMS = 2000
_TRIG_STEPS = 32


def _dd(value) -> tuple[float, float]:
    hi = float(value)
    return hi, float(value - hi)


with mpmath.workprec(160):
    _PI = _dd(mpmath.pi)
    _HALF_PI = _dd(mpmath.pi / 2)
    _STEP_ANGLE = tuple(_dd(k * mpmath.pi / _TRIG_STEPS) for k in range(-_TRIG_STEPS, _TRIG_STEPS + 1))
    _STEP_COS = tuple(_dd(mpmath.cos(k * mpmath.pi / _TRIG_STEPS)) for k in range(-_TRIG_STEPS, _TRIG_STEPS + 1))
    _STEP_SIN = tuple(_dd(mpmath.sin(k * mpmath.pi / _TRIG_STEPS)) for k in range(-_TRIG_STEPS, _TRIG_STEPS + 1))
    # |rho| <= pi/64, so nine terms of each series reach 1e-34
    _SIN_SERIES = tuple(reversed([_dd(mpmath.mpf(-1) ** j / mpmath.factorial(2 * j + 1)) for j in range(9)]))
    _COS_SERIES = tuple(reversed([_dd(mpmath.mpf(-1) ** j / mpmath.factorial(2 * j)) for j in range(9)]))


def _cis(th: float, tl: float) -> tuple[float, float, float, float]:
    """cos and sin of a double-word angle in [-pi, pi]."""
    k = round(th * (_TRIG_STEPS / math.pi))
    k = max(-_TRIG_STEPS, min(_TRIG_STEPS, k))
    ah, al = _STEP_ANGLE[k + _TRIG_STEPS]
    rh, rl = dd_sub(th, tl, ah, al)
    r2h, r2l = dd_mul(rh, rl, rh, rl)

    sh, sl = _SIN_SERIES[0]
    for ch_, cl_ in _SIN_SERIES[1:]:
        sh, sl = dd_mul(sh, sl, r2h, r2l)
        sh, sl = dd_add(sh, sl, ch_, cl_)
    sh, sl = dd_mul(sh, sl, rh, rl)

    ch, cl = _COS_SERIES[0]
    for ch_, cl_ in _COS_SERIES[1:]:
        ch, cl = dd_mul(ch, cl, r2h, r2l)
        ch, cl = dd_add(ch, cl, ch_, cl_)

    kch, kcl = _STEP_COS[k + _TRIG_STEPS]
    ksh, ksl = _STEP_SIN[k + _TRIG_STEPS]
    cos_h, cos_l = dd_sub(*dd_mul(kch, kcl, ch, cl), *dd_mul(ksh, ksl, sh, sl))
    sin_h, sin_l = dd_add(*dd_mul(ksh, ksl, ch, cl), *dd_mul(kch, kcl, sh, sl))
    return cos_h, cos_l, sin_h, sin_l


def _half_pi_phase(qh: float, ql: float) -> tuple[float, float]:
    """pi*q/2 reduced into [-pi, pi] for a double-word q = t^2."""
    rh, rl = two_sum(math.fmod(qh, 4.0), math.fmod(ql, 4.0))
    while rh >= 2.0:
        rh, rl = dd_add(rh, rl, -4.0, 0.0)
    while rh < -2.0:
        rh, rl = dd_add(rh, rl, 4.0, 0.0)
    return dd_mul(_HALF_PI[0], _HALF_PI[1], rh, rl)


@lru_cache(maxsize=4)
def _gauss_legendre(order: int) -> tuple[tuple[float, float, float, float], ...]:
    """Nodes and weights on [-1, 1] as double-word pairs (Newton on P_order)."""
    rule = []
    with mpmath.workprec(160):
        tol = mpmath.mpf(2) ** -120
        for i in range(1, order + 1):
            x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(0.25)) / (order + mpmath.mpf(0.5)))
            for _ in range(100):
                p_prev, p = mpmath.mpf(1), x
                for k in range(2, order + 1):
                    p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
                dp = order * (x * p - p_prev) / (x * x - 1)
                step = p / dp
                x -= step
                if abs(step) < tol:
                    break
            else:
                raise OracleError(f"Legendre node {i} of order {order} did not converge.")
            weight = 2 / ((1 - x * x) * dp * dp)
            rule.append((*_dd(x), *_dd(weight)))
    return tuple(rule)


def _panel_integral(a: float, b: float) -> tuple[float, float, float, float]:
    """Gauss-Legendre integral of exp(i*pi*t^2/2) over [a, b]."""
    mh, ml = two_sum(a, b)
    mh, ml = 0.5 * mh, 0.5 * ml
    hh, hl = two_sum(b, -a)
    hh, hl = 0.5 * hh, 0.5 * hl
    reh = rel = imh = iml = 0.0
    for uh, ul, wh, wl in _gauss_legendre(FresnelConfig.GL_ORDER):
        th, tl = dd_add(mh, ml, *dd_mul(hh, hl, uh, ul))
        ph, pl = _half_pi_phase(*dd_mul(th, tl, th, tl))
        ch, cl, sh, sl = _cis(ph, pl)
        reh, rel = dd_add(reh, rel, *dd_mul(wh, wl, ch, cl))
        imh, iml = dd_add(imh, iml, *dd_mul(wh, wl, sh, sl))
    reh, rel = dd_mul(reh, rel, hh, hl)
    imh, iml = dd_mul(imh, iml, hh, hl)
    return reh, rel, imh, iml


class _PanelLedger:
    """Prefix sums of panel integrals on the dyadic grids j * 2^-level."""

    def __init__(self):
        self._prefix: dict[int, list[tuple[float, float, float, float]]] = {}
        self._lock = threading.Lock()

    def prefix(self, level: int, count: int) -> tuple[float, float, float, float]:
        """Integral over [0, count * 2^-level]."""
        with self._lock:
            sums = self._prefix.setdefault(level, [(0.0, 0.0, 0.0, 0.0)])
            if len(sums) <= count:
                width = math.ldexp(1.0, -level)
                first = len(sums)
                reh, rel, imh, iml = sums[-1]
                for j in range(first - 1, count):
                    preh, prel, pimh, piml = _panel_integral(j * width, (j + 1) * width)
                    reh, rel = dd_add(reh, rel, preh, prel)
                    imh, iml = dd_add(imh, iml, pimh, piml)
                    sums.append((reh, rel, imh, iml))
                logger.debug("panel ledger level %d grown to %d panels", level, count)
            return sums[count]


_LEDGER = _PanelLedger()


def _as_complex(reh, rel, imh, iml) -> ExtendedComplex:
    return ExtendedComplex(ExtendedReal(reh, rel), ExtendedReal(imh, iml))


def _taylor_route(x: float) -> ExtendedComplex:
    qh, ql = two_prod(x, x)
    zh, zl = dd_mul(_HALF_PI[0], _HALF_PI[1], qh, ql)
    mh, ml = x, 0.0  # (pi/2)^k x^(2k+1) / k!
    reh, rel = x, 0.0
    imh, iml = 0.0, 0.0
    for k in range(1, _MAX_TERMS):
        mh, ml = dd_div_float(*dd_mul(mh, ml, zh, zl), float(k))
        th, tl = dd_div_float(mh, ml, float(2 * k + 1))
        turn = k % 4
        if turn == 0:
            reh, rel = dd_add(reh, rel, th, tl)
        elif turn == 1:
            imh, iml = dd_add(imh, iml, th, tl)
        elif turn == 2:
            reh, rel = dd_sub(reh, rel, th, tl)
        else:
            imh, iml = dd_sub(imh, iml, th, tl)
        if k > zh and th < _TERM_FLOOR:
            return _as_complex(reh, rel, imh, iml)
    raise OracleError(f"Taylor route did not converge at x={x!r}.")


def _integral_at_level(x: float, level: int) -> tuple[float, float, float, float]:
    width = math.ldexp(1.0, -level)
    count = int(math.ldexp(x, level))
    reh, rel, imh, iml = _LEDGER.prefix(level, count)
    start = count * width
    if x > start:
        preh, prel, pimh, piml = _panel_integral(start, x)
        reh, rel = dd_add(reh, rel, preh, prel)
        imh, iml = dd_add(imh, iml, pimh, piml)
    return reh, rel, imh, iml


def _quadrature_route(x: float) -> ExtendedComplex:
    if x == 0:
        return _as_complex(0.0, 0.0, 0.0, 0.0)
    # panel width 2^-level <= min(1/4, 1/x)
    level = max(2, math.ceil(math.log2(x)))
    previous = _integral_at_level(x, level)
    for _ in range(_MAX_REFINEMENTS):
        level += 1
        current = _integral_at_level(x, level)
        gap = math.hypot(
            sum(dd_sub(current[0], current[1], previous[0], previous[1])),
            sum(dd_sub(current[2], current[3], previous[2], previous[3])),
        )
        if gap <= _AGREEMENT:
            return _as_complex(*current)
        logger.debug("quadrature at x=%r: levels disagree by %.3g, refining", x, gap)
        previous = current
    raise OracleError(f"Panel refinement did not converge at x={x!r}.")


def _asymptotic_route(x: float) -> ExtendedComplex:
    if x == 0:
        raise DomainError("The asymptotic route needs x > 0.")
    qh, ql = two_prod(x, x)
    ah, al = dd_div(1.0, 0.0, *dd_mul_float(_PI[0], _PI[1], x))  # 1 / (pi x)
    yh, yl = dd_div(1.0, 0.0, *dd_mul(_PI[0], _PI[1], qh, ql))  # 1 / (pi x^2)
    sreh = srel = simh = siml = 0.0
    previous = math.inf
    for k in range(_MAX_TERMS):
        if k:
            ah, al = dd_mul_float(*dd_mul(ah, al, yh, yl), float(2 * k - 1))
        if ah > previous:
            # truncate at the smallest term
            if previous > 1e-26:
                raise OracleError(f"Asymptotic route cannot reach oracle accuracy at x={x!r}.")
            break
        # times (-i)^(k+1)
        turn = k % 4
        if turn == 0:
            simh, siml = dd_sub(simh, siml, ah, al)
        elif turn == 1:
            sreh, srel = dd_sub(sreh, srel, ah, al)
        elif turn == 2:
            simh, siml = dd_add(simh, siml, ah, al)
        else:
            sreh, srel = dd_add(sreh, srel, ah, al)
        if ah < _TERM_FLOOR:
            break
        previous = ah
    ch, cl, sh, sl = _cis(*_half_pi_phase(qh, ql))
    reh, rel = dd_sub(*dd_mul(ch, cl, sreh, srel), *dd_mul(sh, sl, simh, siml))
    imh, iml = dd_add(*dd_mul(sh, sl, sreh, srel), *dd_mul(ch, cl, simh, siml))
    reh, rel = dd_add(0.5, 0.0, reh, rel)
    imh, iml = dd_add(0.5, 0.0, imh, iml)
    return _as_complex(reh, rel, imh, iml)


_ROUTE_FUNCTIONS = {
    "taylor": _taylor_route,
    "quadrature": _quadrature_route,
    "asymptotic": _asymptotic_route,
}


def _check_argument(x: float):
    if not math.isfinite(x):
        raise DomainError(f"The oracle needs a finite argument, got {x!r}.")
    if abs(x) > ORACLE_RANGE:
        raise DomainError(f"The oracle covers |x| <= 1e12, got {x!r}.")


class OracleService:

    @staticmethod
    def oracle_route(x: float, route: str) -> ExtendedComplex:
        """Evaluates G(x) through one named route, ignoring the default ranges."""
        _check_argument(x)
        try:
            fn = _ROUTE_FUNCTIONS[route]
        except KeyError:
            raise DomainError(f"Unknown oracle route {route!r}; expected one of {ROUTES}.") from None
        if x < 0:
            return -fn(-x)
        return fn(x)

    @classmethod
    def oracle_g(cls, x: float) -> ExtendedComplex:
        """G(x) to about 1e-25 absolute, odd in x exactly."""
        _check_argument(x)
        ax = abs(x)
        if ax <= TAYLOR_LIMIT:
            route = "taylor"
        elif ax <= QUADRATURE_LIMIT:
            route = "quadrature"
        else:
            route = "asymptotic"
        return cls.oracle_route(x, route)

    @classmethod
    def route_gap(cls, x: float, first: str, second: str) -> float:
        a = cls.oracle_route(x, first)
        b = cls.oracle_route(x, second)
        return math.hypot(float(a.re - b.re), float(a.im - b.im))

    @classmethod
    def oracle_selfcheck(cls, seed: int = FresnelConfig.SEED) -> SelfTestReport:
        """
        Cross-checks the routes where they overlap, differentiates C numerically
        against the integrand and checks the large-x limit.
        """
        checks = []
        overlaps = [(2.0, "taylor", "quadrature"), (2.5, "taylor", "quadrature"),
                    (3.0, "taylor", "quadrature"), (18.0, "quadrature", "asymptotic"),
                    (20.0, "quadrature", "asymptotic"), (25.0, "quadrature", "asymptotic")]
        for x, first, second in overlaps:
            gap = cls.route_gap(x, first, second)
            checks.append(CheckResult(
                name=f"oracle-route-overlap@{x:g}", passed=gap <= 1e-24,
                value=gap, threshold=1e-24, detail=f"{first} vs {second}",
            ))

        rng = np.random.default_rng(seed)
        h = 1e-6
        worst = 0.0
        worst_x = 0.0
        for x in [0.0, *rng.uniform(0.1, 10.0, size=20)]:
            x = float(x)
            xp, xm = x + h, x - h
            slope = float(cls.oracle_g(xp).re - cls.oracle_g(xm).re) / (xp - xm)
            mid = 0.5 * (xp + xm)
            err = abs(slope - math.cos(0.5 * math.pi * mid * mid))
            if err > worst:
                worst, worst_x = err, x
        checks.append(CheckResult(
            name="oracle-derivative", passed=worst <= 1e-8, value=worst,
            threshold=1e-8, detail=f"worst at x={worst_x:.6g}",
        ))

        far = cls.oracle_g(1e6)
        gap = math.hypot(float(far.re - 0.5), float(far.im - 0.5))
        checks.append(CheckResult(
            name="oracle-limit@1e6", passed=gap <= 1e-6, value=gap, threshold=1e-6,
        ))

        for check in checks:
            logger.info("%s: %s (%.3g)", check.name, "pass" if check.passed else "FAIL", check.value)
        return SelfTestReport(passed=all(c.passed for c in checks), checks=checks)

    @classmethod
    def write_golden(cls, path: str, xs) -> int:
        """Writes x, C(x), S(x) to 30 significant digits, one tab-separated line each."""
        lines = [GOLDEN_HEADER]
        for x in xs:
            x = float(x)
            g = cls.oracle_g(x)
            lines.append(f"{x!r}\t{g.re.to_decimal(30)}\t{g.im.to_decimal(30)}")
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
        return len(lines) - 1

    @staticmethod
    def read_golden(path: str) -> list[tuple[float, ExtendedComplex]]:
        rows = []
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                x, c, s = line.split("\t")
                rows.append((float(x), ExtendedComplex(ExtendedReal.from_decimal(c), ExtendedReal.from_decimal(s))))
        return rows
