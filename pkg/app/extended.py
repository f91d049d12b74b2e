"""Double-word ("double-double") arithmetic.

A value is carried as the unevaluated sum ``hi + lo`` of two floats with
``|lo| <= ulp(hi) / 2``, which keeps roughly 31 significant digits. The raw
helpers (``dd_add``, ``dd_mul`` ...) work on bare float pairs and are what the
oracle's inner loops call; ``ExtendedReal`` wraps them with operators.
"""
import math
import operator
from typing import NamedTuple

import mpmath

from app.exceptions import DomainError

_SPLITTER = 134217729.0  # 2**27 + 1, exact in binary64
_fma = getattr(math, "fma", None)


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Returns (s, err) with s + err == a + b exactly."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Same as two_sum but requires |a| >= |b|."""
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Returns (p, err) with p + err == a * b exactly (barring over/underflow)."""
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    if _fma is not None:
        return p, _fma(a, b, -p)
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def dd_add(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    s = ah + bh
    bb = s - ah
    e = (ah - (s - bb)) + (bh - bb)
    t = al + bl
    bb = t - al
    f = (al - (t - bb)) + (bl - bb)
    e += t
    hi = s + e
    e -= hi - s
    e += f
    s = hi + e
    return s, e - (s - hi)


def dd_sub(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    return dd_add(ah, al, -bh, -bl)


def dd_mul(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    s = p + e
    return s, e - (s - p)


def dd_mul_float(ah: float, al: float, b: float) -> tuple[float, float]:
    p, e = two_prod(ah, b)
    e += al * b
    s = p + e
    return s, e - (s - p)


def dd_div_float(ah: float, al: float, b: float) -> tuple[float, float]:
    q1 = ah / b
    p, e = two_prod(q1, b)
    s, f = two_sum(ah, -p)
    f = f - e + al
    q2 = (s + f) / b
    return quick_two_sum(q1, q2)


def dd_div(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    q1 = ah / bh
    ph, pl = dd_mul_float(bh, bl, q1)
    rh, rl = dd_sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = dd_mul_float(bh, bl, q2)
    rh, rl = dd_sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0)


class ExtendedReal(tuple):
    """Unevaluated hi + lo pair; invariant |lo| <= ulp(hi)/2."""
    __slots__ = ()

    def __new__(cls, hi: float, lo: float = 0.0):
        hi = float(hi)
        lo = float(lo)
        if not math.isfinite(hi):
            lo = 0.0
        return super().__new__(cls, (hi, lo))

    @property
    def hi(self) -> float:
        return self[0]

    @property
    def lo(self) -> float:
        return self[1]

    @classmethod
    def from_mpf(cls, value) -> "ExtendedReal":
        with mpmath.workprec(160):
            value = mpmath.mpf(value)
            hi = float(value)
            lo = float(value - hi)
        return cls(hi, lo)

    @classmethod
    def from_decimal(cls, text: str) -> "ExtendedReal":
        with mpmath.workprec(160):
            return cls.from_mpf(mpmath.mpf(text))

    def to_mpf(self):
        with mpmath.workprec(160):
            return mpmath.mpf(self[0]) + mpmath.mpf(self[1])

    def to_decimal(self, digits: int = 30) -> str:
        with mpmath.workprec(160):
            return mpmath.nstr(self.to_mpf(), digits, strip_zeros=False)

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "ExtendedReal":
        if isinstance(other, ExtendedReal):
            return other
        if isinstance(other, (int, float)):
            return ExtendedReal(float(other))
        return NotImplemented

    def _wrap(self, pair: tuple[float, float], head: float) -> "ExtendedReal":
        # non-finite intermediates must surface as a non-finite hi
        if not math.isfinite(head):
            return ExtendedReal(head)
        return ExtendedReal(*pair)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(dd_add(self[0], self[1], other[0], other[1]), self[0] + other[0])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(dd_sub(self[0], self[1], other[0], other[1]), self[0] - other[0])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(dd_mul(self[0], self[1], other[0], other[1]), self[0] * other[0])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other[0] == 0.0:
            raise DomainError("Double-word division by zero.")
        return self._wrap(dd_div(self[0], self[1], other[0], other[1]), self[0] / other[0])

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return ExtendedReal(-self[0], -self[1])

    def __abs__(self):
        return -self if (self[0], self[1]) < (0.0, 0.0) else self

    def __float__(self) -> float:
        return self[0] + self[1]

    # comparisons are lexicographic on normalized pairs
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return tuple.__lt__(self, self._coerce(other))

    def __le__(self, other):
        return tuple.__le__(self, self._coerce(other))

    def __gt__(self, other):
        return tuple.__gt__(self, self._coerce(other))

    def __ge__(self, other):
        return tuple.__ge__(self, self._coerce(other))

    __hash__ = tuple.__hash__

    def __repr__(self) -> str:
        return f"ExtendedReal(hi={self[0]!r}, lo={self[1]!r})"


class ExtendedComplex(NamedTuple):
    re: ExtendedReal
    im: ExtendedReal

    def __neg__(self) -> "ExtendedComplex":
        return ExtendedComplex(-self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def distance(self, value) -> float:
        """|value - self| for anything with float ``re``/``im`` attributes."""
        return math.hypot(float(self.re - value.re), float(self.im - value.im))


_OPERATORS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def dd_arith(a: ExtendedReal, b: ExtendedReal, op: str) -> ExtendedReal:
    """Applies one of + - * / to two double-word operands."""
    try:
        fn = _OPERATORS[op]
    except KeyError:
        raise DomainError(f"Unsupported double-word operator: {op!r}") from None
    return fn(ExtendedReal._coerce(a), ExtendedReal._coerce(b))
