"""Arithmetic substrates for the lab: IEEE binary64 and double-double.

Every iteration engine and solver in this package is written against plain
arithmetic operators, so a "value" is either a native ``float`` (binary64
backend) or a :class:`DD` (double-double backend).  A backend object bundles
the constructors, elementary functions, formatting, and the unit roundoff for
one of the two representations.

Double-double is the unevaluated sum of two binary64 numbers (roughly 31
significant decimal digits).  It exists because superlinear iterations burn
through binary64 in about ten steps: with errors shrinking like
``eta**F(n+1)`` only a handful of steps stay above the binary64 noise floor,
too few to measure a convergence order from.

Full double-double accuracy requires the error terms (about eps times the
value) to stay in the normal binary64 range, so it holds for magnitudes
roughly within [1e-290, 1e290]; toward gradual underflow the low word
denormalizes and precision degrades smoothly back to binary64.  Everything
this package computes lives far inside that window.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext

__all__ = [
    "DD",
    "Binary64",
    "DoubleDouble",
    "get_backend",
    "BACKENDS",
]

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    """Knuth two-sum: s + err == a + b exactly."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Two-sum that assumes |a| >= |b|."""
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a: float) -> tuple[float, float]:
    """Dekker split into two 26/27-bit halves with ahi + alo == a."""
    c = _SPLITTER * a
    abig = c - a
    ahi = c - abig
    return ahi, a - ahi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    """Dekker two-product: p + err == a * b exactly (no FMA on 3.10)."""
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


class DD:
    """Double-double value: normalized unevaluated sum hi + lo.

    Immutable; supports mixed arithmetic with int and float, total ordering,
    and integer powers.  All operations round to roughly 2**-104 relative
    error, which is what the convergence experiments in this package need.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0):
        s, e = _quick_two_sum(float(hi), float(lo))
        object.__setattr__(self, "hi", s)
        object.__setattr__(self, "lo", e)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("DD values are immutable")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_int(i: int) -> "DD":
        hi = float(i)
        return DD(hi, float(i - int(hi)))

    @staticmethod
    def from_str(s: str) -> "DD":
        with localcontext() as ctx:
            ctx.prec = 60
            d = Decimal(s)
            hi = float(d)
            lo = float(d - Decimal(hi))
        return DD(hi, lo)

    @staticmethod
    def _coerce(v) -> "DD":
        if isinstance(v, DD):
            return v
        if isinstance(v, bool):
            return NotImplemented  # type: ignore[return-value]
        if isinstance(v, int):
            return DD.from_int(v)
        if isinstance(v, float):
            return DD(v)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        s1, s2 = _two_sum(self.hi, o.hi)
        t1, t2 = _two_sum(self.lo, o.lo)
        s2 += t1
        s1, s2 = _quick_two_sum(s1, s2)
        s2 += t2
        return DD(s1, s2)

    __radd__ = __add__

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __sub__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p1, p2 = _two_prod(self.hi, o.hi)
        p2 += self.hi * o.lo + self.lo * o.hi
        return DD(p1, p2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.hi == 0.0 and o.lo == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        s, e = _quick_two_sum(q1, q2)
        return DD(s, e) + q3

    def __rtruediv__(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return DD.from_int(1) / self.__pow__(-n)
        result = DD.from_int(1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.hi < 0.0 else self

    # -- ordering ----------------------------------------------------------

    def _cmp_key(self, other):
        o = DD._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o

    def __eq__(self, other):
        o = self._cmp_key(other)
        if o is NotImplemented:
            return NotImplemented
        return self.hi == o.hi and self.lo == o.lo

    def __lt__(self, other):
        o = self._cmp_key(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.hi, self.lo) < (o.hi, o.lo)

    def __le__(self, other):
        o = self._cmp_key(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.hi, self.lo) <= (o.hi, o.lo)

    def __gt__(self, other):
        o = self._cmp_key(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.hi, self.lo) > (o.hi, o.lo)

    def __ge__(self, other):
        o = self._cmp_key(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.hi, self.lo) >= (o.hi, o.lo)

    def __hash__(self):
        return hash((self.hi, self.lo))

    # -- conversions ---------------------------------------------------------

    def __float__(self) -> float:
        return self.hi + self.lo

    def __bool__(self) -> bool:
        return self.hi != 0.0 or self.lo != 0.0

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"


# ln(2) split into two doubles (standard double-double constant).
_LN2 = DD(6.931471805599452862e-01, 2.319046813846299558e-17)


def _dd_sqrt(x: DD) -> DD:
    if x.hi == 0.0 and x.lo == 0.0:
        return DD(0.0)
    if x.hi < 0.0:
        raise ValueError("sqrt of negative double-double")
    s = math.sqrt(x.hi)
    t = DD(s)
    # one Newton correction doubles the working precision
    return t + (x - t * t) / (2.0 * s)


def _dd_exp(x: DD) -> DD:
    if x.hi > 709.0:
        raise OverflowError("double-double exp overflow")
    if x.hi < -745.0:
        return DD(0.0)
    k = int(round(x.hi / _LN2.hi))
    r = x - _LN2 * k
    # Taylor series; |r| <= ln(2)/2 so ~25 terms reach 2**-110.
    term = DD(1.0)
    total = DD(1.0)
    for i in range(1, 26):
        term = term * r / i
        total = total + term
        if abs(term.hi) < 1e-35 * abs(total.hi):
            break
    return DD(math.ldexp(total.hi, k), math.ldexp(total.lo, k))


def _dd_log(x: DD) -> DD:
    if x.hi <= 0.0:
        raise ValueError("log of non-positive double-double")
    y = DD(math.log(x.hi))
    # two Newton steps: y <- y + x*exp(-y) - 1
    for _ in range(2):
        y = y + x * _dd_exp(-y) - 1
    return y


class Binary64:
    """Native IEEE-754 double backend: values are plain floats."""

    name = "binary64"
    eps = 2.0 ** -52
    digits = 17

    @staticmethod
    def of(v) -> float:
        if isinstance(v, str):
            return float(v)
        if isinstance(v, DD):
            return float(v)
        return float(v)

    parse = of

    @staticmethod
    def sqrt(x: float) -> float:
        return math.sqrt(x)

    @staticmethod
    def log(x: float) -> float:
        return math.log(x)

    @staticmethod
    def exp(x: float) -> float:
        return math.exp(x)

    @staticmethod
    def to_float(x) -> float:
        return float(x)

    @staticmethod
    def fmt(x) -> str:
        return f"{float(x):.17g}"


class DoubleDouble:
    """Double-double backend: values are :class:`DD` instances."""

    name = "dd"
    eps = 2.0 ** -104
    digits = 32

    @staticmethod
    def of(v) -> DD:
        if isinstance(v, DD):
            return v
        if isinstance(v, str):
            return DD.from_str(v)
        if isinstance(v, int):
            return DD.from_int(v)
        return DD(float(v))

    parse = of

    sqrt = staticmethod(_dd_sqrt)
    log = staticmethod(_dd_log)
    exp = staticmethod(_dd_exp)

    @staticmethod
    def to_float(x) -> float:
        return float(x)

    @staticmethod
    def fmt(x) -> str:
        v = DoubleDouble.of(x)
        with localcontext() as ctx:
            ctx.prec = 50
            d = Decimal(v.hi) + Decimal(v.lo)
        return f"{d:.31E}"


BACKENDS = {
    "binary64": Binary64,
    "dd": DoubleDouble,
}


def get_backend(name: str):
    """Resolve a backend by its canonical name ('binary64' or 'dd')."""
    try:
        return BACKENDS[name]
    except KeyError:
        raise KeyError(
            f"unknown backend {name!r}; expected one of {sorted(BACKENDS)}"
        ) from None
