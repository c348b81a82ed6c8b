"""Exact Fibonacci numbers, golden-ratio constants, and closed-form checks.

The golden ratio governs the secant method's superlinear order, and the
closed-form (Binet) expression for Fibonacci numbers is what turns the error
product recursion into an explicit exponent, so this module keeps both exact
integer values and floating evaluations side by side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends import Binary64, DD, DoubleDouble
from .errors import IndexOverflowError

__all__ = [
    "FIB_LIMIT",
    "GoldenConstants",
    "fib",
    "binet",
    "fib_shift_identity",
    "golden_constants",
]

# Largest index whose Fibonacci number fits in 128 unsigned bits.
FIB_LIMIT = 186


def _build_table(limit: int) -> tuple[int, ...]:
    vals = [0, 1]
    for _ in range(2, limit + 1):
        vals.append(vals[-1] + vals[-2])
    return tuple(vals)


_FIBS = _build_table(FIB_LIMIT)


@dataclass(frozen=True)
class GoldenConstants:
    """Golden ratio r0 and its conjugate r1 = 1 - r0, at backend precision."""

    r0: object
    r1: object


def _check_index(n: int, limit: int = FIB_LIMIT) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("Fibonacci index must be an int")
    if n < 0:
        raise IndexOverflowError(f"Fibonacci index must be nonnegative, got {n}")
    if n > limit:
        raise IndexOverflowError(
            f"Fibonacci index {n} exceeds the exact cap {limit}"
        )


def fib(n: int) -> int:
    """Exact Fibonacci number F(n) for 0 <= n <= 186."""
    _check_index(n)
    return _FIBS[n]


def golden_constants(backend=Binary64) -> GoldenConstants:
    """r0 = (1 + sqrt 5)/2 and r1 = 1 - r0, computed at backend precision.

    The constants come from the backend square root rather than decimal
    literals so that identities like r0**2 == r0 + 1 hold to backend epsilon.
    """
    one = backend.of(1)
    r0 = (one + backend.sqrt(backend.of(5))) / 2
    return GoldenConstants(r0=r0, r1=one - r0)


# Internal extended-precision constants for the closed-form evaluation.  The
# naive binary64 path drifts off the exact integers near n = 71 (the relative
# error of r0**n times F(n) passes 0.5), so the formula is always evaluated in
# double-double and rounded into the requested backend at the end.
_SQRT5_DD = DoubleDouble.sqrt(DD.from_int(5))
_R0_DD = (1 + _SQRT5_DD) / 2
_R1_DD = 1 - _R0_DD


def binet(n: int, backend=Binary64):
    """Closed-form Fibonacci value (r0**n - r1**n) / sqrt(5) as a backend Real.

    Rounds to the exact integer F(n) for every n representable in the
    backend's precision (n <= 78 in binary64).
    """
    _check_index(n)
    value = (_R0_DD ** n - _R1_DD ** n) / _SQRT5_DD
    if backend is DoubleDouble:
        return value
    return backend.of(float(value))


def fib_shift_identity(n: int, backend=Binary64):
    """Residual |F(n+1) - (r0*F(n) + r1**n)|, evaluated in the backend.

    The identity is exact in real arithmetic; the returned value measures
    how far backend rounding moves it and is expected to be ~eps * F(n+1).
    """
    _check_index(n, FIB_LIMIT - 1)
    g = golden_constants(backend)
    f_n = backend.of(fib(n))
    f_n1 = backend.of(fib(n + 1))
    return abs(f_n1 - (g.r0 * f_n + g.r1 ** n))
