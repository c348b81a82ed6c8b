"""Characteristic polynomials of the error-ratio recursion and the ratio map.

For an m-fold root the consecutive-error ratios of the secant method obey the
one-step map h_m(k) = (1 - k**(m-1)) / (1 - k**m); its attracting fixed point
c_{m,0} in (0, 1) is the linear convergence rate.  The fixed points solve
p_m(k) = k**m + k**(m-1) - 1 = 0, and for even m two further landmarks govern
the sign-alternating dynamics: the repelling fixed point c_{m,1} in (-2, -1)
(second real root of p_m) and c_{m,2}, the root of q_m = p_m - 1 on
[-2, c_{m,1}), which is the preimage of the breakdown point -1.

All roots are bracketed by proven monotonicity, so plain bisection is used:
50 halvings reach 1e-14 in binary64, 110 reach 1e-30 in double-double.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .backends import Binary64
from .errors import OddMultiplicityError, PoleAtUnitPowerError

__all__ = [
    "CharConstants",
    "p_poly",
    "q_poly",
    "solve_c_m0",
    "solve_c_2m1",
    "solve_c_2m2",
    "char_constants",
    "h_map",
    "h_prime",
]


@dataclass(frozen=True)
class CharConstants:
    """Characteristic constants for multiplicity m (even-only fields None)."""

    m: int
    c_m0: object
    c_2m1: Optional[object] = None
    c_2m2: Optional[object] = None


def _check_m(m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ValueError(f"multiplicity must be an integer >= 2, got {m!r}")


def _check_even(m: int) -> None:
    _check_m(m)
    if m % 2:
        raise OddMultiplicityError(f"multiplicity {m} is odd; an even value is required")


def p_poly(m: int, k):
    """k**m + k**(m-1) - 1, evaluated as k**(m-1) * (k + 1) - 1."""
    _check_m(m)
    return k ** (m - 1) * (k + 1) - 1


def q_poly(m: int, k):
    """p_m(k) - 1 = k**m + k**(m-1) - 2 (even m only)."""
    _check_even(m)
    return p_poly(m, k) - 1


_BISECT_ITERS = {"binary64": 50, "dd": 110}


def _bisect(fn, lo, hi, backend):
    """Bisection on a bracket with a sign change; monotonicity makes the
    located root unique, so no safeguards are needed."""
    f_lo = fn(lo)
    f_hi = fn(hi)
    if float(f_lo) == 0.0:
        return lo
    if float(f_hi) == 0.0:
        return hi
    if (float(f_lo) < 0.0) == (float(f_hi) < 0.0):
        raise ValueError("bisection bracket does not change sign")
    neg_low = float(f_lo) < 0.0
    for _ in range(_BISECT_ITERS[backend.name]):
        mid = (lo + hi) / 2
        f_mid = fn(mid)
        if float(f_mid) == 0.0:
            return mid
        if (float(f_mid) < 0.0) == neg_low:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def solve_c_m0(m: int, backend=Binary64):
    """Root of p_m in (0, 1): the linear convergence rate at an m-fold root."""
    _check_m(m)
    return _bisect(lambda k: p_poly(m, k), backend.of(0), backend.of(1), backend)


def solve_c_2m1(m: int, backend=Binary64):
    """Second real root of p_m, in (-2, -1); the repelling ratio fixed point."""
    _check_even(m)
    return _bisect(lambda k: p_poly(m, k), backend.of(-2), backend.of(-1), backend)


def solve_c_2m2(m: int, backend=Binary64):
    """Root of q_m on [-2, c_{m,1}); exactly -2 when m == 2."""
    _check_even(m)
    if m == 2:
        return backend.of(-2)
    hi = solve_c_2m1(m, backend)
    return _bisect(lambda k: q_poly(m, k), backend.of(-2), hi, backend)


def char_constants(m: int, backend=Binary64) -> CharConstants:
    _check_m(m)
    if m % 2:
        return CharConstants(m=m, c_m0=solve_c_m0(m, backend))
    return CharConstants(
        m=m,
        c_m0=solve_c_m0(m, backend),
        c_2m1=solve_c_2m1(m, backend),
        c_2m2=solve_c_2m2(m, backend),
    )


def _pole_guard(m: int, k, backend):
    """Denominator 1 - k**m, or raise near the poles k**m == 1."""
    den = 1 - k ** m
    scale = max(1.0, abs(float(k)) ** m)
    if abs(float(den)) < 1e3 * backend.eps * scale:
        raise PoleAtUnitPowerError(
            f"ratio map pole: |1 - k**{m}| < {1e3 * backend.eps:g} at k = {float(k)!r}"
        )
    return den


def h_map(m: int, k, backend=Binary64):
    """One-step error-ratio map (1 - k**(m-1)) / (1 - k**m).

    Near k = 1 the quotient is evaluated through the cancelled geometric-sum
    form sum(k**j, j<m-1) / sum(k**j, j<m), which removes the 0/0.
    """
    _check_m(m)
    k = backend.of(k)
    if abs(float(k) - 1.0) < 1e-3:
        num = backend.of(0)
        for j in range(m - 1):
            num = num + k ** j
        return num / (num + k ** (m - 1))
    return (1 - k ** (m - 1)) / _pole_guard(m, k, backend)


def h_prime(m: int, k, backend=Binary64):
    """Closed-form derivative of the ratio map for even m."""
    _check_even(m)
    k = backend.of(k)
    den = _pole_guard(m, k, backend)
    num = m * k ** (m - 1) - (m - 1) * k ** (m - 2) - k ** (2 * m - 2)
    return num / (den * den)
