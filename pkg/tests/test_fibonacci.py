"""Fibonacci values, golden-ratio identities, and the closed-form checks."""

import pytest

from secantlab.backends import Binary64, DoubleDouble
from secantlab.errors import IndexOverflowError
from secantlab.fibonacci import (
    FIB_LIMIT,
    binet,
    fib,
    fib_shift_identity,
    golden_constants,
)


def brute_fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_base_cases_and_known_values():
    assert fib(0) == 0
    assert fib(10) == 55
    assert fib(20) == 6765
    assert fib(78) == 8944394323791464


def test_recurrence_exact_through_cap():
    for n in range(2, FIB_LIMIT + 1):
        assert fib(n) == fib(n - 1) + fib(n - 2)
    assert fib(FIB_LIMIT) == brute_fib(FIB_LIMIT)
    assert fib(FIB_LIMIT) < 2 ** 128 <= fib(FIB_LIMIT) + fib(FIB_LIMIT - 1)


def test_index_cap():
    with pytest.raises(IndexOverflowError):
        fib(187)
    with pytest.raises(IndexOverflowError):
        binet(200)
    with pytest.raises(IndexOverflowError):
        fib(-1)


def test_binet_small_values():
    assert float(binet(0)) == 0.0
    assert abs(float(binet(10)) - 55.0) <= Binary64.eps * 55 + 1e-13


def test_binet_rounds_to_exact_fib_in_binary64():
    for n in range(79):
        assert round(float(binet(n, Binary64))) == fib(n), n


def test_binet_dd_relative_error():
    for n in (50, 100, 150, 186):
        got = binet(n, DoubleDouble)
        assert abs(float(got) - fib(n)) <= 1e-28 * fib(n)


@pytest.mark.parametrize("backend", [Binary64, DoubleDouble])
def test_golden_identities(backend):
    g = golden_constants(backend)
    eps = backend.eps
    assert abs(float(g.r0 * g.r0 - (g.r0 + 1))) <= 8 * eps
    assert float(g.r0 + g.r1) == 1.0
    assert abs(float(g.r0 * g.r1 + 1)) <= 8 * eps


def test_shift_identity_binary64_small_indices():
    eps = Binary64.eps
    assert float(fib_shift_identity(1)) <= 4 * eps
    assert float(fib_shift_identity(10)) <= 1e3 * eps
    assert float(fib_shift_identity(30)) <= 1e7 * eps


def test_shift_identity_dd_through_100():
    eps = DoubleDouble.eps
    for n in range(101):
        assert float(fib_shift_identity(n, DoubleDouble)) <= 10 * eps * fib(n + 1), n
