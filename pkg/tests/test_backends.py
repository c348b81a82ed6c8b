"""Double-double arithmetic checked against exact rational arithmetic."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from secantlab.backends import DD, Binary64, DoubleDouble, get_backend

finite = st.floats(
    min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False
).filter(lambda v: v == 0.0 or abs(v) > 1e-12)

DD_EPS = DoubleDouble.eps


def as_fraction(x: DD) -> Fraction:
    return Fraction(x.hi) + Fraction(x.lo)


def assert_close_exact(got: DD, want: Fraction, rtol=8 * DD_EPS):
    err = abs(as_fraction(got) - want)
    assert err <= rtol * max(abs(want), Fraction(1, 10 ** 300))


@given(finite, finite)
@settings(max_examples=300)
def test_add_matches_exact(a, b):
    assert_close_exact(DD(a) + DD(b), Fraction(a) + Fraction(b))


@given(finite, finite)
@settings(max_examples=300)
def test_mul_matches_exact(a, b):
    assert_close_exact(DD(a) * DD(b), Fraction(a) * Fraction(b))


@given(finite, finite.filter(lambda v: v != 0.0))
@settings(max_examples=300)
def test_div_matches_exact(a, b):
    assert_close_exact(DD(a) / DD(b), Fraction(a) / Fraction(b))


@given(finite, finite)
@settings(max_examples=200)
def test_sub_matches_exact(a, b):
    assert_close_exact(DD(a) - DD(b), Fraction(a) - Fraction(b))


@given(finite)
def test_binary64_round_trip_is_exact(a):
    x = DD(a)
    assert float(x) == a and x.lo == 0.0


@given(finite, finite)
@settings(max_examples=200)
def test_agrees_with_binary64_to_one_ulp(a, b):
    # exact double inputs: the dd result rounds within 1 ulp of the float one
    for dd_val, f_val in ((DD(a) + b, a + b), (DD(a) * b, a * b)):
        if math.isfinite(f_val):
            assert abs(float(dd_val) - f_val) <= math.ulp(f_val)


# full dd accuracy needs the eps-scaled error words to stay normal, so the
# promised domain keeps clear of gradual underflow
@given(st.floats(min_value=1e-280, max_value=1e280, allow_nan=False))
@settings(max_examples=200)
def test_sqrt_squares_back(a):
    x = DD(a)
    s = DoubleDouble.sqrt(x)
    assert_close_exact(s * s, Fraction(a), rtol=16 * DD_EPS)


def test_sqrt2_residual_at_dd_precision():
    s = DoubleDouble.sqrt(DD.from_int(2))
    assert abs(float(s * s - 2)) <= 4 * DD_EPS * 2


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 10.0, 0.001, 3.14159])
def test_exp_log_round_trip(x):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.prec = 140
    v = DD(x)
    got_log = DoubleDouble.log(v)
    want = mpmath.log(mpmath.mpf(x))
    assert abs(float(as_fraction(got_log)) - float(want)) <= 1e-30 + 8 * DD_EPS * abs(
        float(want)
    )
    back = DoubleDouble.exp(got_log)
    assert abs(float(back - v)) <= 16 * DD_EPS * x


def test_comparisons_and_ordering():
    a = DD.from_str("1.0000000000000000000000000001")
    b = DD.from_str("1.0000000000000000000000000002")
    assert a < b < 2 and b > a and a != b
    assert DD(1.5) == 1.5 and DD(2.0) >= 2 and abs(DD(-3.5)) == 3.5


def test_integer_powers():
    x = DD.from_str("1.5")
    assert float(x ** 0) == 1.0
    assert_close_exact(x ** 7, Fraction(3, 2) ** 7)
    assert_close_exact(x ** -2, Fraction(4, 9))


def test_string_parse_and_format_round_trip():
    s = "-1.6180339887498948482045868343656E+0"
    x = DD.from_str(s)
    assert DoubleDouble.fmt(x) == s
    assert Binary64.fmt(1.5) == "1.5"
    assert len(DoubleDouble.fmt(DD.from_int(3) / 7).split("E")[0].lstrip("-").replace(".", "")) == 32


def test_mixed_int_arithmetic():
    x = DD.from_str("0.1")
    # (1 - 0.1) differs from the float literal 0.9 by its representation error
    want = Fraction(9, 10) - Fraction(0.9)
    assert float((1 - x) - 0.9) == pytest.approx(float(want), abs=4 * DD_EPS)
    assert float(2 * x - x - x) == 0.0


def test_get_backend():
    assert get_backend("binary64") is Binary64
    assert get_backend("dd") is DoubleDouble
    with pytest.raises(KeyError):
        get_backend("quad")


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        DD(1.0) / DD(0.0)


def test_immutability():
    x = DD(1.0)
    with pytest.raises(AttributeError):
        x.hi = 2.0
