import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gabor_janssen.intervals import (
    Enclosure,
    ceil_decimals,
    cospi,
    decode_mpfr,
    encode_mpfr,
    pi,
    round_down_float,
    round_up_float,
    sinpi,
    to_fraction,
)
from oracles import exp_bracket, pi_bracket

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=10 ** 6)


def lo_hi(e):
    return to_fraction(e.lo), to_fraction(e.hi)


@given(rationals, rationals)
def test_arithmetic_contains_exact_result(x, y):
    a, b = Enclosure.exact(x, 80), Enclosure.exact(y, 80)
    for enc, exact in ((a + b, x + y), (a - b, x - y), (a * b, x * y), (-a, -x)):
        lo, hi = lo_hi(enc)
        assert lo <= exact <= hi
    if y != 0:
        lo, hi = lo_hi(a / b)
        assert lo <= x / y <= hi


@given(rationals, st.integers(0, 7))
def test_powers_contain_exact_result(x, k):
    lo, hi = lo_hi(Enclosure.exact(x, 64) ** k)
    assert lo <= x ** k <= hi


def test_exact_construction_is_tight():
    e = Enclosure.exact(Fraction(1, 3), 128)
    assert Fraction(1, 3) in e
    assert e.width < Fraction(1, 2 ** 126)
    assert Enclosure.exact(7, 53).width == 0


def test_pi_matches_rational_series():
    lo, hi = pi_bracket()
    enc = pi(200)
    assert to_fraction(enc.lo) <= hi and lo <= to_fraction(enc.hi)
    assert enc.width < Fraction(1, 10 ** 59)


@pytest.mark.parametrize("x", [Fraction(0), Fraction(1), Fraction(-5, 2), Fraction(7, 3),
                               Fraction(-44), Fraction(20)])
def test_exp_matches_rational_series(x):
    lo, hi = exp_bracket(x)
    enc = Enclosure.exact(x, 160).exp()
    assert to_fraction(enc.lo) <= hi and lo <= to_fraction(enc.hi)


def test_exp_of_pi_multiple_agrees_with_oracle():
    # e^(-5 pi / 2) through both routes
    p_lo, p_hi = pi_bracket()
    lo = exp_bracket(-Fraction(5, 2) * p_hi)[0]
    hi = exp_bracket(-Fraction(5, 2) * p_lo)[1]
    enc = (pi(160) * Fraction(-5, 2)).exp()
    assert to_fraction(enc.lo) <= hi and lo <= to_fraction(enc.hi)


def test_log_sqrt_cos_sin():
    e = Enclosure.exact(2, 128)
    assert Fraction(2) in e.sqrt().square()
    assert 0 in (e.log().exp() - 2)
    third = Fraction(1, 3)
    assert Fraction(1, 2) in cospi(third, 128)
    assert 1 in sinpi(Fraction(1, 2), 128) and sinpi(Fraction(1, 2), 128).width == 0
    assert 0 in cospi(Fraction(1, 2), 128)
    assert -1 in cospi(Fraction(5), 128)


def test_division_by_zero_enclosure_rejected():
    with pytest.raises(ZeroDivisionError):
        Enclosure.exact(1, 64) / (Enclosure.exact(1, 64) - 1)


def test_invalid_enclosure_rejected():
    with pytest.raises(ValueError):
        Enclosure(2.0, 1.0)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_outward_float_rounding(x):
    e = Enclosure.exact(Fraction(x) + Fraction(1, 10 ** 30), 200)
    assert Fraction(round_down_float(e.lo)) <= to_fraction(e.lo)
    if math.isfinite(round_up_float(e.hi)):
        assert Fraction(round_up_float(e.hi)) >= to_fraction(e.hi)


def test_round_trip_text_encoding():
    e = Enclosure.exact(Fraction(22, 7), 300)
    assert decode_mpfr(encode_mpfr(e.lo), 300) == e.lo
    assert decode_mpfr(encode_mpfr(e.hi * 0), 53) == 0


def test_ceil_decimals():
    assert ceil_decimals(Fraction("1.993893")) == Fraction("1.99390")
    assert ceil_decimals(Fraction("1.99390")) == Fraction("1.99390")
    assert ceil_decimals(Fraction(2)) == 2


def test_precision_follows_operands():
    a = Enclosure.exact(Fraction(1, 3), 64)
    b = Enclosure.exact(Fraction(1, 3), 256)
    assert (a + b).bits == 256
    assert (-b).bits == 256
