import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from gabor_janssen.errors import (
    DomainError,
    HypothesisViolated,
    OrderTooLarge,
    OrderTooSmall,
    PrecisionExhausted,
)
from gabor_janssen.intervals import Enclosure, pi, to_fraction
from gabor_janssen.specfun import (
    CERTIFIED,
    FAST,
    LogSigned,
    PrecisionConfig,
    crude_bound,
    gamma_tail_bound,
    incomplete_gamma_upper,
    kras1_bound,
    kras1_interval,
    krasikov_layer_bounds,
    laguerre_eval,
    laguerre_explicit,
    laguerre_logsigned,
    laguerre_range,
    largest_root_upper,
    power_geometric_numerator,
    power_geometric_tail,
    szego_bound,
)
from oracles import pi_bracket

mpmath.mp.dps = 50


# -- Laguerre values ---------------------------------------------------------

def test_first_order_is_one_minus_x():
    assert -1 in laguerre_eval(1, 2)
    assert laguerre_explicit(1, 5) == -4


@pytest.mark.parametrize("n", [0, 1, 5, 36, 120])
def test_value_at_zero_is_one(n):
    e = laguerre_eval(n, 0)
    assert e.lo == 1 and e.hi == 1


def test_third_order_at_two():
    assert laguerre_explicit(3, 2) == Fraction(-1, 3)
    assert Fraction(-1, 3) in laguerre_eval(3, 2)


def test_explicit_constant_term_and_order_limit():
    assert laguerre_explicit(3, 0) == 1
    with pytest.raises(OrderTooLarge):
        laguerre_explicit(65, 1)


def test_order_15_changes_sign_between_31_and_32():
    assert laguerre_explicit(15, 31) * laguerre_explicit(15, 32) < 0
    root = Fraction("31.407519169754")
    assert abs(laguerre_explicit(15, root)) < Fraction(1, 10 ** 6)


@settings(max_examples=200)
@given(st.integers(0, 30), st.fractions(min_value=-50, max_value=200, max_denominator=10 ** 4))
def test_recurrence_encloses_exact_value(n, x):
    assert laguerre_explicit(n, x) in laguerre_eval(n, x)


def test_certified_width_target_met():
    e = laguerre_eval(30, Fraction(91, 3))
    assert e.width <= CERTIFIED.target_width


def test_precision_exhaustion():
    tight = PrecisionConfig(bits=64, target_width=1e-300, max_bits=128)
    with pytest.raises(PrecisionExhausted):
        laguerre_eval(20, Fraction(1, 3), tight)


@given(st.integers(0, 25), st.fractions(min_value=-20, max_value=100, max_denominator=100))
def test_two_precisions_intersect_and_narrow(n, x):
    lo_p = laguerre_eval(n, x, PrecisionConfig(bits=128, target_width=1e-20))
    hi_p = laguerre_eval(n, x, PrecisionConfig(bits=256, target_width=1e-20))
    assert lo_p.intersects(hi_p)
    assert hi_p.width <= lo_p.width + Fraction(1, 10 ** 60)


@given(st.integers(0, 40), st.floats(-30, 300))
def test_fast_mode_tracks_exact_value(n, x):
    exact = float(laguerre_explicit(n, Fraction(x)))
    fast = laguerre_eval(n, x, FAST)
    assert fast.lo == fast.hi
    assert math.isclose(fast.lo, exact, rel_tol=1e-9, abs_tol=1e-9 * max(1.0, math.exp(x / 2)))


def test_fast_mode_survives_large_orders():
    ls = laguerre_logsigned(120, 1900.0)
    assert ls.sign != 0 and math.isfinite(ls.log_mag)
    ref = mpmath.laguerre(120, 0, 1900)
    assert math.isclose(ls.log_mag, float(mpmath.log(abs(ref))), rel_tol=1e-12)


def test_logsigned_invariants():
    assert LogSigned.from_float(0.0) == LogSigned(0, -math.inf)
    with pytest.raises(ValueError):
        LogSigned(0, 1.0)
    prod = LogSigned.from_float(-2.0) * LogSigned.from_float(3.0)
    assert math.isclose(float(prod), -6.0)
    assert float(LogSigned(1, 1000.0)) == math.inf


def test_range_evaluation_covers_interval():
    x = Enclosure.exact(31, 128).hull(Enclosure.exact(32, 128))
    r = laguerre_range(15, x)
    for t in (31, Fraction(63, 2), Fraction("31.4075"), 32):
        assert laguerre_explicit(15, t) in r


# -- analytic bounds -----------------------------------------------------------

def test_szego_examples():
    assert szego_bound(0) == 1.0
    assert abs(laguerre_explicit(5, 3)) <= Fraction(szego_bound(3))
    assert abs(laguerre_explicit(20, 40)) <= Fraction(szego_bound(40))
    with pytest.raises(DomainError):
        szego_bound(-1)


def test_szego_dominates_on_grid():
    for n in range(0, 41):
        for i in range(0, 8 * n + 1, max(1, n // 4)):
            x = Fraction(i, 2)
            assert abs(laguerre_explicit(n, x)) <= Fraction(szego_bound(x))


def test_crude_bound_examples():
    assert 2 in crude_bound(1, 1)
    assert 480 in crude_bound(4, 2)
    assert 16 * math.comb(15, 7) * 8 ** 15 in crude_bound(15, 8)
    with pytest.raises(DomainError):
        crude_bound(3, Fraction(1, 2))


def test_crude_bound_dominates_on_grid():
    for n in range(0, 41):
        for i in range(2, 8 * n + 1, max(1, n // 3)):
            x = Fraction(i, 2)
            assert abs(laguerre_explicit(n, x)) <= to_fraction(crude_bound(n, x).hi)


def test_largest_root_examples():
    assert math.isclose(largest_root_upper(1), 3 + math.sqrt(9.25))
    assert 31.4075 < largest_root_upper(15) < 62.01
    # all roots of L_3 below the bound: no sign change past it
    bound = Fraction(largest_root_upper(3))
    assert all(laguerre_explicit(3, bound + k) < 0 for k in range(0, 40))


def test_roots_confined_below_bound():
    for n in range(1, 31):
        start = math.ceil(largest_root_upper(n))
        for x in range(start, 10 * n + 1 + start):
            assert laguerre_explicit(n, x) * (-1) ** n > 0


def test_krasikov_examples_and_domain():
    with pytest.raises(OrderTooSmall):
        krasikov_layer_bounds(10)
    b = krasikov_layer_bounds(11)
    expected_b1 = mpmath.e ** (12 * (mpmath.pi + 1))
    assert to_fraction(b.at_minus.lo) <= Fraction(str(expected_b1 * (1 + mpmath.mpf(10) ** -40)))


def _abs_bound_over(n, x_lo, x_hi):
    """Upper bound of |L_n| on [x_lo, x_hi] from exact value plus derivative bound."""
    coeffs = [Fraction((-1) ** k * math.comb(n, k), math.factorial(k)) for k in range(n + 1)]
    slope = sum(abs(c) * k * max(abs(x_lo), abs(x_hi)) ** (k - 1) for k, c in enumerate(coeffs) if k)
    return abs(laguerre_explicit(n, x_lo)) + slope * (x_hi - x_lo)


def test_krasikov_bounds_dominate_oracle():
    p_lo, p_hi = pi_bracket()
    for n in range(11, 41):
        b = krasikov_layer_bounds(n)
        # all coefficients of L_n(-x) are positive, so the value grows with x
        assert laguerre_explicit(n, -(n + 1) * p_hi) <= to_fraction(b.at_minus.lo)
        assert _abs_bound_over(n, (n + 1) * p_lo, (n + 1) * p_hi) <= to_fraction(b.at_one.lo)
        assert _abs_bound_over(n, 2 * (n + 1) * p_lo, 2 * (n + 1) * p_hi) <= to_fraction(b.at_two.lo)


def test_kras1_examples():
    v = kras1_bound(2, 5)
    q2, s2 = (float(e.mid) for e in kras1_interval(2))
    ref = math.exp(2.5) * math.sqrt((s2 - q2) / ((5 - q2) * (s2 - 5)))
    assert math.isclose(float(v.mid), ref, rel_tol=1e-12)
    assert abs(laguerre_explicit(2, 5)) <= to_fraction(v.lo)
    assert kras1_bound(12, pi(128) * 13).hi > 0
    with pytest.raises(DomainError):
        kras1_bound(12, kras1_interval(12)[0])


def test_kras1_dominates_inside_interval():
    for n in (2, 5, 11, 20):
        q2, s2 = (to_fraction(e.mid) for e in kras1_interval(n))
        for i in range(1, 40):
            x = q2 + (s2 - q2) * Fraction(i, 40)
            assert abs(laguerre_explicit(n, x)) <= to_fraction(kras1_bound(n, x).hi)


def test_incomplete_gamma_examples():
    v = incomplete_gamma_upper(1, 1, 2)
    assert float(v.lo) >= float(mpmath.gammainc(1, 1))
    assert float(incomplete_gamma_upper(2, 5, 2).lo) >= float(mpmath.gammainc(2, 5))
    with pytest.raises(HypothesisViolated):
        incomplete_gamma_upper(5, 3, 2)


@given(st.integers(1, 30), st.integers(2, 5), st.floats(0.0, 50.0))
def test_incomplete_gamma_dominates(s, B, extra):
    x = Fraction(B * (s - 1), B - 1) + Fraction(extra) + Fraction(1, 1000)
    bound = incomplete_gamma_upper(s, x, B)
    assert mpmath.gammainc(s, mpmath.mpf(x.numerator) / x.denominator) <= mpmath.mpf(float(bound.hi))


def _brute_layer_sum(n, gamma, A, R=60):
    c = mpmath.pi * gamma / 2
    total = mpmath.mpf(0)
    for k in range(-R, R + 1):
        for l in range(-R, R + 1):
            m = k * k + l * l
            if m >= A:
                total += mpmath.mpf(m) ** n * mpmath.exp(-c * m)
    return total


def test_gamma_tail_examples():
    v = gamma_tail_bound(15, 11, a_squared=8)
    assert v.hi < 1e-40
    v36 = gamma_tail_bound(36, 37, 2)
    assert v36.hi < 1e-77


def test_uncorrected_integral_bound_is_too_small():
    brute = _brute_layer_sum(1, 2, 4)
    naive = 4 / mpmath.mpf(2) * 2 ** 2 * mpmath.exp(-4 * mpmath.pi * 2 / 2)
    assert brute > naive
    assert brute <= float(gamma_tail_bound(1, 2, 2).hi)


@pytest.mark.parametrize("a", [2, 3])
@pytest.mark.parametrize("gamma", range(2, 9))
@pytest.mark.parametrize("n", range(1, 7))
def test_gamma_tail_sound_against_brute_force(n, gamma, a):
    brute = _brute_layer_sum(n, gamma, a * a, R=30 if gamma > 2 else 60)
    try:
        bound = gamma_tail_bound(n, gamma, a)
    except HypothesisViolated:
        assert mpmath.pi * gamma * a * a / 2 <= 2 * (n + 1)
        return
    assert brute <= mpmath.mpf(float(bound.hi))


def test_power_geometric_examples():
    assert 2 in power_geometric_tail(1, Fraction(1, 2), 1)
    q = (pi(256) * Fraction(-5, 2)).exp()
    s = power_geometric_tail(5, q, 36, bits=256)
    assert s.hi <= Fraction(1, 10 ** 115)
    assert power_geometric_numerator(5, 36) == [
        60466176, -293453099, 570164066, -554350974, 269695826, -52521875]


def test_power_geometric_order_16_at_3_06():
    q = (pi(128) * Fraction(-153, 100)).exp()
    s = power_geometric_tail(16, q, 36)
    lead = (pi(128) * Fraction(153, 50)) ** 15 * (4 * 16 * math.comb(15, 7))
    assert (lead * s).hi < Fraction(1, 10 ** 29)


@given(st.integers(1, 12), st.fractions(min_value=Fraction(1, 100), max_value=Fraction(9, 10),
                                         max_denominator=1000), st.integers(1, 40))
def test_power_geometric_matches_closed_form(p, q, N):
    if ((Fraction(N + 1, N)) ** p) * q > 1:
        with pytest.raises(HypothesisViolated):
            power_geometric_tail(p, q, N)
        return
    enc = power_geometric_tail(p, q, N, target_width=1e-25)
    poly = power_geometric_numerator(p, N)
    exact = q ** N * sum(c * q ** j for j, c in enumerate(poly)) / (1 - q) ** (p + 1)
    assert exact in enc


def test_power_geometric_rejects_bad_input():
    with pytest.raises(DomainError):
        power_geometric_tail(1, Fraction(3, 2), 1)
    with pytest.raises(HypothesisViolated):
        power_geometric_tail(10, Fraction(9, 10), 2)


def test_precision_config_validation():
    with pytest.raises(ValueError):
        PrecisionConfig(bits=32)
    with pytest.raises(ValueError):
        PrecisionConfig(target_width=0)
    with pytest.raises(ValueError):
        PrecisionConfig(mode="sloppy")
