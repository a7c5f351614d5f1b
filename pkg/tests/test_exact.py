from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hemisum.exact import (
    OPTIMUM,
    Q2,
    RatInterval,
    as_rat,
    format_q2,
    parse_q2,
    q2_sign,
    sqrt_interval,
    sqrt_lower,
    sqrt_upper,
)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)
q2s = st.builds(Q2, rats, rats)


@pytest.mark.parametrize("a,b,expected", [(0, 0, 0), (1, -1, -1), (3, -2, 1), (-3, 2, -1), (0, 5, 1), (-1, 0, -1)])
def test_q2_sign_examples(a, b, expected):
    assert q2_sign(Q2(a, b)) == expected


def test_q2_arith_examples():
    assert Q2(1, 1) * Q2(1, 1) == Q2(3, 2)
    assert Q2(5, 0) + Q2(0, -3) == Q2(5, -3)
    assert Q2(0, 1) * Q2(0, 1) == Q2(2, 0)


@settings(max_examples=300)
@given(q2s)
def test_q2_sign_matches_high_precision(x):
    with mpmath.workdps(70):
        val = mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.sqrt(2) * mpmath.mpf(x.b.numerator) / x.b.denominator
    expected = (val > 0) - (val < 0)
    assert q2_sign(x) == expected


@given(q2s, q2s, q2s)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + y == y + x


@given(q2s)
def test_inverse(x):
    if x:
        assert x * x.inverse() == Q2(1)


@given(q2s)
def test_format_roundtrip(x):
    assert parse_q2(format_q2(x)) == x


@given(rats, rats)
def test_canonical_form(a, b):
    x = Q2(a, b) * Q2(b, a)
    for part in (x.a, x.b):
        assert part.denominator > 0
        assert gcd(part.numerator, part.denominator) == 1


def test_sqrt_examples():
    assert sqrt_upper(0, 5) == 0 and sqrt_lower(0, 5) == 0
    assert sqrt_upper(4, 3) == 2
    assert sqrt_lower(9, 1) == 3
    assert sqrt_upper(2, 10) == Fraction(1449, 1024)
    assert sqrt_lower(2, 10) == Fraction(1448, 1024)
    assert sqrt_upper(Fraction(9, 4)) == Fraction(3, 2)


def test_sqrt_domain_errors():
    with pytest.raises(ValueError):
        sqrt_upper(-1, 5)
    with pytest.raises(ValueError):
        sqrt_lower(Fraction(-1, 3), 5)


@settings(max_examples=500)
@given(st.fractions(min_value=0, max_value=16, max_denominator=10**9), st.integers(4, 40))
def test_sqrt_sandwich(q, k):
    lo, hi = sqrt_lower(q, k), sqrt_upper(q, k)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(2, 2 ** k)
    assert sqrt_interval(q, k) == RatInterval(lo, hi)


def test_interval_ops():
    a, b = RatInterval(Fraction(-1), Fraction(2)), RatInterval(Fraction(3), Fraction(4))
    assert a + b == RatInterval(Fraction(2), Fraction(6))
    assert a * b == RatInterval(Fraction(-4), Fraction(8))
    assert a.square() == RatInterval(Fraction(0), Fraction(4))
    assert RatInterval(Fraction(9), Fraction(10)).contains(OPTIMUM)
    with pytest.raises(ValueError):
        RatInterval(Fraction(1), Fraction(0))


@given(st.fractions(-5, 5, max_denominator=100), st.fractions(-5, 5, max_denominator=100),
       st.fractions(-5, 5, max_denominator=100), st.fractions(-5, 5, max_denominator=100))
def test_interval_mul_encloses(x, y, w, z):
    i, j = RatInterval(min(x, y), max(x, y)), RatInterval(min(w, z), max(w, z))
    prod = i * j
    for p in (x, y):
        for q in (w, z):
            assert prod.contains(p * q)


def test_as_rat_rejects_floats():
    assert as_rat("1/7") == Fraction(1, 7)
    with pytest.raises(TypeError):
        as_rat(0.5)
