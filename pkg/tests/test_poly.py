import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hemisum.exact import Q2, q2_sign
from hemisum.poly import (
    DiagQuadForm,
    MultiPoly,
    S,
    T,
    U,
    V,
    eval_poly,
    format_form,
    format_poly,
    homog_component,
    homog_decompose,
    lemma3_majorize,
    lemma3_majorize_poly,
    parse_form,
    parse_poly,
    transform_Sd,
    transform_T,
)
from hemisum import reference as ref

small = st.fractions(-3, 3, max_denominator=20)
coeffs = st.builds(Q2, small, small)
monos = st.tuples(*[st.integers(0, 4)] * 4)
polys = st.dictionaries(monos, coeffs, max_size=8).map(MultiPoly)
points = st.tuples(*[st.fractions(-2, 2, max_denominator=50)] * 4)


def test_arith_examples():
    assert (S + T) * (S - T) == S ** 2 - T ** 2
    p = S * T + U.scale(3) - V ** 3
    assert (p + p.scale(-1)).is_zero()
    q = (S + T) * (1 - S * T)
    assert q == S + T - S ** 2 * T - S * T ** 2 and len(q) == 4


def test_homog_component_examples(J):
    assert homog_component(J, 23) == ref.H23
    assert homog_component(J, 24) == ref.H24
    assert homog_component(S ** 2 + S * T ** 3, 5).is_zero()


def test_transform_T_examples(H):
    assert transform_T(S ** 4 * MultiPoly.const(-18)).is_zero()
    assert transform_T(S * T * MultiPoly.const(-16)) == S * T * MultiPoly.const(16)
    assert transform_T(H[24]).is_zero()


def test_transform_Sd_examples():
    r0 = Fraction(1, 7)
    got = transform_Sd(S ** 2 * T ** 2 * U, r0)
    c = r0 ** 3 / 12
    assert got == DiagQuadForm.of(196 * c, 196 * c, 9 * c, 0)
    assert transform_Sd(MultiPoly(), r0) == DiagQuadForm.zero()
    with pytest.raises(ValueError):
        transform_Sd(S ** 3 + T ** 2 * U ** 2, r0)
    with pytest.raises(ValueError):
        transform_Sd(S ** 3 * MultiPoly.const(-1), r0)


def test_lemma3_examples():
    assert lemma3_majorize((1, 1, 0, 0), 1, Fraction(5)) == DiagQuadForm.of(Fraction(1, 2), Fraction(1, 2), 0, 0)
    assert lemma3_majorize((2, 0, 1, 0), 1, Fraction(1, 7)) == DiagQuadForm.of(Fraction(2, 21), 0, Fraction(1, 21), 0)
    assert lemma3_majorize((3, 1, 0, 2), 0, Fraction(1, 7)) == DiagQuadForm.zero()
    with pytest.raises(ValueError):
        lemma3_majorize((1, 0, 0, 0), 1, Fraction(1, 7))


def test_eval_examples(J):
    assert eval_poly(ref.H2, (0, 0, 0, 0)) == Q2(0)
    assert eval_poly(S + T, (Fraction(1, 7), Fraction(-1, 7), 0, 0)) == Q2(0)
    assert eval_poly(J, (0, 0, 0, 0)) == Q2(0)


@given(polys, polys, points)
def test_eval_homomorphism(p, q, x):
    assert eval_poly(p * q, x) == eval_poly(p, x) * eval_poly(q, x)
    assert eval_poly(p + q, x) == eval_poly(p, x) + eval_poly(q, x)


@given(polys)
def test_homog_partition(p):
    total = MultiPoly()
    for h in homog_decompose(p).values():
        total = total + h
    assert total == p


@given(polys)
def test_serialization_roundtrip(p):
    assert parse_poly(format_poly(p)) == p


@given(coeffs, coeffs, coeffs, coeffs)
def test_form_roundtrip(a, b, c, d):
    f = DiagQuadForm.of(a, b, c, d)
    assert parse_form(format_form(f)) == f


@given(polys, points)
def test_T_dominates(p, x):
    ax = tuple(abs(c) for c in x)
    assert q2_sign(eval_poly(transform_T(p), ax) - eval_poly(p, x)) >= 0


@settings(max_examples=200)
@given(st.tuples(*[st.integers(0, 6)] * 4).filter(lambda m: 2 <= sum(m) <= 24),
       st.fractions(0, 5, max_denominator=30),
       st.tuples(*[st.fractions(0, 1, max_denominator=1000)] * 4))
def test_lemma3_sound(m, c, frac):
    r = Fraction(1, 7)
    x = [r * f for f in frac]
    mono = c
    for xi, e in zip(x, m):
        mono *= xi ** e
    form = lemma3_majorize(m, c, r)
    val = sum((f * xi * xi for f, xi in zip(form.coeffs, x)), Q2(0))
    assert q2_sign(val - mono) >= 0


def test_T_dominates_components_of_J(H):
    rng = random.Random(5)
    comps = {d: (h, transform_T(h)) for d, h in H.items() if d >= 5}
    for _ in range(100):
        x = [Fraction(rng.randint(-1000, 1000), 7000) for _ in range(4)]
        ax = [abs(c) for c in x]
        for d, (h, th) in comps.items():
            assert q2_sign(eval_poly(th, ax) - eval_poly(h, x)) >= 0


def test_lemma3_poly_matches_termwise():
    p = S ** 2 * T + U * V ** 2 * MultiPoly.const(Q2(1, 1))
    r = Fraction(1, 7)
    expect = lemma3_majorize((2, 1, 0, 0), 1, r) + lemma3_majorize((0, 0, 1, 2), Q2(1, 1), r)
    assert lemma3_majorize_poly(p, r) == expect
