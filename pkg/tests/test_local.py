import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hemisum import reference as ref
from hemisum.exact import OPTIMUM, Q2, q2_sign
from hemisum.geometry import distance_sum_exact_bounds
from hemisum.local import (
    R0,
    IntegerEvaluator,
    SymMatrix3,
    analyze_K2,
    bound_k30_k40,
    config_for_J,
    final_matrix_check,
    majorant_sum,
    majorize,
    sd_dominates_lemma3,
    solve_linear,
    theta,
    v_split,
    verify_local,
)
from hemisum.poly import MultiPoly, S, T, U, eval_poly, split_term_count

x = MultiPoly.var("s")  # univariate stand-in for the Taylor argument


def test_sqrt_majorant_identity():
    majorant = 1 - x.scale(Fraction(1, 2)) - (x ** 2).scale(Fraction(1, 8)) - (x ** 3).scale(Fraction(1, 16))
    lhs = majorant ** 2 - (1 - x)
    rhs = (x ** 4 * (x ** 2 + x.scale(4) + 20)).scale(Fraction(1, 256))
    assert lhs == rhs


@given(st.fractions(-1, 1, max_denominator=10 ** 6))
def test_sqrt_majorant_inequality(z):
    m = 1 - z / 2 - z ** 2 / 8 - z ** 3 / 16
    assert m >= 0 and m * m - (1 - z) >= 0


def test_J_shape(J, H):
    assert split_term_count(J) == 1288
    assert (J.min_degree(), J.max_degree()) == (2, 24)
    assert H[2] == ref.H2 and H[3] == ref.H3 and H[4] == ref.H4
    assert H[23] == ref.H23 and H[24] == ref.H24
    assert split_term_count(H[2]) == 9 and split_term_count(H[4]) == 28


def test_J_counts_except_h3(J, H):
    counts = [split_term_count(H.get(d, MultiPoly())) for d in range(2, 25)]
    for d, (a, b) in enumerate(zip(counts, ref.REFERENCE.H_counts), start=2):
        if d != 3:
            assert a == b, d
    # printed H3 expands to 6 terms; the printed total 1288 requires 6 as well
    assert counts[1] == split_term_count(ref.H3) == 6
    assert sum(counts) == 1288


def test_theta_counts(H):
    th = theta(H)
    assert sum(len(p) for p in th.values()) == 797
    assert tuple(len(th.get(d, MultiPoly())) for d in range(5, 25)) == ref.REFERENCE.theta_counts


def test_majorant_at_square(J):
    assert majorant_sum(J, (0, 0, 0, 0)) == OPTIMUM


def test_majorant_bounds_objective(J):
    ev = IntegerEvaluator(J)
    rng = random.Random(11)
    for _ in range(200):
        p = [Fraction(rng.randint(-1000, 1000), 7000) for _ in range(4)]
        p[3] = abs(p[3])
        p[2] = max(min(p[2], p[3]), -p[3])
        den = Fraction(8)
        for c in p:
            den *= (c * c + 1) ** 3
        bound = OPTIMUM + ev(p) / den
        f = distance_sum_exact_bounds(config_for_J(*p), 40)
        assert q2_sign(bound - Q2(f.lo) + Q2(Fraction(1, 2 ** 20))) >= 0


def test_integer_evaluator_matches_eval_poly(J):
    rng = random.Random(2)
    ev = IntegerEvaluator(J)
    for _ in range(5):
        p = [Fraction(rng.randint(-50, 50), 343) for _ in range(4)]
        assert ev(p) == eval_poly(J, p)


def test_J_nonpositive_on_box(J):
    ev = IntegerEvaluator(J)
    rng = random.Random(7)
    for _ in range(2000):
        p = [Fraction(rng.randint(-4096, 4096), 4096 * 7) for _ in range(4)]
        if p[0] + p[1] < 0:
            p[0], p[1] = -p[0], -p[1]
        assert q2_sign(ev(p)) <= 0


def test_res5_rounded_route_matches_reference(H):
    assert majorize(theta(H), R0, "rounded") == ref.RES5


def test_sd_literal_route(H):
    th = theta(H)
    sd = majorize(th, R0, "sd-literal")
    assert sd != ref.RES5
    assert sd_dominates_lemma3(th, R0)


def test_lemma3_route_dominated_by_rounded(H):
    th = theta(H)
    assert majorize(th, R0, "lemma3").dominated_by(majorize(th, R0, "rounded"))


def test_k_parts(H):
    parts = {d: v_split(H[d]) for d in (2, 3, 4)}
    assert parts[2][2] == MultiPoly.const(-8)
    assert parts[3][2] == (S + T).scale(Q2(0, 16))
    assert parts[4][2] == ref.K42
    assert parts[4][4] == MultiPoly.const(-18)
    assert parts[2][0] == ref.K20 and parts[3][0] == ref.K30 and parts[4][0] == ref.K40


def test_K2_report(local_cert):
    rep = local_cert.K2_report
    assert rep.critical_point == ref.K2_CRITICAL_POINT
    assert rep.value_at_origin == ref.K2_AT_ORIGIN
    # the printed critical point lies inside [-1/7, 1/7]^3
    assert rep.critical_point_inside_cube
    assert rep.max_value == Q2(Fraction(-2306, 711), Fraction(-32, 79))
    assert rep.valid and all(q2_sign(v) < 0 for _, v in rep.face_maxima)
    assert local_cert.K2_loose.value_at_origin == Q2(Fraction(-27, 4))


def test_K2_gradient_vanishes_at_critical_point(local_cert):
    K2 = local_cert.K2
    pt = tuple(local_cert.K2_report.critical_point) + (Q2(0),)
    for name in "stu":
        assert eval_poly(K2.diff(name), pt) == Q2(0)


def test_analyze_K2_simple():
    rep = analyze_K2(1 - S ** 2 - T ** 2 - U ** 2, Fraction(1, 2))
    assert rep.max_value == Q2(1) and rep.critical_point_inside_cube
    rep = analyze_K2(S + T + U - 10, Fraction(1))
    assert rep.critical_point is None and rep.max_value == Q2(-7)


def test_bounds_k30_k40(H):
    parts = {d: v_split(H[d]) for d in (3, 4)}
    b30, b40 = bound_k30_k40(parts[3][0], parts[4][0], R0)
    assert b30 == ref.K30_BOUND and b40 == ref.K40_BOUND
    z = bound_k30_k40(MultiPoly(), MultiPoly(), R0)
    assert z[0].coeffs == (Q2(0),) * 4 and z[1].coeffs == (Q2(0),) * 4


def test_final_matrix(local_cert):
    assert local_cert.final_matrix.rows() == ref.MATRIX
    diag = local_cert.q2 - local_cert.k20
    assert tuple(diag.coeff(m) for m in ((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0))) == ref.Q2_DIAG
    assert final_matrix_check(local_cert.final_matrix)


def test_nsd_examples():
    eye = SymMatrix3.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    zero = SymMatrix3.from_rows([[0] * 3] * 3)
    assert not final_matrix_check(eye)
    assert final_matrix_check(zero)
    with pytest.raises(ValueError):
        SymMatrix3.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]])


small_q2 = st.builds(Q2, st.integers(-6, 6), st.integers(-6, 6))


@settings(max_examples=300)
@given(st.lists(small_q2, min_size=6, max_size=6))
def test_nsd_agrees_with_eigenvalues(e):
    M = SymMatrix3(*e)
    A = np.array([[float(c) for c in row] for row in M.rows()])
    ev = np.linalg.eigvalsh(A)
    if np.min(np.abs(ev)) < 1e-9:
        return
    assert M.is_nsd() == bool((ev <= 0).all())


def test_solve_linear():
    A = [[Q2(2), Q2(0, 1)], [Q2(0, 1), Q2(3)]]
    sol = solve_linear(A, [Q2(1), Q2(0)])
    assert A[0][0] * sol[0] + A[0][1] * sol[1] == Q2(1)
    assert A[1][0] * sol[0] + A[1][1] * sol[1] == Q2(0)
    assert solve_linear([[Q2(1), Q2(2)], [Q2(2), Q2(4)]], [Q2(1), Q2(1)]) is None


def test_verify_local_default(local_cert):
    assert local_cert.valid
    assert local_cert.majorizer_used == "rounded"
    assert local_cert.res5 == ref.RES5
    assert local_cert.orientation_assumption


def test_verify_local_lemma3_and_smaller_box():
    assert verify_local(R0, "lemma3", samples=200).valid
    assert verify_local(Fraction(1, 8), samples=200).valid


def test_verify_local_sd_literal_fails_majorize():
    c = verify_local(R0, "sd-literal", samples=0)
    assert c.failing_stage == "majorize"


def test_verify_local_r0_one_has_witness(J):
    c = verify_local(Fraction(1), samples=3000)
    assert not c.valid and c.witness is not None
    assert q2_sign(eval_poly(J, c.witness)) > 0


def test_verify_local_rejects_bad_input():
    with pytest.raises(ValueError):
        verify_local(Fraction(0))
    with pytest.raises(ValueError):
        verify_local(R0, "nope")
