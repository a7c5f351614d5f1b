"""Reference values that runs are compared against.

Polynomials are stored as text in the canonical serialization of
:mod:`hemisum.poly`, in the D-orientation used by :func:`local.build_J`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Q2
from .poly import DiagQuadForm, MultiPoly, S, T, U, V

r2 = Q2(0, 1)


def _c(a=0, b=0) -> MultiPoly:
    return MultiPoly.const(Q2(a, b))


H2 = (S ** 2 * _c(-8, -8) - S * T * _c(16) + T ** 2 * _c(-8, -8) + S * U * _c(0, 8)
      - T * U * _c(0, 8) - U ** 2 * _c(0, 8) - V ** 2 * _c(8))
H3 = (S * U - T * U + U ** 2 * _c(3) - V ** 2 * _c(4)) * (S + T) * _c(0, -4)
H4 = (
    V ** 4 * _c(-18) + S ** 4 * _c(0, -8) + T ** 4 * _c(0, -8) + U ** 4 * _c(0, -8)
    + S ** 2 * T ** 2 * _c(0, -48) + S ** 2 * U ** 2 * _c(0, -32) + S ** 2 * V ** 2 * _c(0, -8)
    + S * U ** 3 * _c(0, 16) + T ** 2 * U ** 2 * _c(0, -32) + T ** 2 * V ** 2 * _c(0, -8)
    + T * U ** 3 * _c(0, -16) + U ** 2 * V ** 2 * _c(0, -24) + S ** 2 * T ** 2 * _c(-44)
    + S ** 2 * U ** 2 * _c(-24) + S ** 2 * V ** 2 * _c(-48) + T ** 2 * U ** 2 * _c(-24)
    + T ** 2 * V ** 2 * _c(-48) + U ** 2 * V ** 2 * _c(-24) + S ** 3 * T * _c(-40)
    + S * T ** 3 * _c(-40) + S * T * U ** 2 * _c(-48) + S * T * V ** 2 * _c(-48)
    + S ** 2 * T * U * _c(0, -24) + S * T ** 2 * U * _c(0, 24) + S * U * V ** 2 * _c(0, 8)
    + T * U * V ** 2 * _c(0, -8) + S ** 4 * _c(-18) + T ** 4 * _c(-18)
)
H23 = (S ** 6 * T ** 5 + S ** 5 * T ** 6) * U ** 6 * V ** 6 * _c(0, 16)
H24 = S ** 6 * T ** 6 * U ** 6 * V ** 6 * _c(-11)

K42 = (S ** 2 * _c(0, -8) + S * U * _c(0, 8) + T ** 2 * _c(0, -8) - T * U * _c(0, 8)
       + U ** 2 * _c(0, -24) - S ** 2 * _c(48) - S * T * _c(48) - T ** 2 * _c(48) - U ** 2 * _c(24))
K20 = (S ** 2 * _c(0, -8) + T ** 2 * _c(0, -8) + U ** 2 * _c(0, -8) + S * U * _c(0, 8)
       - T * U * _c(0, 8) - S * T * _c(16) - T ** 2 * _c(8) - S ** 2 * _c(8))
K30 = (S + T) * U ** 2 * _c(0, -12) + (T ** 2 - S ** 2) * U * _c(0, 4)
K40 = (
    S ** 4 * _c(0, -8) + T ** 4 * _c(0, -8) + U ** 4 * _c(0, -8) + S ** 2 * T ** 2 * _c(0, -48)
    + S ** 2 * U ** 2 * _c(0, -32) + T ** 2 * U ** 2 * _c(0, -32) + S ** 2 * U ** 2 * _c(-24)
    + T ** 2 * U ** 2 * _c(-24) + S ** 2 * T ** 2 * _c(-44) + S ** 4 * _c(-18) + T ** 4 * _c(-18)
    + S * U ** 3 * _c(0, 16) - T * U ** 3 * _c(0, 16) - S ** 3 * T * _c(40) - S * T ** 3 * _c(40)
    - S * T * U ** 2 * _c(48) + S ** 2 * T * U * _c(0, -24) + S * T ** 2 * U * _c(0, 24)
)

RES5_S = Fraction(2223743956730603493021422, 2198957644322995555530531)
RES5_U = Fraction(351460055057882361271126, 377598787408999236808273)
RES5_V = Fraction(39371575001649787465938178, 37382279953490924444019027)
RES5 = DiagQuadForm.of(RES5_S, RES5_S, RES5_U, RES5_V)

K30_BOUND = DiagQuadForm.of(Q2(0, Fraction(8, 21)), Q2(0, Fraction(8, 21)), Q2(0, Fraction(8, 21)), 0)
K40_BOUND = DiagQuadForm.of(Q2(Fraction(52, 49), Fraction(22, 49)), Q2(Fraction(52, 49), Fraction(22, 49)),
                            Q2(Fraction(24, 49), Fraction(36, 49)), 0)
Q2_DIAG = (Q2(Fraction(453, 196), Fraction(122, 147)), Q2(Fraction(453, 196), Fraction(122, 147)),
           Q2(Fraction(73, 49), Fraction(164, 147)))
DIAG_ENTRY = Q2(Fraction(-1115, 98), Fraction(-2108, 147))
MATRIX = [
    [DIAG_ENTRY, Q2(-16), Q2(0, 8)],
    [Q2(-16), DIAG_ENTRY, Q2(0, -8)],
    [Q2(0, 8), Q2(0, -8), Q2(Fraction(146, 49), Fraction(-2024, 147))],
]
K2_CRITICAL_POINT = (Q2(Fraction(-2, 79), Fraction(9, 79)), Q2(Fraction(-2, 79), Fraction(9, 79)), Q2(0))
K2_AT_ORIGIN = Q2(Fraction(-62, 9))


@dataclass(frozen=True)
class ReferenceStats:
    """Reference counts.  Timings are context only and never compared."""

    cover_size: int = 806_400
    grid_circle: int = 60
    grid_disk: int = 224
    step1_bound_pass: int = 10_648
    step1_survivors: int = 4_300
    step2_raw: int = 17_612_800
    step2_feasible: int = 1_105_782
    step2_bound_pass: int = 844_917
    step2_neighborhood: int = 2_048
    step2_sum_tested: int = 823_663
    step2_survivors: int = 19_206
    step3_resolved_128: int = 19_107
    step3_resolved_512: int = 199
    J_terms: int = 1288
    J_degrees: tuple = (2, 24)
    H_counts: tuple = (9, 20, 28, 20, 59, 44, 101, 70, 134, 88, 145, 90, 133, 74, 100, 50, 59,
                       26, 29, 10, 10, 2, 1)
    theta_terms: int = 797
    theta_counts: tuple = (20, 24, 44, 42, 70, 57, 88, 64, 90, 57, 74, 42, 50, 24, 26, 10, 10, 3, 2, 0)
    timings: tuple = (15.922, 1170.266, 8777.250)
    res5: DiagQuadForm = field(default=RES5)
    K2_at_origin: Q2 = field(default=K2_AT_ORIGIN)


REFERENCE = ReferenceStats()
