"""Exact local analysis around the square configuration.

Pipeline: the six distances are bounded above by the cubic Taylor majorant
sqrt(1 - x) <= 1 - x/2 - x^2/8 - x^3/16, summed and cleared of denominators
to a polynomial J with

    f(s, t, u, v) <= 4 + 4 sqrt2 + J / (8 (s^2+1)^3 (t^2+1)^3 (u^2+1)^3 (v^2+1)^3).

J <= 0 on [-r0, r0]^4 with s + t >= 0 is then reduced to a negative
semidefinite 3x3 quadratic form.  All arithmetic is exact in Q[sqrt2].

Orientation of D: J is built with D = (-2u/(1+u^2), (1-v^2)/(1+v^2)), i.e. the
reflection u -> -u of :func:`geometry.config_from_params`.  This is the
convention under which the expansions of H_2, H_3, H_4 have the signs
recorded in :mod:`hemisum.reference`; the box and all bounds are symmetric in
u, so nothing depends on it.  :func:`config_for_J` performs the reflection.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Sequence

from .exact import OPTIMUM, Q2, SQRT2, q2_sign
from .geometry import Config, ParamVector, config_from_params, distance_sum_exact_bounds
from .poly import (
    MAX_DEGREE,
    VARS,
    DiagQuadForm,
    MultiPoly,
    RationalFn,
    S,
    T,
    U,
    V,
    eval_float,
    eval_poly,
    homog_decompose,
    lemma3_majorize_poly,
    rational_upper,
    split_term_count,
    transform_Sd,
    transform_T,
)

R0 = Fraction(1, 7)
EXTENDED_R0 = 1 / Fraction("6.7845")
COMMON_EXPONENTS = (3, 3, 3, 3)
# coefficientwise caps for res5: (s^2, t^2, u^2) as used in q2, v^2 as used in K2
RES5_CAP_TIGHT = DiagQuadForm.of(Fraction(10, 9), Fraction(10, 9), 1, Fraction(10, 9))
RES5_CAP_LOOSE = DiagQuadForm.of(Fraction(5, 4), Fraction(5, 4), 1, Fraction(5, 4))
MAJORIZERS = ("rounded", "lemma3", "sd-literal")

ONE = MultiPoly.const(1)


class PipelineError(RuntimeError):
    pass


# J -----------------------------------------------------------------------

def denominator(exps: Sequence[int]) -> MultiPoly:
    out = ONE
    for name, e in zip(VARS, exps):
        if e:
            out = out * (MultiPoly.var(name) ** 2 + 1) ** e
    return out


def _points():
    """Each point as ((x numerator, y numerator), denominator exponents)."""
    return {
        "A": ((MultiPoly(), MultiPoly.const(-1)), (0, 0, 0, 0)),
        "B": ((1 - S ** 2, S.scale(2)), (1, 0, 0, 0)),
        "C": ((T ** 2 - 1, T.scale(2)), (0, 1, 0, 0)),
        "D": ((U.scale(-2) * (V ** 2 + 1), (1 - V ** 2) * (U ** 2 + 1)), (0, 0, 1, 1)),
    }


def dot_product(P: str, Q: str) -> RationalFn:
    pts = _points()
    (px, py), pe = pts[P]
    (qx, qy), qe = pts[Q]
    return RationalFn(px * qx + py * qy, tuple(a + b for a, b in zip(pe, qe)))


def taylor_majorant(scale: Q2, x: RationalFn) -> list[RationalFn]:
    """scale * (1 - x/2 - x^2/8 - x^3/16) as a list of rational terms."""
    out = [RationalFn(ONE, (0, 0, 0, 0), scale)]
    for k, c in ((1, Fraction(-1, 2)), (2, Fraction(-1, 8)), (3, Fraction(-1, 16))):
        out.append(RationalFn(x.numerator ** k, tuple(k * e for e in x.denom_exponents),
                              scale * c * x.scalar ** k))
    return out


# pairs whose radicand 2 - 2 dot is written as 4 (1 - (1 + dot)/2)
_WIDE_PAIRS = ("AD", "BC")


def distance_majorants() -> Dict[str, list[RationalFn]]:
    """Upper bound of each warp distance as a sum of rational terms.

    Pairs AB, AC, BD, CD: sqrt(2 - 2 dot) = sqrt2 sqrt(1 - dot).
    Pairs AD, BC (dot near -1): sqrt(2 - 2 dot) = 2 sqrt(1 - (1 + dot)/2).
    """
    out = {}
    for pair in ("AB", "AC", "AD", "BC", "BD", "CD"):
        d = dot_product(pair[0], pair[1])
        if pair in _WIDE_PAIRS:
            x = RationalFn(denominator(d.denom_exponents) + d.numerator, d.denom_exponents, Q2(Fraction(1, 2)))
            out[pair] = taylor_majorant(Q2(2), x)
        else:
            out[pair] = taylor_majorant(SQRT2, d)
    return out


def build_J() -> MultiPoly:
    total = MultiPoly()
    for terms in distance_majorants().values():
        for term in terms:
            total = total + term.over_common(COMMON_EXPONENTS).scale(8)
    J = total - denominator(COMMON_EXPONENTS).scale(OPTIMUM * 8)
    if J.max_degree() > MAX_DEGREE:
        raise PipelineError(f"J has degree {J.max_degree()} > {MAX_DEGREE}")
    return J


def majorant_sum(J: MultiPoly, point: Sequence) -> Q2:
    """4 + 4 sqrt2 + J / (8 Pi^3) at a rational point."""
    den = Fraction(8)
    for x in point:
        den *= (Fraction(x) ** 2 + 1) ** 3
    return OPTIMUM + eval_poly(J, point) / den


def config_for_J(s, t, u, v) -> Config:
    """Configuration whose distance sum J bounds (D reflected in u)."""
    return config_from_params(ParamVector.of(s, t, -Fraction(u), v))


class IntegerEvaluator:
    """Fast exact evaluation of a polynomial with coefficients in Z[sqrt2]."""

    def __init__(self, p: MultiPoly):
        self.degree = p.max_degree() if len(p) else 0
        self.terms = []
        for m, c in p.terms.items():
            if c.a.denominator != 1 or c.b.denominator != 1:
                raise ValueError("coefficients must lie in Z[sqrt2]")
            self.terms.append((m, sum(m), c.a.numerator, c.b.numerator))

    def __call__(self, point: Sequence[Fraction]) -> Q2:
        pt = [Fraction(x) for x in point]
        q = 1
        for x in pt:
            q = q * x.denominator // _gcd(q, x.denominator)
        nums = [int(x * q) for x in pt]
        pw = [[1] * (self.degree + 1) for _ in range(4)]
        qp = [1] * (self.degree + 1)
        for e in range(1, self.degree + 1):
            qp[e] = qp[e - 1] * q
            for i in range(4):
                pw[i][e] = pw[i][e - 1] * nums[i]
        sa = sb = 0
        for m, deg, a, b in self.terms:
            val = pw[0][m[0]] * pw[1][m[1]] * pw[2][m[2]] * pw[3][m[3]] * qp[self.degree - deg]
            sa += a * val
            sb += b * val
        scale = Fraction(1, qp[self.degree])
        return Q2(sa * scale, sb * scale)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# decomposition -----------------------------------------------------------

def v_split(p: MultiPoly) -> Dict[int, MultiPoly]:
    """p = sum_k v^k * out[k] with out[k] free of v."""
    out: Dict[int, dict] = {}
    for m, c in p.terms.items():
        out.setdefault(m[3], {})[(m[0], m[1], m[2], 0)] = c
    return {k: MultiPoly(t) for k, t in sorted(out.items())}


def theta(H: Dict[int, MultiPoly]) -> Dict[int, MultiPoly]:
    """T-images of the components of degree >= 5."""
    return {d: transform_T(h) for d, h in H.items() if d >= 5}


def majorize(th: Dict[int, MultiPoly], r0: Fraction, majorizer: str = "rounded") -> DiagQuadForm:
    """Diagonal quadratic form dominating sum_d T(H_d) on [0, r0]^4.

    ``lemma3``: exact AM-GM bound r^(N-2)/N * sum d_k x_k^2 per monomial.
    ``rounded``: the same after replacing sqrt2 by 10/7 in the (nonnegative)
    coefficients, which yields rational coefficients.
    ``sd-literal``: the weighted formula r^(d-2)/12 * sum ((4d_k^2 - d_k) x_k)^2.
    """
    out = DiagQuadForm.zero()
    for d, p in sorted(th.items()):
        if p.is_zero():
            continue
        if majorizer == "lemma3":
            out = out + lemma3_majorize_poly(p, r0)
        elif majorizer == "rounded":
            out = out + lemma3_majorize_poly(p.map_coeffs(lambda m, c: Q2(rational_upper(c))), r0)
        elif majorizer == "sd-literal":
            out = out + transform_Sd(p, r0, d)
        else:
            raise ValueError(f"unknown majorizer {majorizer!r}")
    return out


def sd_dominates_lemma3(th: Dict[int, MultiPoly], r0: Fraction) -> bool:
    """Termwise check that each literal S_d form dominates its AM-GM bound."""
    for d, p in th.items():
        for m, c in p.terms.items():
            mono = MultiPoly({m: c})
            if not lemma3_majorize_poly(mono, r0).dominated_by(transform_Sd(mono, r0, d)):
                return False
    return True


# quadratic helpers -------------------------------------------------------

def solve_linear(A: list[list[Q2]], b: list[Q2]) -> list[Q2] | None:
    """Gaussian elimination over Q[sqrt2]; None when A is singular."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def quadratic_parts(p: MultiPoly, names: Sequence[str]):
    """(Hessian, gradient at 0, constant) of a quadratic in ``names``."""
    zero = (0, 0, 0, 0)
    grad0 = [p.diff(n).coeff(zero) for n in names]
    hess = [[p.diff(a).diff(b).coeff(zero) for b in names] for a in names]
    return hess, grad0, p.coeff(zero)


@dataclass
class K2Report:
    critical_point: tuple | None
    critical_point_inside_cube: bool | None
    value_at_origin: Q2
    value_at_critical_point: Q2 | None
    face_maxima: list            # (face id, exact maximum) for the 6 closed faces
    max_value: Q2
    argmax: tuple
    half_width: Fraction

    @property
    def valid(self) -> bool:
        """K2 < 0 on the whole closed cube (exact maximum is negative)."""
        return q2_sign(self.max_value) < 0


def analyze_K2(K2: MultiPoly, half_width: Fraction = R0) -> K2Report:
    """Exact maximum of a quadratic K2(s, t, u) over [-h, h]^3.

    Every relatively open face (27 of them, from the interior down to the
    vertices) is visited; the restriction's critical point is a candidate
    when it lies in the face.  A singular restriction is skipped: its
    maximum, if attained inside, is also attained on the face's boundary.
    """
    h = Fraction(half_width)
    names = ("s", "t", "u")
    if any(m[3] for m in K2.terms) or K2.max_degree() > 2:
        raise PipelineError("K2 must be a quadratic in s, t, u")
    hess, g0, _ = quadratic_parts(K2, names)
    crit = solve_linear(hess, [-g for g in g0])
    inside = None if crit is None else all(q2_sign(abs(x) - h) <= 0 for x in crit)
    candidates = []
    for pattern in product((-1, 0, 1), repeat=3):
        q = K2
        for name, sg in zip(names, pattern):
            if sg:
                q = q.substitute(name, h * sg)
        free = [n for n, sg in zip(names, pattern) if sg == 0]
        if free:
            H_, g_, _ = quadratic_parts(q, free)
            sol = solve_linear(H_, [-g for g in g_])
            if sol is None or any(q2_sign(abs(x) - h) > 0 for x in sol):
                continue
        else:
            sol = []
        it = iter(sol)
        point = tuple(Q2(h * sg) if sg else next(it) for sg in pattern)
        candidates.append((pattern, point, eval_poly(K2, point + (Q2(0),))))
    faces = []
    for i, name in enumerate(names):
        for sg, label in ((-1, "-"), (1, "+")):
            vals = [val for pat, _, val in candidates if pat[i] == sg]
            faces.append((f"{name}={label}h", max(vals)))
    best = max(candidates, key=lambda c: c[2])
    return K2Report(
        critical_point=None if crit is None else tuple(crit),
        critical_point_inside_cube=inside,
        value_at_origin=eval_poly(K2, (0, 0, 0, 0)),
        value_at_critical_point=None if crit is None else eval_poly(K2, tuple(crit) + (Q2(0),)),
        face_maxima=faces,
        max_value=best[2],
        argmax=best[1],
        half_width=h,
    )


@dataclass(frozen=True)
class SymMatrix3:
    m11: Q2
    m22: Q2
    m33: Q2
    m12: Q2
    m13: Q2
    m23: Q2

    @classmethod
    def from_rows(cls, rows) -> "SymMatrix3":
        r = [[Q2.coerce(x) for x in row] for row in rows]
        if r[0][1] != r[1][0] or r[0][2] != r[2][0] or r[1][2] != r[2][1]:
            raise ValueError("matrix is not symmetric")
        return cls(r[0][0], r[1][1], r[2][2], r[0][1], r[0][2], r[1][2])

    def rows(self) -> list[list[Q2]]:
        return [[self.m11, self.m12, self.m13],
                [self.m12, self.m22, self.m23],
                [self.m13, self.m23, self.m33]]

    def principal_minors(self) -> dict:
        """All 7 principal minors keyed by index tuple."""
        a = self.rows()
        out = {}
        for k in (1, 2, 3):
            for idx in combinations(range(3), k):
                out[idx] = _det([[a[i][j] for j in idx] for i in idx])
        return out

    def is_nsd(self) -> bool:
        """Negative semidefinite iff every principal minor of -M is >= 0."""
        return all(q2_sign(m * ((-1) ** len(idx))) >= 0 for idx, m in self.principal_minors().items())


def _det(a: list[list[Q2]]) -> Q2:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def hessian_matrix(q: MultiPoly) -> SymMatrix3:
    hess, _, _ = quadratic_parts(q, ("s", "t", "u"))
    return SymMatrix3.from_rows(hess)


def final_matrix_check(M: SymMatrix3) -> bool:
    return M.is_nsd()


# bounds for k30 and k40 ----------------------------------------------------

def orientation_dropped_part(k30: MultiPoly) -> MultiPoly:
    """The part of k30 divisible by (s + t) u^2 with nonpositive coefficient.

    Under s + t >= 0 it is <= 0 and can be dropped.
    """
    c = k30.coeff((1, 0, 2, 0))
    if c != k30.coeff((0, 1, 2, 0)) or q2_sign(c) > 0:
        raise PipelineError("k30 has no droppable (s+t)u^2 part")
    return (S + T) * U ** 2 * MultiPoly.const(c)


def bound_k30_k40(k30: MultiPoly, k40: MultiPoly, r0: Fraction = R0) -> tuple[DiagQuadForm, DiagQuadForm]:
    """AM-GM bounds of k30 (after the orientation drop) and k40 on [-r0, r0]^3."""
    rest = k30 - orientation_dropped_part(k30) if not k30.is_zero() else k30
    b30 = lemma3_majorize_poly(transform_T(rest), r0) if not rest.is_zero() else DiagQuadForm.zero()
    b40 = lemma3_majorize_poly(transform_T(k40), r0) if not k40.is_zero() else DiagQuadForm.zero()
    return b30, b40


# pipeline ----------------------------------------------------------------

@dataclass
class Stage:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class LocalCertificate:
    r0: Fraction
    majorizer_used: str
    J: MultiPoly
    H_components: Dict[int, MultiPoly]
    theta: MultiPoly
    res5: DiagQuadForm
    res5_cap: DiagQuadForm
    K2: MultiPoly
    K2_report: K2Report
    K2_loose: K2Report
    k20: MultiPoly
    k30: MultiPoly
    k40: MultiPoly
    k42: MultiPoly
    k44: Q2
    k30_bound: DiagQuadForm
    k40_bound: DiagQuadForm
    q2: MultiPoly
    final_matrix: SymMatrix3
    nsd_verdict: bool
    orientation_assumption: bool
    stages: list = field(default_factory=list)
    witness: tuple | None = None
    samples: int = 0

    @property
    def valid(self) -> bool:
        return all(st.ok for st in self.stages)

    @property
    def failing_stage(self) -> str | None:
        return next((st.name for st in self.stages if not st.ok), None)

    @property
    def term_count(self) -> int:
        return split_term_count(self.J)

    def H_counts(self) -> list[int]:
        return [split_term_count(self.H_components.get(d, MultiPoly())) for d in range(2, 25)]


_J_CACHE: dict = {}


def cached_J() -> MultiPoly:
    if "J" not in _J_CACHE:
        _J_CACHE["J"] = build_J()
    return _J_CACHE["J"]


def find_positive_witness(J: MultiPoly, r0: Fraction, samples: int = 2000, seed: int = 0):
    """Random search for a rational point of [-r0, r0]^4 with s + t >= 0 and J > 0.

    Candidates come from float sampling; a witness is confirmed exactly.
    """
    rng = random.Random(seed)
    den = 1 << 12
    lim = int(r0 * den)
    ev = IntegerEvaluator(J)
    for _ in range(samples):
        p = [Fraction(rng.randint(-lim, lim), den) for _ in range(4)]
        if p[0] + p[1] < 0:
            p[0], p[1] = -p[0], -p[1]
        if eval_float(J, [float(x) for x in p]) > 0 and q2_sign(ev(p)) > 0:
            return tuple(p)
    return None


def verify_local(r0=R0, majorizer: str = "rounded", samples: int = 2000, seed: int = 0,
                 res5_cap: DiagQuadForm | None = None) -> LocalCertificate:
    """Run the full pipeline; the certificate is valid iff every stage holds."""
    r0 = Fraction(r0)
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    if majorizer not in MAJORIZERS:
        raise ValueError(f"unknown majorizer {majorizer!r}")
    # caps: q2 uses the printed (5/4, 5/4, 1); K2 uses 10/9 for v^2
    cap = res5_cap or DiagQuadForm((RES5_CAP_LOOSE.coeffs[0], RES5_CAP_LOOSE.coeffs[1],
                                    RES5_CAP_LOOSE.coeffs[2], RES5_CAP_TIGHT.coeffs[3]))
    stages = []
    J = cached_J()
    stages.append(Stage("build_J", J.min_degree() == 2 and J.max_degree() == 24,
                        f"{split_term_count(J)} terms, degrees {J.min_degree()}..{J.max_degree()}"))
    H = homog_decompose(J)
    th = theta(H)
    theta_poly = MultiPoly()
    for p in th.values():
        theta_poly = theta_poly + p
    res5 = majorize(th, r0, majorizer)
    ok = res5.dominated_by(cap)
    stages.append(Stage("majorize", ok, f"res5 = {res5}; cap = {cap}"))

    parts = {d: v_split(H[d]) for d in (2, 3, 4)}
    shape_ok = (set(parts[2]) == {0, 2} and set(parts[3]) == {0, 2} and set(parts[4]) == {0, 2, 4}
                and all(p.max_degree() == 0 for p in (parts[2][2], parts[4][4])))
    if not shape_ok:
        raise PipelineError("unexpected v-structure of H2, H3, H4")
    k20, k22 = parts[2][0], parts[2][2]
    k30, k32 = parts[3][0], parts[3][2]
    k40, k42 = parts[4][0], parts[4][2]
    k44 = parts[4][4].coeff((0, 0, 0, 0))
    K2 = k22 + k32 + k42 + MultiPoly.const(cap.coeffs[3])
    K2_loose = k22 + k32 + k42 + MultiPoly.const(RES5_CAP_LOOSE.coeffs[3])
    rep = analyze_K2(K2, r0)
    rep_loose = analyze_K2(K2_loose, r0)
    stages.append(Stage("K2", rep.valid and q2_sign(k44) <= 0,
                        f"max K2 on cube = {rep.max_value} (~{float(rep.max_value):.6f}); v^4 coefficient {k44}"))

    b30, b40 = bound_k30_k40(k30, k40, r0)
    diag = DiagQuadForm((cap.coeffs[0], cap.coeffs[1], cap.coeffs[2], Q2(0))) + b30 + b40
    q2 = k20 + diag.to_poly()
    M = hessian_matrix(q2)
    nsd = final_matrix_check(M)
    stages.append(Stage("final_matrix", nsd, "negative semidefinite" if nsd else "not negative semidefinite"))

    witness = find_positive_witness(J, r0, samples, seed) if samples else None
    stages.append(Stage("sampling", witness is None,
                        f"{samples} samples" + ("" if witness is None else f"; J > 0 at {witness}")))
    return LocalCertificate(
        r0=r0, majorizer_used=majorizer, J=J, H_components=H, theta=theta_poly, res5=res5,
        res5_cap=cap, K2=K2, K2_report=rep, K2_loose=rep_loose, k20=k20, k30=k30, k40=k40,
        k42=k42, k44=k44, k30_bound=b30, k40_bound=b40, q2=q2, final_matrix=M, nsd_verdict=nsd,
        orientation_assumption=True, stages=stages, witness=witness, samples=samples,
    )


def distance_sum_upper(config: Config, k: int = 40) -> Fraction:
    return distance_sum_exact_bounds(config, k).hi
