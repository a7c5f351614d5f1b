"""Sparse polynomials in (s, t, u, v) with coefficients in Q[sqrt2].

Besides plain ring arithmetic this module carries the coefficient
absolutization ``transform_T`` and the two monomial majorizers that turn a
high-degree homogeneous polynomial with nonnegative coefficients into a
diagonal quadratic form:

* :func:`transform_Sd`, the weighting ``r0**(d-2)/12 * (4 d_k^2 - d_k)^2``;
* :func:`lemma3_majorize`, the AM-GM type bound
  ``x^d <= r**(N-2)/N * sum_k d_k x_k^2`` valid for ``0 <= x_k <= r``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .exact import Q2, format_q2, parse_q2, q2_sign

Monomial = Tuple[int, int, int, int]
VARS = ("s", "t", "u", "v")
MAX_DEGREE = 24


def _mono_key(m: Monomial):
    # graded lexicographic: by total degree, then lexicographically descending
    return (sum(m), tuple(-e for e in m))


class MultiPoly:
    """Immutable sparse polynomial: a map monomial -> nonzero Q2 coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Q2] | None = None):
        clean: Dict[Monomial, Q2] = {}
        if terms:
            for m, c in terms.items():
                c = Q2.coerce(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean

    # constructors ----------------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Monomial, Q2]) -> "MultiPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({(0, 0, 0, 0): Q2.coerce(c)})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        m = [0, 0, 0, 0]
        m[VARS.index(name)] = 1
        return cls({tuple(m): Q2(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "MultiPoly":
        return cls({tuple(exps): Q2.coerce(coeff)})

    # queries ---------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({sum(m) for m in self.terms})

    def min_degree(self) -> int:
        return min(sum(m) for m in self.terms)

    def max_degree(self) -> int:
        return max(sum(m) for m in self.terms)

    def coeff(self, m: Sequence[int]) -> Q2:
        return self.terms.get(tuple(m), Q2(0))

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def sorted_terms(self) -> list[tuple[Monomial, Q2]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    # arithmetic ------------------------------------------------------------
    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.const(other) - self

    def scale(self, c) -> "MultiPoly":
        c = Q2.coerce(c)
        if not c:
            return MultiPoly()
        return MultiPoly._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out: Dict[Monomial, Q2] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                prod = c1 * c2
                if m in out:
                    out[m] = out[m] + prod
                else:
                    out[m] = prod
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = MultiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # evaluation ------------------------------------------------------------
    def __call__(self, s, t, u, v):
        return eval_poly(self, (s, t, u, v))

    def diff(self, name: str) -> "MultiPoly":
        i = VARS.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return MultiPoly(out)

    def substitute(self, name: str, value) -> "MultiPoly":
        """Fix variable ``name`` to the constant ``value`` (a Q2 or rational)."""
        i = VARS.index(name)
        value = Q2.coerce(value)
        acc: Dict[Monomial, Q2] = {}
        for m, c in self.terms.items():
            mm = list(m)
            e = mm[i]
            mm[i] = 0
            mm = tuple(mm)
            term = c * (value ** e)
            acc[mm] = acc.get(mm, Q2(0)) + term
        return MultiPoly(acc)

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly({m: fn(m, c) for m, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)})"

    def __str__(self) -> str:
        return format_poly(self)


S, T, U, V = (MultiPoly.var(n) for n in VARS)


def poly_arith(p: MultiPoly, q, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown polynomial operation {op!r}")


def eval_poly(p: MultiPoly, point: Sequence) -> Q2:
    """Exact evaluation at a point with rational (or Q2) coordinates."""
    pt = [Q2.coerce(x) for x in point]
    rational = all(x.b == 0 for x in pt)
    cache: Dict[Tuple[int, int], Q2] = {}

    def pw(i: int, e: int):
        key = (i, e)
        if key not in cache:
            cache[key] = Q2(pt[i].a ** e) if rational else pt[i] ** e
        return cache[key]

    total = Q2(0)
    for m, c in p.terms.items():
        val = c
        for i, e in enumerate(m):
            if e:
                val = val * pw(i, e)
        total = total + val
    return total


def eval_float(p: MultiPoly, point: Sequence[float]) -> float:
    """Floating evaluation; used by sampling oracles only."""
    total = 0.0
    for m, c in p.terms.items():
        val = float(c)
        for x, e in zip(point, m):
            if e:
                val *= x ** e
        total += val
    return total


def homog_component(p: MultiPoly, d: int) -> MultiPoly:
    return MultiPoly._raw({m: c for m, c in p.terms.items() if sum(m) == d})


def homog_decompose(p: MultiPoly) -> Dict[int, MultiPoly]:
    out: Dict[int, Dict[Monomial, Q2]] = {}
    for m, c in p.terms.items():
        out.setdefault(sum(m), {})[m] = c
    return {d: MultiPoly._raw(t) for d, t in sorted(out.items())}


def transform_T(p: MultiPoly) -> MultiPoly:
    """Absolutize coefficients, dropping negative all-even-exponent terms.

    The result, evaluated at (|s|, |t|, |u|, |v|), dominates ``p(s, t, u, v)``.
    """
    out = {}
    for m, c in p.terms.items():
        sg = q2_sign(c)
        if sg < 0 and all(e % 2 == 0 for e in m):
            continue
        out[m] = c if sg > 0 else -c
    return MultiPoly._raw(out)


@dataclass(frozen=True)
class DiagQuadForm:
    """c_s s^2 + c_t t^2 + c_u u^2 + c_v v^2."""

    coeffs: Tuple[Q2, Q2, Q2, Q2]

    @classmethod
    def zero(cls) -> "DiagQuadForm":
        return cls((Q2(0), Q2(0), Q2(0), Q2(0)))

    @classmethod
    def of(cls, cs, ct, cu, cv) -> "DiagQuadForm":
        return cls(tuple(Q2.coerce(c) for c in (cs, ct, cu, cv)))

    def __add__(self, other: "DiagQuadForm") -> "DiagQuadForm":
        return DiagQuadForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "DiagQuadForm":
        c = Q2.coerce(c)
        return DiagQuadForm(tuple(a * c for a in self.coeffs))

    def __getitem__(self, name: str) -> Q2:
        return self.coeffs[VARS.index(name)]

    def to_poly(self) -> MultiPoly:
        out = {}
        for i, c in enumerate(self.coeffs):
            m = [0, 0, 0, 0]
            m[i] = 2
            out[tuple(m)] = c
        return MultiPoly(out)

    def dominated_by(self, other: "DiagQuadForm") -> bool:
        """Coefficientwise self <= other (hence pointwise on R^4)."""
        return all(q2_sign(b - a) >= 0 for a, b in zip(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        return ", ".join(f"{n}^2: {format_q2(c)}" for n, c in zip(VARS, self.coeffs))


@dataclass(frozen=True)
class RationalFn:
    """scalar * numerator / ((s^2+1)^a (t^2+1)^b (u^2+1)^c (v^2+1)^d)."""

    numerator: MultiPoly
    denom_exponents: Tuple[int, int, int, int]
    scalar: Q2 = Q2(1)

    def over_common(self, exps: Sequence[int]) -> MultiPoly:
        """Numerator of ``self`` written over the common denominator ``exps``."""
        extra = [e - d for e, d in zip(exps, self.denom_exponents)]
        if any(x < 0 for x in extra):
            raise ValueError("common denominator does not cover this term")
        out = self.numerator.scale(self.scalar)
        for name, x in zip(VARS, extra):
            if x:
                out = out * (MultiPoly.var(name) ** 2 + 1) ** x
        return out

    def evaluate(self, point: Sequence) -> Q2:
        num = eval_poly(self.numerator, point) * self.scalar
        den = Fraction(1)
        for x, e in zip(point, self.denom_exponents):
            den *= (Fraction(x) ** 2 + 1) ** e
        return num / den


def _check_majorizable(p: MultiPoly, d: int | None = None):
    for m, c in p.terms.items():
        if q2_sign(c) < 0:
            raise ValueError(f"negative coefficient {format_q2(c)} at {m}")
        if d is not None and sum(m) != d:
            raise ValueError(f"monomial {m} is not of degree {d}")


def transform_Sd(p: MultiPoly, r0=Fraction(1, 7), d: int | None = None) -> DiagQuadForm:
    """Literal S_d majorizer: b * r0^(d-2)/12 * sum_k ((4 d_k^2 - d_k) x_k)^2."""
    r0 = Fraction(r0)
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    if p.is_zero():
        return DiagQuadForm.zero()
    if d is None:
        if not p.is_homogeneous():
            raise ValueError("transform_Sd needs a homogeneous polynomial")
        d = p.max_degree()
    _check_majorizable(p, d)
    if d < 3:
        raise ValueError("transform_Sd is defined for degree >= 3")
    factor = r0 ** (d - 2) / 12
    acc = [Q2(0)] * 4
    for m, c in p.terms.items():
        cf = c * factor
        for k, e in enumerate(m):
            if e:
                w = 4 * e * e - e
                acc[k] = acc[k] + cf * (w * w)
    return DiagQuadForm(tuple(acc))


def lemma3_majorize(m: Monomial, coefficient, r) -> DiagQuadForm:
    """coefficient * r^(N-2)/N * (d1 s^2 + d2 t^2 + d3 u^2 + d4 v^2)."""
    coefficient = Q2.coerce(coefficient)
    r = Fraction(r)
    if q2_sign(coefficient) < 0:
        raise ValueError("coefficient must be nonnegative")
    if r <= 0:
        raise ValueError("r must be positive")
    n = sum(m)
    if n < 2:
        raise ValueError("monomial degree must be at least 2")
    if not coefficient:
        return DiagQuadForm.zero()
    factor = coefficient * (r ** (n - 2) / n)
    return DiagQuadForm(tuple(factor * e for e in m))


def lemma3_majorize_poly(p: MultiPoly, r) -> DiagQuadForm:
    _check_majorizable(p)
    out = DiagQuadForm.zero()
    for m, c in p.terms.items():
        out = out + lemma3_majorize(m, c, r)
    return out


# serialization -----------------------------------------------------------

def format_monomial(m: Monomial) -> str:
    parts = []
    for name, e in zip(VARS, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p: MultiPoly) -> str:
    """Canonical text: ``(coef)*mono`` terms in graded-lex order, joined by ``" + "``."""
    if p.is_zero():
        return "0"
    return " + ".join(f"({format_q2(c)})*{format_monomial(m)}" for m, c in p.sorted_terms())


def _parse_monomial(text: str) -> Monomial:
    exps = [0, 0, 0, 0]
    if text == "1":
        return tuple(exps)
    for part in text.split("*"):
        name, _, e = part.partition("^")
        exps[VARS.index(name)] += int(e) if e else 1
    return tuple(exps)


def parse_poly(text: str) -> MultiPoly:
    text = text.strip()
    if text == "0":
        return MultiPoly()
    terms = {}
    for chunk in text.split(" + "):
        if not chunk.startswith("("):
            raise ValueError(f"malformed term {chunk!r}")
        close = chunk.index(")*")
        coef = parse_q2(chunk[1:close])
        terms[_parse_monomial(chunk[close + 2:])] = coef
    return MultiPoly(terms)


def format_form(f: DiagQuadForm) -> str:
    return " ; ".join(format_q2(c) for c in f.coeffs)


def parse_form(text: str) -> DiagQuadForm:
    parts = [parse_q2(x) for x in text.split(";")]
    if len(parts) != 4:
        raise ValueError(f"malformed diagonal form {text!r}")
    return DiagQuadForm(tuple(parts))


def iter_monomials(max_degree: int) -> Iterator[Monomial]:
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            for c in range(max_degree + 1 - a - b):
                for d in range(max_degree + 1 - a - b - c):
                    yield (a, b, c, d)


def split_term_count(p: MultiPoly) -> int:
    """Term count with rational and sqrt2 parts of a coefficient counted separately.

    This is the count a computer algebra system reports for the expanded
    polynomial, where ``(8+8*sqrt2)*s^2`` prints as two terms.
    """
    return sum((c.a != 0) + (c.b != 0) for c in p.terms.values())


def rational_upper(c: Q2, sqrt2_hi=Fraction(10, 7), sqrt2_lo=Fraction(7, 5)) -> Fraction:
    """A rational >= c, replacing sqrt2 by a rational bound on the safe side."""
    return c.a + c.b * (sqrt2_hi if c.b >= 0 else sqrt2_lo)


def poly_sum(polys: Iterable[MultiPoly]) -> MultiPoly:
    out = MultiPoly()
    for p in polys:
        out = out + p
    return out
