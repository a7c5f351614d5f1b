"""Exact arithmetic: rationals, the field Q[sqrt2], rational intervals and
certified rational square-root bounds.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Rat = Fraction
RatLike = Union[int, Fraction]

#: default precision exponent used for sqrt bounds in the global search
DEFAULT_SQRT_PRECISION = 30


def as_rat(x: RatLike | str) -> Fraction:
    """Parse ``x`` (int, Fraction or a string such as ``"1/7"``) as a rational.

    Floats are rejected on purpose: every numeric input must be exact.
    """
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(x, str):
        x = x.strip()
        if not x:
            raise ValueError("empty rational literal")
    return Fraction(x)


class Q2:
    """An element ``a + b*sqrt(2)`` of Q[sqrt2] with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: RatLike = 0, b: RatLike = 0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    @classmethod
    def coerce(cls, x) -> "Q2":
        if isinstance(x, Q2):
            return x
        return cls(x, 0)

    # ring operations -----------------------------------------------------
    def __add__(self, other) -> "Q2":
        other = Q2.coerce(other)
        return Q2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other) -> "Q2":
        other = Q2.coerce(other)
        return Q2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "Q2":
        return Q2.coerce(other) - self

    def __neg__(self) -> "Q2":
        return Q2(-self.a, -self.b)

    def __mul__(self, other) -> "Q2":
        if not isinstance(other, Q2):
            o = Fraction(other)
            return Q2(self.a * o, self.b * o)
        a, b, c, d = self.a, self.b, other.a, other.b
        return Q2(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "Q2":
        return Q2(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 2 b^2 (zero only for the zero element)."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "Q2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q[sqrt2]")
        return Q2(self.a / n, -self.b / n)

    def __truediv__(self, other) -> "Q2":
        if not isinstance(other, Q2):
            o = Fraction(other)
            return Q2(self.a / o, self.b / o)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Q2":
        return Q2.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Q2":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Q2(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparisons ---------------------------------------------------------
    def sign(self) -> int:
        return q2_sign(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, Q2):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other) -> bool:
        return q2_sign(self - other) < 0

    def __le__(self, other) -> bool:
        return q2_sign(self - other) <= 0

    def __gt__(self, other) -> bool:
        return q2_sign(self - other) > 0

    def __ge__(self, other) -> bool:
        return q2_sign(self - other) >= 0

    def __abs__(self) -> "Q2":
        return -self if q2_sign(self) < 0 else self

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2.0 ** 0.5

    def __repr__(self) -> str:
        return f"Q2({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_q2(self)


SQRT2 = Q2(0, 1)
OPTIMUM = Q2(4, 4)  # 4 + 4*sqrt2, the conjectured maximum


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def q2_sign(x: Q2) -> int:
    """Exact sign of ``a + b*sqrt2``, decided by rational comparisons only."""
    sa, sb = _sign(x.a), _sign(x.b)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: compare a^2 with 2 b^2
    diff = x.a * x.a - 2 * x.b * x.b
    return sa if diff > 0 else sb  # diff == 0 impossible for nonzero b


def format_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_q2(x: Q2) -> str:
    """Canonical text form ``a+b*sqrt2`` (``a`` alone when ``b`` is zero)."""
    if x.b == 0:
        return format_rat(x.a)
    sign = "-" if x.b < 0 else "+"
    return f"{format_rat(x.a)}{sign}{format_rat(abs(x.b))}*sqrt2"


def parse_q2(text: str) -> Q2:
    """Inverse of :func:`format_q2`."""
    text = text.strip()
    if not text.endswith("*sqrt2"):
        return Q2(Fraction(text))
    body = text[: -len("*sqrt2")]
    # split at the last +/- that is not a leading sign or part of a/b
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-":
            return Q2(Fraction(body[:i]), Fraction(body[i:]))
    raise ValueError(f"malformed Q[sqrt2] literal: {text!r}")


@dataclass(frozen=True)
class RatInterval:
    """Closed interval [lo, hi] with rational end points."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: RatLike) -> "RatInterval":
        x = Fraction(x)
        return cls(x, x)

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(ps), max(ps))

    def scale(self, c: RatLike) -> "RatInterval":
        c = Fraction(c)
        return RatInterval(min(c * self.lo, c * self.hi), max(c * self.lo, c * self.hi))

    def square(self) -> "RatInterval":
        """Tight enclosure of {x^2 : x in self}."""
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return RatInterval(Fraction(0), max(a, b))
        return RatInterval(min(a, b), max(a, b))

    def contains(self, x) -> bool:
        if isinstance(x, Q2):
            return q2_sign(x - self.lo) >= 0 and q2_sign(Q2(self.hi) - x) >= 0
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _check_sqrt_args(q: Fraction, k: int) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"square root of negative rational {q}")
    if k < 0:
        raise ValueError("precision exponent must be nonnegative")
    return q


def _exact_sqrt(q: Fraction) -> Fraction | None:
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_lower(q: RatLike, k: int = DEFAULT_SQRT_PRECISION) -> Fraction:
    """Rational r with r <= sqrt(q) and sqrt(q) - r <= 2**-k.

    Exact for perfect rational squares.
    """
    q = _check_sqrt_args(q, k)
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    # floor(2^k sqrt(n/d)) = floor(sqrt(n * d * 4^k) / d) = isqrt(n*d*4^k) // d
    n, d = q.numerator, q.denominator
    return Fraction(isqrt(n * d << (2 * k)) // d, 1 << k)


def sqrt_upper(q: RatLike, k: int = DEFAULT_SQRT_PRECISION) -> Fraction:
    """Rational r with r >= sqrt(q) and r - sqrt(q) <= 2**-k.

    Exact for perfect rational squares.
    """
    q = _check_sqrt_args(q, k)
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    lo = sqrt_lower(q, k)
    return lo + Fraction(1, 1 << k)


def sqrt_interval(q: RatLike, k: int = DEFAULT_SQRT_PRECISION) -> RatInterval:
    return RatInterval(sqrt_lower(q, k), sqrt_upper(q, k))
