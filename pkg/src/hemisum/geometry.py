"""Feasible set of the projected problem: A = (0, -1) fixed, B and C on the
unit circle, D1 in the closed unit disk.

Every pair of the four points involves at least one equator point, so the
3D chord length equals the warp distance sqrt(2 - 2xx' - 2yy') of the
z-projections; the height of D never has to be represented.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .exact import (
    DEFAULT_SQRT_PRECISION,
    RatInterval,
    sqrt_lower,
    sqrt_upper,
)

PAIRS = ("AB", "AC", "AD", "BC", "BD", "CD")


@dataclass(frozen=True)
class Point2:
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point2":
        return cls(Fraction(x), Fraction(y))

    def norm2(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


A_POINT = Point2.of(0, -1)


@dataclass(frozen=True)
class ParamVector:
    s: Fraction
    t: Fraction
    u: Fraction
    v: Fraction

    @classmethod
    def of(cls, s, t, u, v) -> "ParamVector":
        return cls(*(Fraction(x) for x in (s, t, u, v)))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.s, self.t, self.u, self.v)


@dataclass(frozen=True)
class Config:
    B: Point2
    C: Point2
    D1: Point2

    def __post_init__(self):
        if self.B.norm2() != 1 or self.C.norm2() != 1:
            raise ValueError("B and C must lie on the unit circle")
        if self.D1.norm2() > 1:
            raise ValueError("D1 must lie in the closed unit disk")

    def points(self) -> dict[str, Point2]:
        return {"A": A_POINT, "B": self.B, "C": self.C, "D": self.D1}


SQUARE = Config(Point2.of(1, 0), Point2.of(-1, 0), Point2.of(0, 1))


def radicand(P: Point2, Q: Point2) -> Fraction:
    """2 - 2(x x' + y y'); the warp distance is its square root."""
    return 2 - 2 * (P.x * Q.x + P.y * Q.y)


def pair_radicands(c: Config) -> dict[str, Fraction]:
    pts = c.points()
    return {p: radicand(pts[p[0]], pts[p[1]]) for p in PAIRS}


def config_from_params(p: ParamVector) -> Config:
    """Rational parametrization of B, C on the circle and D1 in the disk."""
    s, t, u, v = p.as_tuple()
    B = Point2((1 - s * s) / (1 + s * s), 2 * s / (1 + s * s))
    C = Point2(-(1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))
    D = Point2(2 * u / (1 + u * u), (1 - v * v) / (1 + v * v))
    if D.norm2() > 1:
        raise ValueError(f"D1 = ({D.x}, {D.y}) lies outside the unit disk")
    return Config(B, C, D)


def objective_bounds_from_radicands(rads: Sequence[Fraction], k: int = DEFAULT_SQRT_PRECISION) -> RatInterval:
    lo = sum((sqrt_lower(max(Fraction(r), Fraction(0)), k) for r in rads), Fraction(0))
    hi = sum((sqrt_upper(max(Fraction(r), Fraction(0)), k) for r in rads), Fraction(0))
    return RatInterval(lo, hi)


def distance_sum_exact_bounds(c: Config, k: int = DEFAULT_SQRT_PRECISION) -> RatInterval:
    """Enclosure of the six-distance objective of width <= 6 * 2**-k."""
    return objective_bounds_from_radicands(list(pair_radicands(c).values()), k)


def objective_float(B, C, D) -> float:
    """Float objective for 2D points given as (x, y) pairs."""
    pts = {"A": (0.0, -1.0), "B": B, "C": C, "D": D}
    total = 0.0
    for p in PAIRS:
        (x1, y1), (x2, y2) = pts[p[0]], pts[p[1]]
        total += max(2.0 - 2.0 * (x1 * x2 + y1 * y2), 0.0) ** 0.5
    return total


# boxes --------------------------------------------------------------------

@dataclass(frozen=True)
class Box2:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    @classmethod
    def of(cls, x_lo, x_hi, y_lo, y_hi) -> "Box2":
        b = cls(*(Fraction(z) for z in (x_lo, x_hi, y_lo, y_hi)))
        if b.x_lo > b.x_hi or b.y_lo > b.y_hi:
            raise ValueError("box with lo > hi")
        return b

    def corners(self) -> list[Point2]:
        return [Point2(x, y) for x in (self.x_lo, self.x_hi) for y in (self.y_lo, self.y_hi)]

    def contains_point(self, p: Point2) -> bool:
        return self.x_lo <= p.x <= self.x_hi and self.y_lo <= p.y <= self.y_hi

    def contained_in(self, other: "Box2") -> bool:
        return (other.x_lo <= self.x_lo and self.x_hi <= other.x_hi
                and other.y_lo <= self.y_lo and self.y_hi <= other.y_hi)

    def min_norm2(self) -> Fraction:
        return _min_sq(self.x_lo, self.x_hi) + _min_sq(self.y_lo, self.y_hi)

    def max_norm2(self) -> Fraction:
        return max(self.x_lo ** 2, self.x_hi ** 2) + max(self.y_lo ** 2, self.y_hi ** 2)


def _min_sq(lo: Fraction, hi: Fraction) -> Fraction:
    if lo <= 0 <= hi:
        return Fraction(0)
    return min(lo * lo, hi * hi)


def box_meets_disk(b: Box2) -> bool:
    return b.min_norm2() <= 1


def box_meets_circle(b: Box2) -> bool:
    return b.min_norm2() <= 1 <= b.max_norm2()


def grid_boxes(edge: Fraction) -> list[Box2]:
    """Closed grid cells of the given edge covering [-1, 1]^2, row-major in x then y."""
    n = int(2 / edge)
    if n * edge != 2:
        raise ValueError("edge must divide 2")
    return [Box2(-1 + i * edge, -1 + (i + 1) * edge, -1 + j * edge, -1 + (j + 1) * edge)
            for i in range(n) for j in range(n)]


@dataclass(frozen=True)
class Cube6:
    """Product of three closed squares (for B, C and D1) of a common edge."""

    boxB: Box2
    boxC: Box2
    boxD: Box2
    depth: int = 0
    edge: Fraction = Fraction(1, 8)

    def boxes(self) -> dict[str, Box2]:
        return {"B": self.boxB, "C": self.boxC, "D": self.boxD}

    def contains_config(self, c: Config) -> bool:
        return (self.boxB.contains_point(c.B) and self.boxC.contains_point(c.C)
                and self.boxD.contains_point(c.D1))

    @classmethod
    def from_indices(cls, level: int, idx: Sequence[int]) -> "Cube6":
        edge = level_edge(level)
        lo = [-1 + i * edge for i in idx]
        boxes = [Box2(lo[2 * j], lo[2 * j] + edge, lo[2 * j + 1], lo[2 * j + 1] + edge) for j in range(3)]
        return cls(*boxes, depth=level, edge=edge)


def level_edge(level: int) -> Fraction:
    """Edge length at subdivision level: 1/8, 1/32, 1/128, ..."""
    return Fraction(1, 8 * 4 ** level)


@dataclass(frozen=True)
class NeighborhoodSpec:
    delta1: Fraction = Fraction(1, 32)
    delta2: Fraction = Fraction(1, 4)

    @property
    def U(self) -> Box2:
        return Box2(1 - self.delta1, Fraction(1), -self.delta2, self.delta2)

    @property
    def V(self) -> Box2:
        return Box2(Fraction(-1), -1 + self.delta1, -self.delta2, self.delta2)

    @property
    def W1(self) -> Box2:
        return Box2(-self.delta2, self.delta2, 1 - self.delta1, Fraction(1))


def cube_in_neighborhood(c: Cube6, n: NeighborhoodSpec = NeighborhoodSpec()) -> bool:
    return c.boxB.contained_in(n.U) and c.boxC.contained_in(n.V) and c.boxD.contained_in(n.W1)


def config_distance(c1: Tuple[Tuple[float, float], ...], c2: Tuple[Tuple[float, float], ...]) -> float:
    """Max-norm distance between two (B, C, D) float configurations."""
    return max(abs(a - b) for p, q in zip(c1, c2) for a, b in zip(p, q))
