"""Floating-point cross-checks.  Nothing here enters a certificate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.optimize import minimize

from .geometry import PAIRS, Cube6
from .search import pair_distance_upper

OPTIMUM_FLOAT = 4.0 + 4.0 * 2.0 ** 0.5


def params_to_points(p: Sequence[float]):
    """(B, C, D) for parameters (s, t, u, v) in the rational parametrization."""
    s, t, u, v = p
    B = ((1 - s * s) / (1 + s * s), 2 * s / (1 + s * s))
    C = (-(1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))
    D = (2 * u / (1 + u * u), (1 - v * v) / (1 + v * v))
    return B, C, D


def objective_points(B, C, D, sqrt=np.sqrt) -> float:
    pts = {"A": (0.0, -1.0), "B": B, "C": C, "D": D}
    total = 0
    for p in PAIRS:
        (x1, y1), (x2, y2) = pts[p[0]], pts[p[1]]
        r = 2 - 2 * (x1 * x2 + y1 * y2)
        total = total + sqrt(r if r > 0 else 0 * r)
    return total


def objective_params(p: Sequence[float]) -> float:
    return float(objective_points(*params_to_points(p)))


def objective_params_mp(p: Sequence, dps: int = 40):
    """High-precision objective (about 3.3 bits per digit)."""
    with mpmath.workdps(dps):
        q = [mpmath.mpf(x) for x in p]
        return objective_points(*params_to_points(q), sqrt=mpmath.sqrt)


def _project(p: np.ndarray) -> np.ndarray:
    q = np.clip(p, -1.0, 1.0)
    q[3] = max(q[3], 0.0)
    q[2] = float(np.clip(q[2], -q[3], q[3]))
    return q


@dataclass
class SearchResult:
    params: np.ndarray
    value: float
    restarts: int


def numeric_max_search(restarts: int = 100, seed: int = 0, v_min: float = 0.0, v_max: float = 1.0,
                       start: Sequence[float] | None = None) -> SearchResult:
    """Multi-start local ascent over (s, t, u, v) with v_min <= v <= v_max and |u| <= v.

    Each restart runs SLSQP from a seeded random start, followed by a
    projected coordinate polish.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best_p, best_v = None, -np.inf
    cons = [{"type": "ineq", "fun": lambda p: p[3] - p[2]},
            {"type": "ineq", "fun": lambda p: p[3] + p[2]}]
    bounds = [(-1, 1), (-1, 1), (-1, 1), (v_min, v_max)]
    for i in range(restarts):
        rng = np.random.default_rng([seed, i])
        if start is not None and i == 0:
            x0 = np.array(start, dtype=float)
        else:
            x0 = rng.uniform(-1, 1, 4)
            x0[3] = rng.uniform(v_min, v_max)
            x0[2] = rng.uniform(-x0[3], x0[3])
        res = minimize(lambda p: -objective_params(p), x0, method="SLSQP", bounds=bounds,
                       constraints=cons, options={"ftol": 1e-15, "maxiter": 500})
        p = _polish(_project(res.x), v_min, v_max)
        val = objective_params(p)
        if val > best_v:
            best_p, best_v = p, val
    return SearchResult(best_p, best_v, restarts)


def _polish(p: np.ndarray, v_min: float, v_max: float = 1.0, rounds: int = 60) -> np.ndarray:
    step = 1e-2
    val = objective_params(p)
    for _ in range(rounds):
        improved = False
        for i in range(4):
            for sg in (1, -1):
                q = p.copy()
                q[i] += sg * step
                q = _project(q)
                q[3] = min(max(q[3], v_min), v_max)
                q[2] = float(np.clip(q[2], -q[3], q[3]))
                w = objective_params(q)
                if w > val:
                    p, val, improved = q, w, True
        if not improved:
            step /= 4
            if step < 1e-12:
                break
    return p


def criticality_check(p: Sequence[float], h: float = 1e-5) -> dict:
    """Finite-difference partials of the objective in (s, t, u, v).

    Central differences for s, t, u; for v at v = 0 (boundary of v >= 0)
    the one-sided forward difference is used.
    """
    p = np.asarray(p, dtype=float)
    out = {}
    for i, name in enumerate("stuv"):
        e = np.zeros(4)
        e[i] = h
        if name == "v" and p[3] - h < 0:
            out[name] = (objective_params(p + e) - objective_params(p)) / h
        elif name == "u" and abs(p[2]) + h > p[3]:
            # |u| <= v pins u at v = 0; the objective is even in u there
            out[name] = (objective_params_mp(p + e) - objective_params_mp(p - e)) / (2 * h)
            out[name] = float(out[name])
        else:
            out[name] = (objective_params(p + e) - objective_params(p - e)) / (2 * h)
    out["max_abs_interior"] = max(abs(out["s"]), abs(out["t"]))
    return out


def _angle_range(box) -> tuple[float, float]:
    """Angular interval covering the box as seen from the origin."""
    if box.x_lo <= 0 <= box.x_hi and box.y_lo <= 0 <= box.y_hi:
        return 0.0, 2 * np.pi
    cx, cy = float(box.x_lo + box.x_hi) / 2, float(box.y_lo + box.y_hi) / 2
    c = np.arctan2(cy, cx)
    offs = [(np.arctan2(float(y), float(x)) - c + np.pi) % (2 * np.pi) - np.pi
            for x in (box.x_lo, box.x_hi) for y in (box.y_lo, box.y_hi)]
    return c + min(offs), c + max(offs)


def _sample_arc(box, rng, tries: int = 200):
    lo, hi = _angle_range(box)
    for _ in range(tries):
        a = rng.uniform(lo, hi)
        x, y = np.cos(a), np.sin(a)
        if box.x_lo <= x <= box.x_hi and box.y_lo <= y <= box.y_hi:
            return float(x), float(y)
    return None


def _sample_disk(box, rng, tries: int = 200):
    for _ in range(tries):
        x = rng.uniform(float(box.x_lo), float(box.x_hi))
        y = rng.uniform(float(box.y_lo), float(box.y_hi))
        if x * x + y * y <= 1:
            return x, y
    return None


def sample_cube_configs(cube: Cube6, n: int, rng: np.random.Generator):
    """Up to n feasible configurations in the cube (B, C on the circle, D in the disk)."""
    out = []
    for _ in range(n):
        B, C, D = _sample_arc(cube.boxB, rng), _sample_arc(cube.boxC, rng), _sample_disk(cube.boxD, rng)
        if B is None or C is None or D is None:
            break
        out.append((B, C, D))
    return out


def cube_upper_bound(cube: Cube6, k: int = 30) -> Fraction:
    return sum((pair_distance_upper(cube, p, k) for p in PAIRS), Fraction(0))


def sample_soundness(cube: Cube6, n: int = 1000, seed: int = 0, bound: Fraction | None = None) -> bool:
    """True iff every sampled objective is <= the cube's certified upper bound."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    ub = float(cube_upper_bound(cube) if bound is None else bound)
    configs = sample_cube_configs(cube, n, rng)
    return all(objective_points(*c) <= ub + 1e-12 for c in configs)


def equilateral_pole_value() -> float:
    """Equilateral triangle on the equator with D at the pole."""
    a = 2 * np.pi / 3
    B = (np.cos(-np.pi / 2 + a), np.sin(-np.pi / 2 + a))
    C = (np.cos(-np.pi / 2 + 2 * a), np.sin(-np.pi / 2 + 2 * a))
    return float(objective_points(B, C, (0.0, 0.0)))
