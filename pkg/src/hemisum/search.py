"""Cube elimination over the feasible set (S^1)^2 x D^2.

Cubes live on dyadic lattices: at level ``L`` the edge is ``1/(8*4**L)`` and a
cube is identified by six integer cell indices ``(bx, by, cx, cy, dx, dy)``;
coordinate ``i`` spans ``[-1 + i*h, -1 + (i+1)*h]``.  All tests are exact
integer computations (numpy int64 for batches, Fractions for the scalar
reference versions).

Pair distances are bounded by the corner maximum of the radicand
``2 - 2(xx' + yy')``, which is affine in each coordinate, followed by a
certified ceiling square root.  A cube is eliminated by the sum test iff the
sum of the six bounds is strictly below ``4 + 4*sqrt2``.
"""
from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from .exact import DEFAULT_SQRT_PRECISION, OPTIMUM, Q2, q2_sign, sqrt_upper
from .geometry import (
    PAIRS,
    Box2,
    Cube6,
    NeighborhoodSpec,
    box_meets_circle,
    box_meets_disk,
    cube_in_neighborhood,
    grid_boxes,
    level_edge,
)

# verdict codes (also used as single characters in certificates)
SURVIVE, INFEASIBLE, NEIGHBORHOOD, BOUND, SYMMETRY, SUM, EXHAUSTED = range(7)
CODE_CHARS = "dinbysx"
VERDICT_NAMES = {
    SURVIVE: "subdivided",
    INFEASIBLE: "infeasible",
    NEIGHBORHOOD: "excluded_neighborhood",
    BOUND: "eliminated_by_bound_filter",
    SYMMETRY: "eliminated_by_symmetry",
    SUM: "eliminated_by_sum_test",
    EXHAUSTED: "exhausted_depth",
}

MAX_VECTOR_PRECISION = 30


@dataclass(frozen=True)
class DistanceBoundTable:
    """Lower bounds for the sorted six distances of an optimal configuration.

    Entries are rationals except the fourth, which is exactly sqrt2 (stored
    as ``None``).  These values are an unproven input (trusted, not derived here).
    """

    bounds: tuple = (Fraction("0.99200"), Fraction("1.21895"), Fraction(4, 3), None,
                     Fraction("1.53137"), Fraction("1.60947"))

    def value(self, j: int) -> Q2:
        b = self.bounds[j]
        return Q2(0, 1) if b is None else Q2(b)

    def thresholds(self, k: int) -> np.ndarray:
        """Smallest integer c_j with c_j / 2^k >= b_j."""
        out = []
        for b in self.bounds:
            if b is None:
                out.append(isqrt(2 << (2 * k)) + 1)
            else:
                num = b.numerator << k
                out.append(-((-num) // b.denominator))
        return np.array(out, dtype=np.int64)


SORTED_DISTANCE_BOUNDS = DistanceBoundTable()


@dataclass
class SearchConfig:
    bfs_edges: tuple = (Fraction(1, 8), Fraction(1, 32))
    dfs_subdivision: int = 4
    dfs_max_edge: Fraction = Fraction(1, 512)
    use_bound_filter: bool = False
    sqrt_precision: int = DEFAULT_SQRT_PRECISION
    worker_count: int = 1
    exclude_neighborhood: bool = True
    canonical_labels: bool = True
    chunk_size: int = 128
    max_failures: int = 1000

    def __post_init__(self):
        self.bfs_edges = tuple(Fraction(e) for e in self.bfs_edges)
        self.dfs_max_edge = Fraction(self.dfs_max_edge)
        if self.dfs_subdivision != 4:
            raise ValueError("only 4-per-axis subdivision is supported")
        levels = [edge_level(e) for e in self.bfs_edges]
        if levels != list(range(len(levels))):
            raise ValueError("bfs_edges must be 1/8, 1/32, ... in order")
        if edge_level(self.dfs_max_edge) < levels[-1]:
            raise ValueError("dfs_max_edge must not exceed the last BFS edge")
        if not 0 <= self.sqrt_precision <= MAX_VECTOR_PRECISION:
            raise ValueError(f"sqrt_precision must be in [0, {MAX_VECTOR_PRECISION}]")

    @property
    def mode(self) -> str:
        return "paper" if self.use_bound_filter else "trustless"

    @property
    def max_level(self) -> int:
        return edge_level(self.dfs_max_edge)

    def echo(self) -> dict:
        return {
            "mode": self.mode,
            "bfs_edges": ",".join(str(e) for e in self.bfs_edges),
            "dfs_subdivision": self.dfs_subdivision,
            "dfs_max_edge": str(self.dfs_max_edge),
            "sqrt_precision": self.sqrt_precision,
            "exclude_neighborhood": self.exclude_neighborhood,
            "canonical_labels": self.canonical_labels,
        }


def edge_level(edge: Fraction) -> int:
    edge = Fraction(edge)
    level = 0
    while level_edge(level) > edge:
        level += 1
    if level_edge(level) != edge:
        raise ValueError(f"edge {edge} is not of the form 1/(8*4^L)")
    return level


def level_scale(level: int) -> int:
    """N with edge = 1/N."""
    return 8 * 4 ** level


# integer square roots ------------------------------------------------------

def isqrt_floor_vec(x: np.ndarray) -> np.ndarray:
    """Exact floor(sqrt(x)) for int64 x in [0, 2^62]."""
    r = np.floor(np.sqrt(x.astype(np.float64))).astype(np.int64)
    for _ in range(4):
        r = np.where(r * r > x, r - 1, r)
        r = np.where((r + 1) * (r + 1) <= x, r + 1, r)
    if not ((r * r <= x) & ((r + 1) * (r + 1) > x)).all():
        raise ArithmeticError("integer square root correction failed")
    return r


def sqrt_upper_scaled(R: np.ndarray, level: int, k: int) -> np.ndarray:
    """c = ceil(2^k * sqrt(R) / N) for radicand numerators R (units 1/N^2).

    ``c / 2^k`` is then a certified upper bound of ``sqrt(R / N^2)``.
    """
    R = np.maximum(R, 0)
    m = 3 + 2 * level
    if k >= m:
        x = R << (2 * (k - m))
        r = isqrt_floor_vec(x)
        return r + (r * r < x)
    j = m - k
    r = isqrt_floor_vec(R)
    cs = r + (r * r < R)
    return (cs + (1 << j) - 1) >> j


def sum_threshold(k: int) -> int:
    """floor((4 + 4 sqrt2) 2^k); a bound M/2^k is below the optimum iff M <= this."""
    return (4 << k) + isqrt(32 << (2 * k))


# vectorized geometry ------------------------------------------------------

def _minprod(a0, a1, b0, b1):
    return np.minimum(np.minimum(a0 * b0, a0 * b1), np.minimum(a1 * b0, a1 * b1))


def _maxprod(a0, a1, b0, b1):
    return np.maximum(np.maximum(a0 * b0, a0 * b1), np.maximum(a1 * b0, a1 * b1))


def _min_sq(lo, hi):
    return np.where((lo <= 0) & (hi >= 0), 0, np.minimum(lo * lo, hi * hi))


def _max_sq(lo, hi):
    return np.maximum(lo * lo, hi * hi)


def box_flags(ix: np.ndarray, iy: np.ndarray, level: int) -> tuple[np.ndarray, np.ndarray]:
    """(meets circle, meets disk) for lattice squares with cell indices ix, iy."""
    N = level_scale(level)
    xl, yl = ix - N, iy - N
    m = _min_sq(xl, xl + 1) + _min_sq(yl, yl + 1)
    M = _max_sq(xl, xl + 1) + _max_sq(yl, yl + 1)
    n2 = N * N
    return (m <= n2) & (M >= n2), m <= n2


def radicand_maxima(idx: np.ndarray, level: int) -> np.ndarray:
    """(n, 6) int64 corner maxima of the six radicands, in units of 1/N^2.

    Column order follows ``PAIRS``.
    """
    N = level_scale(level)
    lo = idx.astype(np.int64) - N
    hi = lo + 1
    bx0, by0, cx0, cy0, dx0, dy0 = (lo[:, j] for j in range(6))
    bx1, by1, cx1, cy1, dx1, dy1 = (hi[:, j] for j in range(6))
    two_n2 = 2 * N * N
    out = np.empty((idx.shape[0], 6), dtype=np.int64)
    out[:, 0] = two_n2 + 2 * N * by1
    out[:, 1] = two_n2 + 2 * N * cy1
    out[:, 2] = two_n2 + 2 * N * dy1
    out[:, 3] = two_n2 - 2 * _minprod(bx0, bx1, cx0, cx1) - 2 * _minprod(by0, by1, cy0, cy1)
    out[:, 4] = two_n2 - 2 * _minprod(bx0, bx1, dx0, dx1) - 2 * _minprod(by0, by1, dy0, dy1)
    out[:, 5] = two_n2 - 2 * _minprod(cx0, cx1, dx0, dx1) - 2 * _minprod(cy0, cy1, dy0, dy1)
    return out


def pair_upper_scaled(idx: np.ndarray, level: int, k: int) -> np.ndarray:
    return sqrt_upper_scaled(radicand_maxima(idx, level), level, k)


def symmetry_reject(idx: np.ndarray, level: int) -> np.ndarray:
    """True where the cube misses the canonical labeling region.

    Canonical region: x_B >= x_C, |AD| >= |BD| and |AD| >= |CD|.  Every
    configuration can be brought into it by relabeling the equator points
    and rotating about the z-axis, which leaves the objective unchanged.
    """
    N = level_scale(level)
    lo = idx.astype(np.int64) - N
    hi = lo + 1
    bad = hi[:, 0] < lo[:, 2]
    dx0, dx1, dy0, dy1 = lo[:, 4], hi[:, 4], lo[:, 5], hi[:, 5]
    for p in (0, 2):
        # rad(A,D) - rad(P,D) = 2 (N y_D + x_P x_D + y_P y_D)
        px0, px1, py0, py1 = lo[:, p], hi[:, p], lo[:, p + 1], hi[:, p + 1]
        gap = _maxprod(dy0, dy1, N + py0, N + py1) + _maxprod(px0, px1, dx0, dx1)
        bad |= gap < 0
    return bad


def neighborhood_mask(idx: np.ndarray, level: int, spec: NeighborhoodSpec) -> np.ndarray:
    N = level_scale(level)
    lo = idx.astype(np.int64) - N
    hi = lo + 1
    ok = np.ones(idx.shape[0], dtype=bool)
    for j, box in zip((0, 2, 4), (spec.U, spec.V, spec.W1)):
        for axis, (blo, bhi) in enumerate(((box.x_lo, box.x_hi), (box.y_lo, box.y_hi))):
            # closed containment [lo, hi]/N within [blo, bhi]
            ok &= lo[:, j + axis] * blo.denominator >= blo.numerator * N
            ok &= hi[:, j + axis] * bhi.denominator <= bhi.numerator * N
    return ok


def classify(idx: np.ndarray, level: int, cfg: SearchConfig,
             spec: NeighborhoodSpec = NeighborhoodSpec(),
             table: DistanceBoundTable = SORTED_DISTANCE_BOUNDS,
             bound_filter: bool | None = None,
             feasible_known: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Verdict code and scaled sum bound M (bound = M / 2^k) for each cube."""
    n = idx.shape[0]
    k = cfg.sqrt_precision
    codes = np.full(n, SURVIVE, dtype=np.uint8)
    sums = np.zeros(n, dtype=np.int64)
    if n == 0:
        return codes, sums
    if not feasible_known:
        cB, _ = box_flags(idx[:, 0], idx[:, 1], level)
        cC, _ = box_flags(idx[:, 2], idx[:, 3], level)
        _, dD = box_flags(idx[:, 4], idx[:, 5], level)
        codes[~(cB & cC & dD)] = INFEASIBLE
    c = pair_upper_scaled(idx, level, k)
    sums[:] = c.sum(axis=1)
    use_bound = cfg.use_bound_filter if bound_filter is None else bound_filter
    if use_bound:
        fail = (np.sort(c, axis=1) < table.thresholds(k)[None, :]).any(axis=1)
        codes[(codes == SURVIVE) & fail] = BOUND
    if cfg.exclude_neighborhood:
        codes[(codes == SURVIVE) & neighborhood_mask(idx, level, spec)] = NEIGHBORHOOD
    if cfg.canonical_labels:
        codes[(codes == SURVIVE) & symmetry_reject(idx, level)] = SYMMETRY
    codes[(codes == SURVIVE) & (sums <= sum_threshold(k))] = SUM
    return codes, sums


# cover and children ------------------------------------------------------

def grid_flags(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cell indices (ix, iy) of the full grid and their circle/disk flags."""
    n = 2 * level_scale(level)
    ix, iy = np.meshgrid(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64), indexing="ij")
    ix, iy = ix.ravel(), iy.ravel()
    circ, disk = box_flags(ix, iy, level)
    return np.stack([ix, iy], axis=1), circ, disk


def initial_cover_indices() -> np.ndarray:
    """(806400, 6) level-0 cell indices: circle cells x circle cells x disk cells."""
    cells, circ, disk = grid_flags(0)
    ce, de = cells[circ], cells[disk]
    nb, nd = len(ce), len(de)
    b = np.repeat(np.arange(nb), nb * nd)
    c = np.tile(np.repeat(np.arange(nb), nd), nb)
    d = np.tile(np.arange(nd), nb * nb)
    return np.concatenate([ce[b], ce[c], de[d]], axis=1)


def build_initial_cover() -> list[Cube6]:
    return [Cube6.from_indices(0, row) for row in initial_cover_indices()]


_OFFS = np.array([(i, j) for i in range(4) for j in range(4)], dtype=np.int64)


def child_slots(idx: np.ndarray, level: int) -> tuple[np.ndarray, np.ndarray]:
    """All 4096 children per parent in lexicographic order.

    Returns the (n*4096, 6) child indices and a boolean feasibility mask.
    """
    n = idx.shape[0]
    sub = [4 * idx[:, 2 * j:2 * j + 2][:, None, :] + _OFFS[None, :, :] for j in range(3)]  # (n,16,2)
    flags = []
    for j, want in ((0, 0), (1, 0), (2, 1)):
        fl = box_flags(sub[j][..., 0], sub[j][..., 1], level + 1)[want]
        flags.append(fl)
    mask = flags[0][:, :, None, None] & flags[1][:, None, :, None] & flags[2][:, None, None, :]
    kids = np.empty((n, 16, 16, 16, 6), dtype=np.int64)
    kids[..., 0:2] = sub[0][:, :, None, None, :]
    kids[..., 2:4] = sub[1][:, None, :, None, :]
    kids[..., 4:6] = sub[2][:, None, None, :, :]
    return kids.reshape(n * 4096, 6), mask.reshape(n * 4096)


def classify_children(idx: np.ndarray, level: int, cfg: SearchConfig,
                      spec: NeighborhoodSpec, bound_filter: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Children of level-``level`` cubes: (child idx, codes, sums), 4096 per parent."""
    kids, feas = child_slots(idx, level)
    codes = np.full(kids.shape[0], INFEASIBLE, dtype=np.uint8)
    sums = np.zeros(kids.shape[0], dtype=np.int64)
    sel = np.nonzero(feas)[0]
    c, s = classify(kids[sel], level + 1, cfg, spec, bound_filter=bound_filter, feasible_known=True)
    codes[sel] = c
    sums[sel] = s
    return kids, codes, sums


# scalar reference versions -------------------------------------------------

def _corner_radicand_max(P: Box2 | None, Q: Box2) -> Fraction:
    if P is None:  # A = (0, -1)
        return 2 + 2 * Q.y_hi
    mx = min(a * b for a in (P.x_lo, P.x_hi) for b in (Q.x_lo, Q.x_hi))
    my = min(a * b for a in (P.y_lo, P.y_hi) for b in (Q.y_lo, Q.y_hi))
    return 2 - 2 * mx - 2 * my


def pair_radicand_max(cube: Cube6, pair: str | int) -> Fraction:
    """Exact maximum of the pair radicand over the cube (box relaxation)."""
    if isinstance(pair, int):
        pair = PAIRS[pair]
    boxes = {"A": None, **cube.boxes()}
    return _corner_radicand_max(boxes[pair[0]], boxes[pair[1]])


def pair_distance_upper(cube: Cube6, pair: str | int, k: int = DEFAULT_SQRT_PRECISION) -> Fraction:
    """Rational upper bound of the pair distance over the cube."""
    return sqrt_upper(max(pair_radicand_max(cube, pair), Fraction(0)), k)


def distance_bound_test(cube: Cube6, table: DistanceBoundTable = SORTED_DISTANCE_BOUNDS,
                        k: int = DEFAULT_SQRT_PRECISION) -> bool:
    """True (pass) unless the sorted pair bounds undercut the table somewhere."""
    ups = sorted(pair_distance_upper(cube, p, k) for p in PAIRS)
    return all(q2_sign(Q2(u) - table.value(j)) >= 0 for j, u in enumerate(ups))


@dataclass(frozen=True)
class CubeVerdict:
    cube: Cube6
    verdict: str
    bound_value: Fraction | None = None


def distance_sum_test(cube: Cube6, k: int = DEFAULT_SQRT_PRECISION) -> CubeVerdict:
    total = sum((pair_distance_upper(cube, p, k) for p in PAIRS), Fraction(0))
    if q2_sign(OPTIMUM - total) > 0:
        return CubeVerdict(cube, VERDICT_NAMES[SUM], total)
    return CubeVerdict(cube, VERDICT_NAMES[SURVIVE], total)


def cube_to_indices(cube: Cube6) -> tuple[int, list[int]]:
    level = edge_level(cube.edge)
    idx = []
    for b in (cube.boxB, cube.boxC, cube.boxD):
        for lo in (b.x_lo, b.y_lo):
            i = (lo + 1) / cube.edge
            if i.denominator != 1:
                raise ValueError("cube is not aligned with the lattice")
            idx.append(int(i))
    return level, idx


def sum_test_scalar_via_lattice(cube: Cube6, k: int = DEFAULT_SQRT_PRECISION) -> tuple[bool, int]:
    """Vectorized sum test on a single lattice cube: (eliminated, M)."""
    level, idx = cube_to_indices(cube)
    cfg = SearchConfig(sqrt_precision=k, exclude_neighborhood=False, canonical_labels=False)
    codes, sums = classify(np.array([idx], dtype=np.int64), level, cfg, feasible_known=True)
    return bool(codes[0] == SUM), int(sums[0])


# rounds ------------------------------------------------------------------

@dataclass
class RoundStats:
    name: str
    level: int
    parents: int = 0
    raw: int = 0
    infeasible: int = 0
    bound: int = 0
    neighborhood: int = 0
    symmetry: int = 0
    sum_eliminated: int = 0
    survivors: int = 0
    seconds: float = 0.0

    @property
    def feasible(self) -> int:
        return self.raw - self.infeasible

    @property
    def bound_pass(self) -> int:
        return self.feasible - self.bound

    def add_codes(self, codes: np.ndarray):
        cnt = np.bincount(codes, minlength=7)
        self.raw += int(codes.size)
        self.infeasible += int(cnt[INFEASIBLE])
        self.bound += int(cnt[BOUND])
        self.neighborhood += int(cnt[NEIGHBORHOOD])
        self.symmetry += int(cnt[SYMMETRY])
        self.sum_eliminated += int(cnt[SUM])
        self.survivors += int(cnt[SURVIVE])

    def merge(self, other: "RoundStats"):
        for f in ("parents", "raw", "infeasible", "bound", "neighborhood", "symmetry",
                  "sum_eliminated", "survivors"):
            setattr(self, f, getattr(self, f) + getattr(other, f))
        self.seconds += other.seconds

    def as_dict(self) -> dict:
        return {
            "parents": self.parents, "raw": self.raw, "feasible": self.feasible,
            "infeasible": self.infeasible, "bound_filtered": self.bound,
            "bound_pass": self.bound_pass, "neighborhood": self.neighborhood,
            "symmetry": self.symmetry, "sum_eliminated": self.sum_eliminated,
            "survivors": self.survivors,
        }


def rle_encode(codes: Iterable[int]) -> str:
    out = []
    prev, run = None, 0
    for c in codes:
        if c == prev:
            run += 1
            continue
        if prev is not None:
            out.append(f"{CODE_CHARS[prev]}{run}")
        prev, run = c, 1
    if prev is not None:
        out.append(f"{CODE_CHARS[prev]}{run}")
    return "".join(out)


def rle_decode(text: str) -> list[int]:
    out: list[int] = []
    i = 0
    while i < len(text):
        ch = text[i]
        code = CODE_CHARS.index(ch)
        j = i + 1
        while j < len(text) and text[j].isdigit():
            j += 1
        out.extend([code] * int(text[i + 1:j]))
        i = j
    return out


def _rle_np(codes: np.ndarray) -> str:
    if codes.size == 0:
        return ""
    change = np.nonzero(np.diff(codes))[0] + 1
    starts = np.concatenate([[0], change])
    lens = np.diff(np.concatenate([starts, [codes.size]]))
    return "".join(f"{CODE_CHARS[codes[s]]}{n}" for s, n in zip(starts, lens))


@dataclass
class NodeRecord:
    """A subdivided cube and the verdicts of its 4096 children (RLE)."""

    level: int
    idx: tuple
    children: str


def bfs_round(parents: np.ndarray, level: int, cfg: SearchConfig,
              spec: NeighborhoodSpec = NeighborhoodSpec(), name: str = "",
              bound_filter: bool | None = None, records: list | None = None,
              chunk: int = 256) -> tuple[np.ndarray, RoundStats]:
    """Subdivide level-``level`` cubes 4x per axis and classify the children."""
    t0 = time.perf_counter()
    stats = RoundStats(name or f"bfs-{level + 1}", level + 1, parents=int(parents.shape[0]))
    use_bound = cfg.use_bound_filter if bound_filter is None else bound_filter
    out = []
    for i in range(0, parents.shape[0], chunk):
        block = parents[i:i + chunk]
        kids, codes, _ = classify_children(block, level, cfg, spec, use_bound)
        stats.add_codes(codes)
        if records is not None:
            for j in range(block.shape[0]):
                records.append(NodeRecord(level, tuple(int(x) for x in block[j]),
                                          _rle_np(codes[j * 4096:(j + 1) * 4096])))
        out.append(kids[codes == SURVIVE])
    stats.seconds = time.perf_counter() - t0
    surv = np.concatenate(out) if out else np.zeros((0, 6), dtype=np.int64)
    return surv, stats


@dataclass
class DFSResult:
    root: tuple
    level: int
    ok: bool
    resolved_level: int
    nodes: int
    failures: list = field(default_factory=list)   # (level, idx) of exhausted leaves
    records: list = field(default_factory=list)
    sum_eliminated: int = 0


def dfs_verify(idx: Sequence[int], level: int, cfg: SearchConfig,
               spec: NeighborhoodSpec = NeighborhoodSpec(),
               keep_records: bool = False) -> DFSResult:
    """Depth-first refinement of one cube using only the sum test.

    Children are visited in lexicographic order; every non-eliminated child
    is refined before moving on.  A child that survives at ``cfg.max_level``
    is a failure witness.
    """
    root = tuple(int(x) for x in idx)
    res = DFSResult(root, level, True, level, 0)
    stack = [(level, np.array([root], dtype=np.int64))]
    while stack:
        lv, node = stack.pop()
        kids, codes, _ = classify_children(node, lv, cfg, spec, bound_filter=False)
        res.nodes += 1
        res.resolved_level = max(res.resolved_level, lv + 1)
        res.sum_eliminated += int((codes == SUM).sum())
        if keep_records:
            res.records.append(NodeRecord(lv, tuple(int(x) for x in node[0]), _rle_np(codes)))
        bad = np.nonzero(codes == SURVIVE)[0]
        if lv + 1 >= cfg.max_level:
            for b in bad:
                res.ok = False
                res.failures.append((lv + 1, tuple(int(x) for x in kids[b])))
            continue
        # push in reverse so the first failing child is processed first
        for b in bad[::-1]:
            stack.append((lv + 1, kids[b:b + 1]))
    return res


@dataclass
class ChunkResult:
    records: list
    failures: list
    resolved: list        # per root: deepest child level evaluated
    nodes: int
    stats: dict           # level -> RoundStats


def _refine_chunk(args) -> ChunkResult:
    """Level-synchronous refinement of a block of roots; same leaves as DFS."""
    roots, level, cfg, spec = args
    records, failures = [], []
    resolved = np.full(roots.shape[0], level, dtype=np.int64)
    stats: dict = {}
    frontier, owner = roots, np.arange(roots.shape[0])
    lv, nodes = level, 0
    while frontier.shape[0]:
        kids, codes, _ = classify_children(frontier, lv, cfg, spec, bound_filter=False)
        st = stats.setdefault(lv + 1, RoundStats(f"dfs-{lv + 1}", lv + 1))
        st.parents += frontier.shape[0]
        st.add_codes(codes)
        nodes += frontier.shape[0]
        resolved[owner] = lv + 1
        for j in range(frontier.shape[0]):
            records.append(NodeRecord(lv, tuple(int(x) for x in frontier[j]),
                                      _rle_np(codes[j * 4096:(j + 1) * 4096])))
        surv = np.nonzero(codes == SURVIVE)[0]
        if lv + 1 >= cfg.max_level:
            for b in surv:
                failures.append((lv + 1, tuple(int(x) for x in kids[b])))
            break
        frontier, owner = kids[surv], owner[surv // 4096]
        lv += 1
    return ChunkResult(records, failures, resolved.tolist(), nodes, stats)


@dataclass
class GlobalResult:
    cfg: SearchConfig
    rounds: list
    dfs_stats: dict
    resolved_histogram: dict       # edge level -> number of step-2 cubes
    failures: list
    records: list
    root_codes: str
    seconds: float

    @property
    def valid(self) -> bool:
        return not self.failures

    def counts(self) -> dict:
        out = {}
        for r in self.rounds:
            for k, v in r.as_dict().items():
                out[f"{r.name}.{k}"] = v
        for lv, st in sorted(self.dfs_stats.items()):
            for k, v in st.as_dict().items():
                out[f"dfs-L{lv}.{k}"] = v
        for lv, n in sorted(self.resolved_histogram.items()):
            out[f"resolved_at_edge_1/{level_scale(lv)}"] = n
        out["failures"] = len(self.failures)
        return out


def _log(progress, msg):
    if progress:
        print(msg, file=sys.stderr, flush=True)


def run_global(cfg: SearchConfig = None, spec: NeighborhoodSpec = NeighborhoodSpec(),
               progress: bool = False, cover: np.ndarray | None = None) -> GlobalResult:
    """Step 1 (classify the 1/8 cover), further BFS rounds, then DFS per cube."""
    cfg = cfg or SearchConfig()
    t0 = time.perf_counter()
    records: list[NodeRecord] = []
    cover = initial_cover_indices() if cover is None else cover
    st1 = RoundStats("step1", 0, parents=1)
    codes, _ = classify(cover, 0, cfg, spec, feasible_known=True)
    st1.add_codes(codes)
    st1.seconds = time.perf_counter() - t0
    root_codes = _rle_np(codes)
    survivors = cover[codes == SURVIVE]
    rounds = [st1]
    _log(progress, f"step1: {cover.shape[0]} cubes, {survivors.shape[0]} survive ({st1.seconds:.1f}s)")
    level = 0
    for _ in cfg.bfs_edges[1:]:
        survivors, st = bfs_round(survivors, level, cfg, spec, name=f"step{level + 2}", records=records)
        rounds.append(st)
        level += 1
        _log(progress, f"step{level + 1}: {st.raw} children, {st.survivors} survive ({st.seconds:.1f}s)")

    failures: list = []
    dfs_stats: dict = {}
    hist: dict = {}
    if level >= cfg.max_level:
        failures = [(level, tuple(int(x) for x in r)) for r in survivors]
    else:
        chunks = [(survivors[i:i + cfg.chunk_size], level, cfg, spec)
                  for i in range(0, survivors.shape[0], cfg.chunk_size)]
        if cfg.worker_count > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(cfg.worker_count) as pool:
                results = pool.map(_refine_chunk, chunks)
                results = list(_progress_iter(results, len(chunks), progress))
        else:
            results = list(_progress_iter(map(_refine_chunk, chunks), len(chunks), progress))
        for r in results:
            records.extend(r.records)
            failures.extend(r.failures)
            for lv in r.resolved:
                hist[lv] = hist.get(lv, 0) + 1
            for lv, st in r.stats.items():
                dfs_stats.setdefault(lv, RoundStats(st.name, lv)).merge(st)
    records.sort(key=lambda r: (r.level, r.idx))
    failures.sort()
    return GlobalResult(cfg, rounds, dfs_stats, hist, failures, records, root_codes,
                        time.perf_counter() - t0)


def _progress_iter(it, total, progress):
    t0 = time.perf_counter()
    for i, x in enumerate(it, 1):
        if progress and (i % 10 == 0 or i == total):
            print(f"dfs: {i}/{total} chunks ({time.perf_counter() - t0:.0f}s)", file=sys.stderr, flush=True)
        yield x


def witness_configs(failures: Sequence[tuple]) -> list[tuple]:
    """Cube centers (float) of failure witnesses as ((xB,yB),(xC,yC),(xD,yD))."""
    out = []
    for level, idx in failures:
        h = 1.0 / level_scale(level)
        c = [-1.0 + (i + 0.5) * h for i in idx]
        out.append(((c[0], c[1]), (c[2], c[3]), (c[4], c[5])))
    return out


def cube_contains_square(idx: np.ndarray, level: int) -> np.ndarray:
    """Which lattice cubes contain B=(1,0), C=(-1,0), D=(0,1)."""
    N = level_scale(level)
    lo = idx.astype(np.int64) - N
    hi = lo + 1
    target = np.array([N, 0, -N, 0, 0, N])
    return ((lo <= target) & (target <= hi)).all(axis=1)


def grid_counts(edge: Fraction = Fraction(1, 8)) -> tuple[int, int]:
    """(# cells meeting the circle, # cells meeting the disk) of the grid."""
    boxes = grid_boxes(edge)
    return sum(map(box_meets_circle, boxes)), sum(map(box_meets_disk, boxes))


def scalar_classify(cube: Cube6, cfg: SearchConfig, spec: NeighborhoodSpec = NeighborhoodSpec(),
                    table: DistanceBoundTable = SORTED_DISTANCE_BOUNDS) -> int:
    """Fraction-based reference for :func:`classify` (same precedence)."""
    k = cfg.sqrt_precision
    if not (box_meets_circle(cube.boxB) and box_meets_circle(cube.boxC) and box_meets_disk(cube.boxD)):
        return INFEASIBLE
    if cfg.use_bound_filter and not distance_bound_test(cube, table, k):
        return BOUND
    if cfg.exclude_neighborhood and cube_in_neighborhood(cube, spec):
        return NEIGHBORHOOD
    if cfg.canonical_labels and _scalar_symmetry_reject(cube):
        return SYMMETRY
    if distance_sum_test(cube, k).verdict == VERDICT_NAMES[SUM]:
        return SUM
    return SURVIVE


def _scalar_symmetry_reject(cube: Cube6) -> bool:
    B, C, D = cube.boxB, cube.boxC, cube.boxD
    if B.x_hi < C.x_lo:
        return True
    for P in (B, C):
        yd = max(a * (1 + b) for a in (D.y_lo, D.y_hi) for b in (P.y_lo, P.y_hi))
        xd = max(a * b for a in (P.x_lo, P.x_hi) for b in (D.x_lo, D.x_hi))
        if yd + xd < 0:
            return True
    return False
