"""Finite 2-d grid lattices, their intervals, and the interval poset (Int, ⊇).

An interval of ``[n1] x [n2]`` is stored as a staircase: one contiguous
``(lo, hi)`` x-range per row, rows consecutive in y starting at ``ymin``.
The staircase conditions (both ends nonincreasing in y, consecutive rows
overlapping in the sense ``hi[y+1] >= lo[y]``) characterize nonempty,
convex, connected subsets of a 2-d grid.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Point = tuple[int, ...]


@dataclass(frozen=True)
class Grid2:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"grid extents must be nonnegative, got {self.n1}, {self.n2}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1 + 1, self.n2 + 1)

    def points(self) -> list[Point]:
        return [(x, y) for x in range(self.n1 + 1) for y in range(self.n2 + 1)]

    def __contains__(self, p) -> bool:
        return 0 <= p[0] <= self.n1 and 0 <= p[1] <= self.n2

    def bit(self, p: Point) -> int:
        return p[0] * (self.n2 + 1) + p[1]

    def full(self) -> "Interval2":
        return Interval2(0, tuple((0, self.n1) for _ in range(self.n2 + 1)))

    def to_json(self) -> dict:
        return {"n1": self.n1, "n2": self.n2}

    @classmethod
    def from_json(cls, obj: dict) -> "Grid2":
        return cls(int(obj["n1"]), int(obj["n2"]))


def leq(p: Point, q: Point) -> bool:
    return all(a <= b for a, b in zip(p, q))


def join(p: Point, q: Point) -> Point:
    return tuple(max(a, b) for a, b in zip(p, q))


def meet(p: Point, q: Point) -> Point:
    return tuple(min(a, b) for a, b in zip(p, q))


@dataclass(frozen=True, order=False)
class Interval2:
    ymin: int
    rows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        rows = tuple((int(lo), int(hi)) for lo, hi in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise ValueError("an interval has at least one row")
        if self.ymin < 0:
            raise ValueError("negative ymin")
        for k, (lo, hi) in enumerate(rows):
            if lo < 0 or lo > hi:
                raise ValueError(f"empty or negative row {k}: {(lo, hi)}")
            if k:
                plo, phi = rows[k - 1]
                if lo > plo or hi > phi:
                    raise ValueError("row ends must be nonincreasing in y")
                if hi < plo:
                    raise ValueError("consecutive rows do not overlap")

    @property
    def ymax(self) -> int:
        return self.ymin + len(self.rows) - 1

    def row(self, y: int) -> tuple[int, int] | None:
        if self.ymin <= y <= self.ymax:
            return self.rows[y - self.ymin]
        return None

    @cached_property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.rows)

    def __len__(self) -> int:
        return self.size

    @cached_property
    def points(self) -> frozenset[Point]:
        return frozenset(self.iter_points())

    def iter_points(self):
        for k, (lo, hi) in enumerate(self.rows):
            y = self.ymin + k
            for x in range(lo, hi + 1):
                yield (x, y)

    def __contains__(self, p) -> bool:
        r = self.row(p[1])
        return r is not None and r[0] <= p[0] <= r[1]

    def mask(self, grid: Grid2) -> int:
        m = 0
        for p in self.iter_points():
            m |= 1 << grid.bit(p)
        return m

    def within(self, grid: Grid2) -> bool:
        return self.ymax <= grid.n2 and max(hi for _, hi in self.rows) <= grid.n1

    def sort_key(self):
        return (-self.size, self.ymin, self.rows)

    def is_rectangle(self) -> bool:
        return all(r == self.rows[0] for r in self.rows)

    def to_json(self) -> dict:
        return {"ymin": self.ymin, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "Interval2":
        return cls(int(obj["ymin"]), tuple(tuple(r) for r in obj["rows"]))

    def encode(self) -> str:
        """Compact row-range string, e.g. ``y1:0-2;1-1``."""
        return f"y{self.ymin}:" + ";".join(f"{lo}-{hi}" for lo, hi in self.rows)

    def __repr__(self) -> str:
        return f"Interval2({self.encode()})"


def segment(p: Point, q: Point) -> Interval2:
    if not leq(p, q):
        raise ValueError(f"{p} is not <= {q}")
    return Interval2(p[1], tuple((p[0], q[0]) for _ in range(q[1] - p[1] + 1)))


def rectangle(x0: int, x1: int, y0: int, y1: int) -> Interval2:
    return segment((x0, y0), (x1, y1))


# ---------------------------------------------------------------------------
# literal definition, used as the brute-force reference


def is_interval_set(points: Iterable[Point]) -> bool:
    """Nonempty, convex and connected, checked directly from the definition."""
    S = set(points)
    if not S:
        return False
    lo = tuple(min(p[k] for p in S) for k in range(2))
    hi = tuple(max(p[k] for p in S) for k in range(2))
    box = [(x, y) for x in range(lo[0], hi[0] + 1) for y in range(lo[1], hi[1] + 1)]
    for r in box:
        if r in S:
            continue
        if any(leq(p, r) for p in S) and any(leq(r, q) for q in S):
            if any(leq(p, r) and leq(r, q) for p in S for q in S):
                return False
    return is_connected(S)


def is_connected(S: Iterable[Point]) -> bool:
    """Connectivity of a point set under the comparability relation."""
    S = list(S)
    if not S:
        return False
    seen = {S[0]}
    stack = [S[0]]
    while stack:
        p = stack.pop()
        for q in S:
            if q not in seen and (leq(p, q) or leq(q, p)):
                seen.add(q)
                stack.append(q)
    return len(seen) == len(S)


def component_of(points: Iterable[Point], p: Point) -> frozenset:
    """Connected component of ``p`` in a point set under comparability."""
    S = set(points)
    seen = {p}
    stack = [p]
    while stack:
        a = stack.pop()
        for q in S:
            if q not in seen and (leq(a, q) or leq(q, a)):
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def interval_from_points(points: Iterable[Point]) -> Interval2:
    """Staircase encoding of a point set; raises if it is not an interval."""
    S = set(points)
    if not S:
        raise ValueError("empty point set")
    ys = sorted({p[1] for p in S})
    rows = []
    for y in range(ys[0], ys[-1] + 1):
        xs = sorted(p[0] for p in S if p[1] == y)
        if not xs or xs[-1] - xs[0] + 1 != len(xs):
            raise ValueError("point set is not an interval")
        rows.append((xs[0], xs[-1]))
    return Interval2(ys[0], tuple(rows))


# ---------------------------------------------------------------------------
# enumeration


def enumerate_intervals(grid: Grid2) -> list[Interval2]:
    """Every interval of the grid once, larger intervals first."""
    W, H = grid.n1 + 1, grid.n2 + 1
    out: list[Interval2] = []

    def extend(ymin, rows):
        out.append(Interval2(ymin, tuple(rows)))
        if ymin + len(rows) >= H:
            return
        plo, phi = rows[-1]
        for lo in range(0, plo + 1):
            for hi in range(max(lo, plo), phi + 1):
                rows.append((lo, hi))
                extend(ymin, rows)
                rows.pop()

    for ymin in range(H):
        for lo in range(W):
            for hi in range(lo, W):
                extend(ymin, [(lo, hi)])
    out.sort(key=Interval2.sort_key)
    return out


# ---------------------------------------------------------------------------
# order structure


def contains(outer: Interval2, inner: Interval2) -> bool:
    if inner.ymin < outer.ymin or inner.ymax > outer.ymax:
        return False
    for k, (lo, hi) in enumerate(inner.rows):
        olo, ohi = outer.rows[inner.ymin + k - outer.ymin]
        if lo < olo or hi > ohi:
            return False
    return True


def intersection(a: Interval2, b: Interval2) -> Interval2 | None:
    """Intersection of two intervals; ``None`` if empty.

    The intersection is always convex but can be disconnected (the two hooks
    of ``[1]^2`` meet in two incomparable points); that case raises.
    """
    y0, y1 = max(a.ymin, b.ymin), min(a.ymax, b.ymax)
    rows = []
    start = None
    for y in range(y0, y1 + 1):
        ra, rb = a.row(y), b.row(y)
        lo, hi = max(ra[0], rb[0]), min(ra[1], rb[1])
        if lo <= hi:
            if start is None:
                start = y
            elif len(rows) != y - start:
                raise ValueError("intersection is not an interval")
            rows.append((lo, hi))
    if not rows:
        return None
    try:
        return Interval2(start, tuple(rows))
    except ValueError as exc:
        raise ValueError("intersection is not an interval") from exc


def hull_of_points(points: Iterable[Point]) -> Interval2:
    """Smallest interval containing a connected point set.

    The convex closure ``{r : p <= r <= q for some p, q}`` of a connected set
    is an interval. Raises for point sets whose closure is disconnected,
    where no unique smallest interval need exist.
    """
    S = list(points)
    if not S:
        raise ValueError("empty point set")
    ys = [p[1] for p in S]
    y0, y1 = min(ys), max(ys)
    rows = []
    for y in range(y0, y1 + 1):
        lo = min(p[0] for p in S if p[1] <= y)
        hi = max(p[0] for p in S if p[1] >= y)
        if lo > hi:
            raise ValueError("points have no smallest enclosing interval")
        rows.append((lo, hi))
    try:
        return Interval2(y0, tuple(rows))
    except ValueError as exc:
        raise ValueError("points have no smallest enclosing interval") from exc


def hull(S: Iterable[Interval2]) -> Interval2:
    """Meet of a set of intervals in (Int, ⊇): the smallest interval containing all."""
    S = list(S)
    if not S:
        raise ValueError("hull of an empty family")
    if len(S) == 1:
        return S[0]
    y0 = min(I.ymin for I in S)
    y1 = max(I.ymax for I in S)
    rows = []
    for y in range(y0, y1 + 1):
        # leftmost point at or below row y, rightmost point at or above row y
        lo = min((I.row(min(y, I.ymax))[0] for I in S if I.ymin <= y), default=None)
        hi = max((I.row(max(y, I.ymin))[1] for I in S if I.ymax >= y), default=None)
        if lo is None or hi is None or lo > hi:
            raise ValueError("intervals have no smallest enclosing interval")
        rows.append((lo, hi))
    try:
        return Interval2(y0, tuple(rows))
    except ValueError as exc:
        raise ValueError("intervals have no smallest enclosing interval") from exc


def cover_points(I: Interval2, grid: Grid2) -> list[Point]:
    """Grid points p outside I such that I ∪ {p} is again an interval."""
    cand = set()
    for (x, y) in I.iter_points():
        for q in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
            if q in grid and q not in I:
                cand.add(q)
    out = []
    for q in sorted(cand):
        if _extends(I, q):
            out.append(q)
    return out


def _extends(I: Interval2, q: Point) -> bool:
    x, y = q
    if y == I.ymin - 1:
        rows = ((x, x),) + I.rows
        ymin = y
    elif y == I.ymax + 1:
        rows = I.rows + ((x, x),)
        ymin = I.ymin
    else:
        lo, hi = I.row(y)
        if x == lo - 1:
            new = (x, hi)
        elif x == hi + 1:
            new = (lo, x)
        else:
            return False
        rows = list(I.rows)
        rows[y - I.ymin] = new
        ymin = I.ymin
    try:
        Interval2(ymin, tuple(rows))
    except ValueError:
        return False
    return True


def add_point(I: Interval2, q: Point) -> Interval2:
    return interval_from_points(I.points | {q})


def cover_set(I: Interval2, grid: Grid2) -> list[Interval2]:
    """Minimal proper superset intervals of I; each adds exactly one point."""
    return [add_point(I, q) for q in cover_points(I, grid)]


def mobius(J: Interval2, I: Interval2, grid: Grid2) -> tuple[int, int]:
    """Möbius function μ(J, I) of (Int(grid), ⊇) by signed cover subsets.

    Returns ``(mu, count)`` where ``count`` is the number of nonempty
    subsets S of Cov(I) whose hull is J.
    """
    if not contains(J, I):
        raise ValueError("mobius(J, I) needs J ⊇ I")
    if J == I:
        return 1, 0
    pts = [q for q in cover_points(I, grid) if q in J]
    mu = count = 0
    for k in range(1, len(pts) + 1):
        for S in itertools.combinations(pts, k):
            if hull_of_points(list(I.points) + list(S)) == J:
                mu += (-1) ** k
                count += 1
    return mu, count


# ---------------------------------------------------------------------------
# fences


@dataclass(frozen=True)
class Zigzag:
    """Points joined consecutively by ``'<'`` (going up) or ``'>'`` (going down)."""

    points: tuple[Point, ...]
    directions: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.directions) != max(len(self.points) - 1, 0):
            raise ValueError("need one direction per consecutive pair")
        for (p, q), d in zip(zip(self.points, self.points[1:]), self.directions):
            ok = leq(p, q) if d == "<" else leq(q, p) if d == ">" else False
            if not ok or p == q:
                raise ValueError(f"{p} {d} {q} does not hold")

    def relations(self) -> list[tuple[Point, Point]]:
        """Consecutive pairs as ``(smaller, larger)``."""
        out = []
        for (p, q), d in zip(zip(self.points, self.points[1:]), self.directions):
            out.append((p, q) if d == "<" else (q, p))
        return out

    def __len__(self):
        return len(self.points)


def minimal_points(I: Interval2) -> list[Point]:
    """Minimal elements of I, by increasing x."""
    out = []
    for k in range(len(I.rows) - 1, -1, -1):
        lo = I.rows[k][0]
        if k == 0 or I.rows[k - 1][0] > lo:
            out.append((lo, I.ymin + k))
    return out


def maximal_points(I: Interval2) -> list[Point]:
    """Maximal elements of I, by increasing x."""
    out = []
    last = len(I.rows) - 1
    for k in range(last, -1, -1):
        hi = I.rows[k][1]
        if k == last or I.rows[k + 1][1] < hi:
            out.append((hi, I.ymin + k))
    return out


def min_zz(I: Interval2) -> Zigzag:
    mins = minimal_points(I)
    pts, dirs = [mins[0]], []
    for p, q in zip(mins, mins[1:]):
        pts += [join(p, q), q]
        dirs += ["<", ">"]
    return Zigzag(tuple(pts), tuple(dirs))


def max_zz(I: Interval2) -> Zigzag:
    maxs = maximal_points(I)
    pts, dirs = [maxs[0]], []
    for p, q in zip(maxs, maxs[1:]):
        pts += [meet(p, q), q]
        dirs += [">", "<"]
    return Zigzag(tuple(pts), tuple(dirs))


def is_lower_fence(L: Iterable[Point], P: Iterable[Point]) -> bool:
    L, P = list(L), list(P)
    if not is_connected(L):
        return False
    for q in P:
        below = [p for p in L if leq(p, q)]
        if not below or not is_connected(below):
            return False
    return True


def is_upper_fence(U: Iterable[Point], P: Iterable[Point]) -> bool:
    U, P = list(U), list(P)
    if not is_connected(U):
        return False
    for q in P:
        above = [p for p in U if leq(q, p)]
        if not above or not is_connected(above):
            return False
    return True


# ---------------------------------------------------------------------------
# real points to grid points


BOTTOM = None


def floor_to_grid(x: Sequence, axis_values: Sequence[Sequence]):
    """Componentwise largest grid point below ``x``; ``BOTTOM`` (None) if none."""
    out = []
    for xi, vals in zip(x, axis_values):
        k = bisect.bisect_right(vals, xi) - 1
        if k < 0:
            return BOTTOM
        out.append(k)
    return tuple(out)
