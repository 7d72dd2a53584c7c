"""From generalized ranks to generalized persistence diagrams.

The diagram ``dgm`` is the unique integer function on intervals with
``rk(I) = sum of dgm(J) over J ⊇ I``. Two independent routes compute it:

* ``gpd_from_gri`` peels values off superset-first and needs no Möbius
  values at all;
* ``gpd_direct`` evaluates the signed sum over subsets of the cover set,
  which is exponential in the number of covers and is the benchmark subject.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

import numpy as np

from . import linalg
from .diagram import Diagram
from .grid import (Grid2, Interval2, component_of, contains, cover_points,
                   enumerate_intervals, hull_of_points, interval_from_points,
                   intersection)
from .pmodule import GridModule, generalized_rank


class _MaskTable:
    """Growing table of (interval mask, value) with vectorized superset sums."""

    def __init__(self, grid: Grid2, capacity: int = 64):
        self.grid = grid
        self.wide = (grid.n1 + 1) * (grid.n2 + 1) > 62
        dtype = object if self.wide else np.int64
        self.masks = np.zeros(capacity, dtype=dtype)
        self.values = np.zeros(capacity, dtype=np.int64)
        self.n = 0

    def add(self, mask: int, value: int):
        if self.n == len(self.masks):
            self.masks = np.concatenate([self.masks, np.zeros_like(self.masks)])
            self.values = np.concatenate([self.values, np.zeros_like(self.values)])
        self.masks[self.n] = mask
        self.values[self.n] = value
        self.n += 1

    def superset_sum(self, mask: int) -> int:
        if not self.n:
            return 0
        m = self.masks[:self.n]
        hit = (m & mask) == mask
        return int(self.values[:self.n][hit.astype(bool)].sum())


def gpd_from_gri(rk: Diagram) -> Diagram:
    """Möbius inversion of a rank function over (Int, ⊇), superset-first."""
    grid = rk.grid
    table = _MaskTable(grid)
    out = {}
    for I in enumerate_intervals(grid):
        mask = I.mask(grid)
        v = rk[I] - table.superset_sum(mask)
        if v:
            out[I] = v
            table.add(mask, v)
    return Diagram(grid, out)


def superset_sums(dgm: Diagram, intervals: Iterable[Interval2] | None = None) -> dict:
    """``I -> sum of dgm(J) over J ⊇ I`` for every interval."""
    grid = dgm.grid
    table = _MaskTable(grid)
    for J, v in dgm.entries.items():
        table.add(J.mask(grid), v)
    Is = enumerate_intervals(grid) if intervals is None else intervals
    return {I: table.superset_sum(I.mask(grid)) for I in Is}


def roundtrip_failures(rk: Diagram, dgm: Diagram) -> list[Interval2]:
    """Intervals where ``rk(I)`` differs from the superset sum of ``dgm``."""
    sums = superset_sums(dgm)
    return [I for I, s in sums.items() if s != rk[I]]


def check_roundtrip(rk: Diagram, dgm: Diagram) -> bool:
    return not roundtrip_failures(rk, dgm)


class _RankSource:
    def __init__(self, src):
        self.src = src
        self.cache: dict = {}

    def __call__(self, J: Interval2) -> int:
        if isinstance(self.src, Diagram):
            return self.src[J]
        v = self.cache.get(J)
        if v is None:
            v = self.cache[J] = generalized_rank(self.src, J)
        return v


@dataclass
class DirectResult:
    value: int
    nonzero_terms: int
    total_terms: int


def gpd_direct(src, I: Interval2, grid: Grid2 | None = None) -> DirectResult:
    """``dgm(I)`` as the signed sum of ranks of hulls of cover subsets.

    ``src`` is a module (ranks computed on demand) or a rank diagram. The
    empty subset contributes ``rk(I)`` itself. ``nonzero_terms`` counts
    subsets whose hull has nonzero rank; ``total_terms`` counts all subsets.
    """
    rank = src if isinstance(src, _RankSource) else _RankSource(src)
    if grid is None:
        grid = rank.src.grid
    covers = cover_points(I, grid)
    base = list(I.points)
    value = nonzero = total = 0
    for k in range(len(covers) + 1):
        sign = -1 if k % 2 else 1
        for S in itertools.combinations(covers, k):
            J = hull_of_points(base + list(S)) if S else I
            r = rank(J)
            total += 1
            if r:
                nonzero += 1
                value += sign * r
    return DirectResult(value, nonzero, total)


def gpd_cover(src, threads: int = 1, grid: Grid2 | None = None) -> Diagram:
    """Full diagram via ``gpd_direct`` on every interval."""
    if grid is None:
        grid = src.grid
    Is = enumerate_intervals(grid)
    if isinstance(src, GridModule):
        from .pmodule import gri
        src = gri(src, threads=threads)
    rank = _RankSource(src)
    if threads <= 1:
        vals = [gpd_direct(rank, I, grid).value for I in Is]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            vals = list(ex.map(lambda I: gpd_direct(rank, I, grid).value, Is))
    return Diagram(grid, {I: v for I, v in zip(Is, vals) if v})


def support_size(d: Diagram) -> int:
    return len(d.entries)


def check_monotone(rk: Diagram) -> bool:
    """``rk(J) <= rk(I)`` whenever ``J ⊇ I``; checking covers suffices."""
    for I in enumerate_intervals(rk.grid):
        r = rk[I]
        for q in cover_points(I, rk.grid):
            if rk[interval_from_points(I.points | {q})] > r:
                return False
    return True


def support_contained(dgm: Diagram, rk: Diagram) -> bool:
    return all(rk[I] for I in dgm.entries)


# ---------------------------------------------------------------------------
# restriction to a rectangular subgrid


def _shift(I: Interval2, dx: int, dy: int) -> Interval2:
    return Interval2(I.ymin - dy, tuple((lo - dx, hi - dx) for lo, hi in I.rows))


def restrict_diagram(dgm: Diagram, I: Interval2) -> Diagram:
    """Diagram of the restriction to a rectangle ``I``, in the rectangle's own coordinates.

    Each ``J'`` contributes its value to ``J' ∩ I``; for a rectangular ``I``
    that intersection is a single interval whenever it is nonempty.
    """
    if not I.is_rectangle():
        raise ValueError("restrict_diagram needs a rectangular subgrid")
    x0, x1 = I.rows[0]
    y0 = I.ymin
    sub = Grid2(x1 - x0, I.ymax - y0)
    out: dict = {}
    for J, v in dgm.entries.items():
        K = intersection(J, I)
        if K is None:
            continue
        K = _shift(K, x0, y0)
        out[K] = out.get(K, 0) + v
    return Diagram(sub, out)


def restrict_module(M: GridModule, I: Interval2) -> GridModule:
    """The module on a rectangle ``I`` as a module on its own grid."""
    if not I.is_rectangle():
        raise ValueError("restrict_module needs a rectangular subgrid")
    x0, x1 = I.rows[0]
    return M.sub_box((x0, I.ymin), (x1, I.ymax))


# ---------------------------------------------------------------------------
# functions on finite posets


def pushforward(h: dict, f: Callable) -> dict:
    """``(f_# h)(q) = sum of h(p) over p with f(p) = q``."""
    out: dict = {}
    for x, v in h.items():
        y = f(x)
        out[y] = out.get(y, 0) + v
    return {y: v for y, v in out.items() if v}


def pullback(l: dict | Callable, f: Callable, domain: Iterable) -> dict:
    """``(f^# l)(p) = l(f(p))`` on ``domain``."""
    get = l if callable(l) else (lambda y: l.get(y, 0))
    return {x: get(f(x)) for x in domain}


def _below_order(elements: list, leq: Callable) -> list:
    below = {x: sum(1 for y in elements if leq(y, x)) for x in elements}
    return sorted(elements, key=lambda x: below[x])


def mobius_inversion(elements: Iterable[Hashable], leq: Callable, f: dict | Callable) -> dict:
    """The unique ``g`` with ``f(x) = sum of g(y) over y <= x`` on a finite poset."""
    elements = list(elements)
    get = f if callable(f) else (lambda x: f.get(x, 0))
    g: dict = {}
    for x in _below_order(elements, leq):
        g[x] = get(x) - sum(g[y] for y in g if y != x and leq(y, x))
    return g


def mobius_function(elements: Iterable[Hashable], leq: Callable) -> dict:
    """``mu(x, y)`` for ``x <= y`` by the recursive definition."""
    elements = list(elements)
    order = _below_order(elements, leq)
    mu: dict = {}
    for x in elements:
        for y in order:
            if not leq(x, y):
                continue
            if x == y:
                mu[(x, y)] = 1
            else:
                mu[(x, y)] = -sum(mu[(x, z)] for z in order
                                  if (x, z) in mu and z != y and leq(z, y))
    return mu


def is_galois_connection(P, Q, leqP, leqQ, g1, g2) -> bool:
    """``g1(p) <= q  iff  p <= g2(q)`` for all pairs, with both maps monotone."""
    P, Q = list(P), list(Q)
    for a in P:
        for b in P:
            if leqP(a, b) and not leqQ(g1(a), g1(b)):
                return False
    for a in Q:
        for b in Q:
            if leqQ(a, b) and not leqP(g2(a), g2(b)):
                return False
    return all(leqQ(g1(p), q) == leqP(p, g2(q)) for p in P for q in Q)


def rota_holds(P, Q, leqP, leqQ, g1, g2, f: dict) -> bool:
    """Möbius inversion over ``Q`` of ``g2^# f`` equals ``g1_#`` of inversion over ``P``."""
    P, Q = list(P), list(Q)
    lhs = mobius_inversion(Q, leqQ, pullback(f, g2, Q))
    rhs = pushforward(mobius_inversion(P, leqP, f), g1)
    return all(lhs.get(q, 0) == rhs.get(q, 0) for q in Q)


def interval_poset_at(grid: Grid2, p, within: Interval2 | None = None) -> list[Interval2]:
    """Intervals of ``grid`` containing ``p`` (and contained in ``within``)."""
    out = []
    for J in enumerate_intervals(grid):
        if p in J and (within is None or contains(within, J)):
            out.append(J)
    return out


def projection_to(I: Interval2, p) -> Callable:
    """``J' -> `` the component of ``J' ∩ I`` containing ``p``."""

    def pi(J):
        return interval_from_points(component_of(J.points & I.points, p))

    return pi


def superset_leq(a: Interval2, b: Interval2) -> bool:
    """The order of (Int, ⊇): ``a <= b`` iff ``a ⊇ b``."""
    return contains(a, b)


# ---------------------------------------------------------------------------
# barcodes


@dataclass
class Barcode:
    grid: Grid2
    multiplicities: dict = field(default_factory=dict)

    def __post_init__(self):
        for I, k in self.multiplicities.items():
            if k < 1:
                raise ValueError("multiplicities must be positive")
            if not I.within(self.grid):
                raise ValueError(f"{I} is not an interval of {self.grid}")

    @classmethod
    def from_list(cls, grid: Grid2, intervals: Iterable[Interval2]) -> "Barcode":
        mult: dict = {}
        for I in intervals:
            mult[I] = mult.get(I, 0) + 1
        return cls(grid, mult)

    def bars(self) -> list[Interval2]:
        out = []
        for I in sorted(self.multiplicities, key=Interval2.sort_key):
            out += [I] * self.multiplicities[I]
        return out


def barcode_module(b: Barcode, p: int = 2) -> GridModule:
    """Direct sum of interval modules, one summand per bar."""
    grid = b.grid
    bars = b.bars()
    shape = grid.shape
    basis = {pt: [k for k, I in enumerate(bars) if pt in I] for pt in grid.points()}
    dims = np.zeros(shape, dtype=np.int64)
    for pt, ks in basis.items():
        dims[pt] = len(ks)
    arrows = {}
    for pt in grid.points():
        for axis in (0, 1):
            q = (pt[0] + 1, pt[1]) if axis == 0 else (pt[0], pt[1] + 1)
            if q not in grid:
                continue
            A = linalg.zeros(len(basis[q]), len(basis[pt]))
            pos = {k: r for r, k in enumerate(basis[q])}
            for c, k in enumerate(basis[pt]):
                if k in pos:
                    A[pos[k], c] = 1
            arrows[(pt, axis)] = A
    return GridModule(shape, dims, arrows, p)


def verify_barcode(dgm: Diagram, b: Barcode) -> bool:
    return dgm.grid == b.grid and dgm.entries == b.multiplicities
