"""Persistence modules on finite grids as explicit dimension and matrix data.

A module on ``[n_1] x ... x [n_d]`` stores one matrix per unit edge
``p -> p + e_k``. Maps between comparable points are composites of unit
edges, taken axis by axis; commutativity of every unit square makes the
choice of path irrelevant.

The generalized rank of an interval is the rank of the canonical map from
the limit to the colimit of the restricted module. On 2-d grids both are
computed over the zigzags through the minimal (resp. maximal) points, which
are fences; a brute-force path over every point of the interval is kept as
a reference and for product intervals in higher dimension.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import linalg
from .diagram import FORMAT, Diagram
from .grid import (Grid2, Interval2, Zigzag, enumerate_intervals, leq, max_zz,
                   maximal_points, min_zz, minimal_points)
from .homology import SimplicialComplex, homology_basis, induced_map

Point = tuple[int, ...]


def _unit(p: Point, k: int) -> Point:
    return p[:k] + (p[k] + 1,) + p[k + 1:]


@dataclass(eq=False)
class GridModule:
    """A functor from a finite grid to finite-dimensional F_p vector spaces.

    ``shape`` counts grid values per axis (``n_k + 1``). ``arrows`` maps
    ``(point, axis)`` to the matrix of ``M(point <= point + e_axis)``;
    missing arrows are zero matrices.
    """

    shape: tuple[int, ...]
    dims: np.ndarray
    arrows: dict = field(default_factory=dict)
    p: int = 2

    def __post_init__(self):
        self.shape = tuple(int(s) for s in self.shape)
        self.dims = np.asarray(self.dims, dtype=np.int64).reshape(self.shape)
        if not linalg.is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")
        if (self.dims < 0).any():
            raise ValueError("negative dimension")
        full = {}
        for pt in self.points():
            for k in range(self.ndim):
                q = _unit(pt, k)
                if q[k] >= self.shape[k]:
                    continue
                A = self.arrows.get((pt, k))
                want = (self.dim(q), self.dim(pt))
                if A is None:
                    A = linalg.zeros(*want)
                else:
                    A = linalg.asmat(A, self.p)
                    if A.size == 0:
                        A = A.reshape(want)
                    if A.shape != want:
                        raise ValueError(f"arrow at {pt} axis {k} has shape {A.shape}, expected {want}")
                full[(pt, k)] = A
        self.arrows = full
        self._maps: dict = {}

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def grid(self) -> Grid2:
        if self.ndim != 2:
            raise ValueError("grid is only defined for 2-parameter modules")
        return Grid2(self.shape[0] - 1, self.shape[1] - 1)

    def points(self) -> list[Point]:
        return [tuple(int(c) for c in pt) for pt in np.ndindex(*self.shape)]

    def dim(self, pt: Point) -> int:
        return int(self.dims[tuple(pt)])

    def __contains__(self, pt) -> bool:
        return len(pt) == self.ndim and all(0 <= c < s for c, s in zip(pt, self.shape))

    @property
    def harrows(self) -> dict:
        return {pt: A for (pt, k), A in self.arrows.items() if k == 0}

    @property
    def varrows(self) -> dict:
        return {pt: A for (pt, k), A in self.arrows.items() if k == 1}

    def map(self, a: Point, b: Point) -> np.ndarray:
        """Matrix of M(a <= b)."""
        a, b = tuple(a), tuple(b)
        if not leq(a, b):
            raise ValueError(f"{a} is not <= {b}")
        key = (a, b)
        out = self._maps.get(key)
        if out is not None:
            return out
        if a == b:
            out = linalg.eye(self.dim(a))
        else:
            k = next(k for k in range(self.ndim) if a[k] < b[k])
            mid = _unit(a, k)
            out = linalg.matmul(self.map(mid, b), self.arrows[(a, k)], self.p)
        self._maps[key] = out
        return out

    def check_commutative(self) -> bool:
        for pt in self.points():
            for k, l in itertools.combinations(range(self.ndim), 2):
                qk, ql = _unit(pt, k), _unit(pt, l)
                top = _unit(qk, l)
                if top not in self:
                    continue
                via_k = linalg.matmul(self.arrows[(qk, l)], self.arrows[(pt, k)], self.p)
                via_l = linalg.matmul(self.arrows[(ql, k)], self.arrows[(pt, l)], self.p)
                if not np.array_equal(via_k, via_l):
                    return False
        return True

    def is_zero(self) -> bool:
        return not self.dims.any()

    def sub_box(self, lo: Point, hi: Point) -> "GridModule":
        """The module on the box ``[lo, hi]`` re-indexed to start at the origin."""
        lo, hi = tuple(lo), tuple(hi)
        if not (leq(lo, hi) and lo in self and hi in self):
            raise ValueError(f"bad box {lo}..{hi}")
        shape = tuple(b - a + 1 for a, b in zip(lo, hi))
        sl = tuple(slice(a, b + 1) for a, b in zip(lo, hi))
        arrows = {}
        for (pt, k), A in self.arrows.items():
            q = _unit(pt, k)
            if leq(lo, pt) and leq(q, hi):
                arrows[(tuple(c - a for c, a in zip(pt, lo)), k)] = A
        return GridModule(shape, self.dims[sl].copy(), arrows, self.p)

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "p": self.p,
            "shape": list(self.shape),
            "dims": self.dims.tolist(),
            "arrows": [
                {"source": list(pt), "axis": k, "matrix": A.tolist()}
                for (pt, k), A in sorted(self.arrows.items()) if A.size
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GridModule":
        shape = tuple(obj["shape"])
        arrows = {}
        for e in obj["arrows"]:
            arrows[(tuple(e["source"]), int(e["axis"]))] = np.array(e["matrix"], dtype=np.int64)
        return cls(shape, np.array(obj["dims"], dtype=np.int64), arrows, int(obj.get("p", 2)))


@dataclass(frozen=True)
class RestrictedModule:
    """View of a module on a subset of its points: zero outside the subset."""

    module: GridModule
    support: frozenset

    @property
    def p(self) -> int:
        return self.module.p

    def dim(self, pt: Point) -> int:
        return self.module.dim(pt) if pt in self.support else 0

    def map(self, a: Point, b: Point) -> np.ndarray:
        if a in self.support and b in self.support:
            return self.module.map(a, b)
        if not leq(a, b):
            raise ValueError(f"{a} is not <= {b}")
        return linalg.zeros(self.dim(b), self.dim(a))


def restrict(M, I) -> RestrictedModule:
    """Restriction of a module (or of a restriction) to an interval or point set."""
    pts = I.points if isinstance(I, Interval2) else frozenset(tuple(p) for p in I)
    if isinstance(M, RestrictedModule):
        return RestrictedModule(M.module, M.support & pts)
    for q in pts:
        if q not in M:
            raise ValueError(f"{q} is outside the module's grid")
    return RestrictedModule(M, frozenset(pts))


# ---------------------------------------------------------------------------
# limits and colimits


@dataclass
class ConeSpace:
    """A limit (``kind='limit'``, maps are projections ``pi_x``) or a colimit
    (``kind='colimit'``, maps are injections ``i_x``)."""

    kind: str
    dimension: int
    maps: dict


def _layout(M, points):
    offs, total = {}, 0
    for x in points:
        offs[x] = total
        total += M.dim(x)
    return offs, total


def _limit(M, points, relations) -> ConeSpace:
    points = list(dict.fromkeys(points))
    offs, total = _layout(M, points)
    blocks = []
    for a, b in relations:
        B = linalg.zeros(M.dim(b), total)
        B[:, offs[a]:offs[a] + M.dim(a)] = M.map(a, b)
        B[:, offs[b]:offs[b] + M.dim(b)] -= linalg.eye(M.dim(b))
        blocks.append(B)
    C = np.concatenate(blocks, axis=0) if blocks else linalg.zeros(0, total)
    N = linalg.nullspace(C % M.p, M.p)
    maps = {x: N[offs[x]:offs[x] + M.dim(x)] for x in points}
    return ConeSpace("limit", N.shape[1], maps)


def _colimit(M, points, relations) -> ConeSpace:
    points = list(dict.fromkeys(points))
    offs, total = _layout(M, points)
    cols = []
    for a, b in relations:
        B = linalg.zeros(total, M.dim(a))
        B[offs[a]:offs[a] + M.dim(a)] = linalg.eye(M.dim(a))
        B[offs[b]:offs[b] + M.dim(b)] -= M.map(a, b)
        cols.append(B)
    R = np.concatenate(cols, axis=1) if cols else linalg.zeros(total, 0)
    Q = linalg.cokernel(R % M.p, M.p)
    maps = {x: Q[:, offs[x]:offs[x] + M.dim(x)] for x in points}
    return ConeSpace("colimit", Q.shape[0], maps)


def _unit_relations(points: Iterable[Point]) -> list[tuple[Point, Point]]:
    S = set(points)
    out = []
    for a in sorted(S):
        for k in range(len(a)):
            b = _unit(a, k)
            if b in S:
                out.append((a, b))
    return out


def limit_over(M, Z: Zigzag) -> ConeSpace:
    return _limit(M, Z.points, Z.relations())


def colimit_over(M, Z: Zigzag) -> ConeSpace:
    return _colimit(M, Z.points, Z.relations())


def limit_brute(M, points: Iterable[Point]) -> ConeSpace:
    """Limit over every point of a convex set, with all unit-edge relations."""
    pts = sorted(set(points))
    return _limit(M, pts, _unit_relations(pts))


def colimit_brute(M, points: Iterable[Point]) -> ConeSpace:
    pts = sorted(set(points))
    return _colimit(M, pts, _unit_relations(pts))


# ---------------------------------------------------------------------------
# generalized rank


def _extremes(points):
    pts = sorted(points)
    mins = [p for p in pts if not any(q != p and leq(q, p) for q in pts)]
    maxs = [p for p in pts if not any(q != p and leq(p, q) for q in pts)]
    return mins, maxs


def _psi_rank(M, L, C, a, b) -> int:
    psi = linalg.matmul(linalg.matmul(C.maps[b], M.map(a, b), M.p), L.maps[a], M.p)
    return linalg.rank(psi, M.p)


def _rank_from_cones(M, L, C, mins, maxs, check) -> int:
    a = mins[0]
    b = next(q for q in maxs if leq(a, q))
    r = _psi_rank(M, L, C, a, b)
    if check:
        for x in mins:
            for y in maxs:
                if leq(x, y) and _psi_rank(M, L, C, x, y) != r:
                    raise AssertionError(f"rank depends on the anchor pair ({x}, {y})")
    return r


def generalized_rank(M: GridModule, I, check: bool = False, method: str = "fence") -> int:
    """Rank of the limit-to-colimit map of ``M`` restricted to ``I``.

    ``I`` is an :class:`Interval2` (2-d modules) or any interval given as a
    point collection, in which case the brute-force cones are used.
    ``check=True`` recomputes the rank at every comparable anchor pair.
    """
    if isinstance(I, Interval2):
        pts = I.points
    else:
        pts = frozenset(tuple(p) for p in I)
    if any(M.dim(x) == 0 for x in pts):
        return 0
    if len(pts) == 1:
        return M.dim(next(iter(pts)))
    R = restrict(M, pts)
    if isinstance(I, Interval2) and method == "fence":
        L = limit_over(R, min_zz(I))
        C = colimit_over(R, max_zz(I))
        mins, maxs = minimal_points(I), maximal_points(I)
    else:
        L = limit_brute(R, pts)
        C = colimit_brute(R, pts)
        mins, maxs = _extremes(pts)
    return _rank_from_cones(M, L, C, mins, maxs, check)


class _ConeCache:
    """Shares fence limits/colimits between intervals with equal fences."""

    def __init__(self, M):
        self.M = M
        self.lim: dict = {}
        self.colim: dict = {}

    def rank(self, I: Interval2) -> int:
        M = self.M
        if any(M.dim(x) == 0 for x in I.iter_points()):
            return 0
        if I.size == 1:
            return M.dim((I.rows[0][0], I.ymin))
        Zl, Zc = min_zz(I), max_zz(I)
        L = self.lim.get(Zl.points)
        if L is None:
            L = self.lim[Zl.points] = limit_over(M, Zl)
        C = self.colim.get(Zc.points)
        if C is None:
            C = self.colim[Zc.points] = colimit_over(M, Zc)
        return _rank_from_cones(M, L, C, minimal_points(I), maximal_points(I), False)


def gri(M: GridModule, threads: int = 1, intervals=None) -> Diagram:
    """Generalized rank invariant over all intervals of a 2-d module's grid.

    The limit over a fence only sees points of the fence, which lie in the
    interval, so sharing cones between intervals with the same fences is
    exact.
    """
    grid = M.grid
    Is = enumerate_intervals(grid) if intervals is None else list(intervals)
    if threads <= 1:
        cache = _ConeCache(M)
        values = [cache.rank(I) for I in Is]
    else:
        chunks = [Is[k::threads] for k in range(threads)]

        def work(chunk):
            cache = _ConeCache(M)
            return [cache.rank(I) for I in chunk]

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, chunks))
        values = [0] * len(Is)
        for k, res in enumerate(results):
            values[k::threads] = res
    return Diagram(grid, {I: v for I, v in zip(Is, values) if v})


# ---------------------------------------------------------------------------
# modules from filtrations


def module_from_bifiltration(bf, m: int, p: int = 2) -> GridModule:
    """Degree-``m`` homology of a monotone multi-filtration as a grid module."""
    bf.check_monotone()
    shape = tuple(bf.shape)
    cache: dict = {}
    at: dict = {}
    for pt in np.ndindex(*shape):
        pt = tuple(int(c) for c in pt)
        key = bf.present_at(pt)
        if key not in cache:
            K = SimplicialComplex(key, close=False)
            cache[key] = (K, homology_basis(K, m, p))
        at[pt] = key
    dims = np.zeros(shape, dtype=np.int64)
    for pt, key in at.items():
        dims[pt] = cache[key][1].dimension
    induced: dict = {}
    arrows = {}
    for pt, key in at.items():
        for k in range(len(shape)):
            q = _unit(pt, k)
            if q[k] >= shape[k]:
                continue
            pair = (key, at[q])
            A = induced.get(pair)
            if A is None:
                (K1, B1), (K2, B2) = cache[key], cache[at[q]]
                A = induced[pair] = induced_map(K1, K2, m, p, B1, B2)
            arrows[(pt, k)] = A
    return GridModule(shape, dims, arrows, p)
