"""Generators for the blowup filtrations and the exact point clouds.

Contents:

* ``filtration_F(n)``: the complete graph on ``n+1`` vertices filtered over
  ``[n]^2``. Its degree-0 homology is zero below the antidiagonal, ``F^n``
  on it, ``F^{n+1}`` above it and ``F`` at the top corner.
* ``filtration_Fprime(n, m)``: the higher-degree variant whose degree-``m``
  homology is isomorphic to the above.
* ``pullback_filtration``: composition with the projection ``[n]^d -> [n]^2``.
* Two point clouds in ``Q^3`` with the sup metric whose sublevel-Rips and
  degree-Rips bifiltrations contain a copy of the same module.
* Rips and sup-metric Čech complexes and the sublevel/degree bifiltration
  builders, all over exact rationals.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bifiltration import Bifiltration, births_from_presence, minimal_antichain
from .grid import Interval2, interval_from_points
from .homology import SimplicialComplex

Q = Fraction


# ---------------------------------------------------------------------------
# combinatorial filtrations


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")


def filtration_F(n: int) -> Bifiltration:
    """Vertices ``z_0..z_n`` (ids ``0..n``) and all edges, filtered over ``[n]^2``.

    Vertex ``z_i`` is absent below the antidiagonal and at ``(i, n-i)``;
    every edge appears only at ``(n, n)``.
    """
    _check_n(n)
    births = {}
    for i in range(n + 1):
        births[(i,)] = [(k, n - k) for k in range(n + 1) if k != i]
    for e in itertools.combinations(range(n + 1), 2):
        births[e] = [(n, n)]
    K = SimplicialComplex(births, close=False)
    return Bifiltration(K, births, (n + 1, n + 1), meta={"construction": "F", "n": n})


def fprime_simplices(n: int, m: int) -> dict:
    """Named top simplices of the higher-degree complex.

    Vertex ids: ``x_i -> i`` and ``y_j -> n + 1 + j``. Keys are ``('tau',)``,
    ``('tau', i, j)`` and ``('sigma', i, j)``; each value is the sorted
    vertex tuple in the orientation order of its name.
    """
    x = list(range(n + 1))
    y = [n + 1 + j for j in range(m + 1)]
    out = {("tau",): tuple(y)}
    for i in range(n + 1):
        for j in range(m + 1):
            out[("tau", i, j)] = (x[i],) + tuple(y[:j] + y[j + 1:])
    for i in range(1, n + 1):
        for j in range(m + 1):
            out[("sigma", i, j)] = (x[i - 1], x[i]) + tuple(y[:j] + y[j + 1:])
    return out


def _faces(s):
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


def filtration_Fprime(n: int, m: int) -> Bifiltration:
    """Filtration over ``[n]^2`` whose degree-``m`` homology mimics ``filtration_F``.

    ``L_k`` is the closure of ``tau`` and the ``tau_{kj}``. The complex is
    empty below the antidiagonal, the union of ``L_k`` over ``k != i`` at
    ``(i, n-i)``, the union of all ``L_k`` above, and everything at ``(n, n)``.
    """
    _check_n(n)
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    named = fprime_simplices(n, m)
    L = []
    for k in range(n + 1):
        tops = [named[("tau",)]] + [named[("tau", k, j)] for j in range(m + 1)]
        L.append(frozenset(f for t in tops for f in _faces(t)))
    everything = frozenset(f for t in named.values() for f in _faces(t))
    union_all = frozenset().union(*L)

    def present(s, pt):
        i, j = pt
        if i + j < n:
            return False
        if (i, j) == (n, n):
            return s in everything
        if i + j == n:
            return any(s in L[k] for k in range(n + 1) if k != i)
        return s in union_all

    K = SimplicialComplex(everything, close=False)
    births = births_from_presence((n + 1, n + 1), K, present)
    return Bifiltration(K, births, (n + 1, n + 1), meta={"construction": "Fprime", "n": n, "m": m})


def fprime_cycle(n: int, m: int, i: int, K: SimplicialComplex, p: int = 2) -> dict:
    """The cycle ``tau - sum_j (-1)^j tau_ij`` as ``{simplex index: coefficient}``."""
    named = fprime_simplices(n, m)
    idx = K.index[m]
    c = {idx[named[("tau",)]]: 1}
    for j in range(m + 1):
        c[idx[named[("tau", i, j)]]] = (-((-1) ** j)) % p
    return c


def pullback_filtration(bf: Bifiltration, d: int) -> Bifiltration:
    """Compose a 2-parameter filtration with the projection onto the first two axes.

    The ambient grid becomes ``[n1] x [n2] x [n]^{d-2}`` where ``n`` is the
    second extent; births gain zeros in the new coordinates.
    """
    if bf.ndim != 2:
        raise ValueError("pullback expects a 2-parameter filtration")
    if d < 3:
        raise ValueError(f"d must exceed 2, got {d}")
    extra = (bf.shape[1],) * (d - 2)
    births = {s: [q + (0,) * (d - 2) for q in b] for s, b in bf.births.items()}
    meta = dict(bf.meta, pullback_d=d)
    return Bifiltration(bf.complex, births, bf.shape + extra, meta=meta)


def product_interval(I: Interval2, extra: Sequence[int]) -> frozenset:
    """Points of ``I x [0, e_1] x ... x [0, e_k]``."""
    ranges = [range(e + 1) for e in extra]
    return frozenset(p + t for p in I.iter_points() for t in itertools.product(*ranges))


# ---------------------------------------------------------------------------
# the interval family shared by all blowup constructions


def blowup_U(n: int, extent: int | None = None) -> Interval2:
    """``{(i, j) : i + j >= n}`` inside ``[extent]^2`` (``extent`` defaults to ``n``)."""
    e = n if extent is None else extent
    return interval_from_points((i, j) for i in range(e + 1) for j in range(e + 1) if i + j >= n)


def blowup_D(n: int) -> Interval2:
    """``{(i, j) : n <= i + j <= n + 1, i, j <= n}``, the lower zigzag of ``U``."""
    return interval_from_points((i, j) for i in range(n + 1) for j in range(n + 1)
                                if n <= i + j <= n + 1)


def blowup_removed_point(i: int, n: int, construction: str = "F") -> tuple[int, int]:
    """The antidiagonal point deleted from ``U`` to form ``U_i``."""
    if construction == "degree":
        return (n - i, i)
    return (i, n - i)


def blowup_U_S(S, n: int, construction: str = "F") -> Interval2:
    """``U`` minus the antidiagonal points indexed by ``S``."""
    extent = n + 1 if construction == "degree" else n
    U = blowup_U(n, extent)
    drop = {blowup_removed_point(i, n, construction) for i in S}
    return interval_from_points(U.points - drop)


def blowup_dims(n: int, construction: str = "F") -> np.ndarray:
    """Expected pointwise dimensions of the blowup module."""
    if construction == "degree":
        N = n + 2
        out = np.zeros((N, N), dtype=np.int64)
        for i in range(N):
            for j in range(N):
                if i + j < n:
                    continue
                if j == n + 1:
                    out[i, j] = 1
                elif i + j == n:
                    out[i, j] = n
                else:
                    out[i, j] = n + 1
        return out
    out = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j < n:
                continue
            out[i, j] = n if i + j == n else n + 1
    out[n, n] = 1
    return out


# ---------------------------------------------------------------------------
# exact point clouds


@dataclass
class RationalPointCloud:
    points: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.points = [tuple(Fraction(c) for c in p) for p in self.points]

    def __len__(self):
        return len(self.points)

    def distance(self, i: int, j: int) -> Fraction:
        return sup_distance(self.points[i], self.points[j])

    def distance_matrix(self) -> list[list[Fraction]]:
        n = len(self.points)
        D = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                D[i][j] = D[j][i] = self.distance(i, j)
        return D

    def to_csv(self, gamma=None) -> str:
        dim = len(self.points[0]) if self.points else 3
        names = "xyzw"[:dim] if dim <= 4 else [f"c{k}" for k in range(dim)]
        head = [f"{a}_{b}" for a in names for b in ("num", "den")]
        if gamma is not None:
            head += ["gamma_num", "gamma_den"]
        lines = [",".join(head)]
        for k, p in enumerate(self.points):
            row = [str(v) for c in p for v in (c.numerator, c.denominator)]
            if gamma is not None:
                g = Fraction(gamma[k])
                row += [str(g.numerator), str(g.denominator)]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str):
        rows = [r for r in text.strip().splitlines() if r.strip()]
        head = rows[0].split(",")
        has_gamma = head[-2:] == ["gamma_num", "gamma_den"]
        pts, gam = [], []
        for r in rows[1:]:
            vals = [int(v) for v in r.split(",")]
            if has_gamma:
                gam.append(Fraction(vals[-2], vals[-1]))
                vals = vals[:-2]
            pts.append(tuple(Fraction(vals[k], vals[k + 1]) for k in range(0, len(vals), 2)))
        return cls(pts), (gam if has_gamma else None)


def sup_distance(p, q) -> Fraction:
    return max(abs(a - b) for a, b in zip(p, q))


A_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _b_dirs(eps):
    return ((1, eps), (-eps, 1), (-1, -eps), (eps, -1))


def _ring(radius, dirs, z):
    return [(radius * u, radius * v, z) for u, v in dirs]


def pointcloud_sublevel(n: int):
    """Layered cloud whose sublevel-Rips degree-1 module contains the blowup module.

    Returns ``(cloud, gamma, info)``. Layer ``Y_i`` (``z = 2in``) carries the
    rings ``b_j A`` for ``j != i`` with function value ``j``; layer ``Z_i``
    (``z = (2i+1)n``) carries ``b_0 A`` with value ``n``. Here
    ``eps = 1/n^2`` and ``b_j = n - j eps``.
    """
    _check_n(n)
    eps = Q(1, n * n)
    b = [n - j * eps for j in range(n + 1)]
    pts, gamma, labels = [], [], []
    for i in range(n + 1):
        for j in range(n + 1):
            if j == i:
                continue
            pts += _ring(b[j], A_DIRS, Q(2 * i * n))
            gamma += [Q(j)] * 4
            labels += [("Y", i, j)] * 4
    for i in range(n):
        pts += _ring(b[0], A_DIRS, Q((2 * i + 1) * n))
        gamma += [Q(n)] * 4
        labels += [("Z", i, 0)] * 4
    info = {"eps": eps, "b": b, "expected_size": 4 * n * (n + 2)}
    return RationalPointCloud(pts, labels), gamma, info


def pointcloud_degree(n: int):
    """Layered cloud whose degree-Rips degree-1 module contains the blowup module.

    Layer ``Y_i`` (``z = (n + eps) i``, ``0 <= i <= n``) carries the ring
    ``aA``, the rings ``(a + b_j)A`` for ``j in [n] - {i}``, and the tilted
    ring ``(a + b_{i+1})B``. Here ``eps = 1/n^2``, ``a = n - n eps`` and
    ``b_j = a + j eps``.
    """
    _check_n(n)
    eps = Q(1, n * n)
    a = n - n * eps
    b = [a + j * eps for j in range(n + 2)]
    B = _b_dirs(eps)
    pts, labels = [], []
    for i in range(n + 1):
        z = (n + eps) * i
        pts += _ring(a, A_DIRS, z)
        labels += [("blue", i, None)] * 4
        for j in range(n + 1):
            if j == i:
                continue
            pts += _ring(a + b[j], A_DIRS, z)
            labels += [("red", i, j)] * 4
        pts += _ring(a + b[i + 1], B, z)
        labels += [("green", i, i + 1)] * 4
    info = {"eps": eps, "a": a, "b": b, "stated_size": 4 * (n + 1) ** 2,
            "expected_size": 4 * (n + 1) * (n + 2)}
    return RationalPointCloud(pts, labels), info


def distance_values(X: RationalPointCloud) -> list[Fraction]:
    """Sorted distinct pairwise distances, including 0."""
    vals = {Fraction(0)}
    D = X.distance_matrix()
    for i in range(len(X)):
        vals.update(D[i][i + 1:])
    return sorted(vals)


def is_contiguous_run(sorted_values: Sequence, run: Sequence) -> bool:
    """True iff ``run`` (ascending) occurs as consecutive entries of ``sorted_values``."""
    run = list(run)
    if not run:
        return True
    k = bisect.bisect_left(sorted_values, run[0])
    return list(sorted_values[k:k + len(run)]) == run


# ---------------------------------------------------------------------------
# Rips and sup-metric Čech complexes


def _cliques(adj: list[set], maxdim: int, vertices=None):
    """All cliques with at most ``maxdim + 1`` vertices, as sorted tuples."""
    verts = sorted(range(len(adj)) if vertices is None else vertices)
    allowed = set(verts)
    out = []

    def grow(clique, cand):
        out.append(tuple(clique))
        if len(clique) == maxdim + 1:
            return
        for v in sorted(cand):
            if v > clique[-1]:
                grow(clique + [v], cand & adj[v])

    for v in verts:
        grow([v], {w for w in adj[v] if w in allowed and w > v})
    return out


def rips(X: RationalPointCloud, r, maxdim: int = 2, D=None) -> SimplicialComplex:
    """Vietoris-Rips complex: simplices of diameter at most ``r``."""
    r = Fraction(r)
    D = X.distance_matrix() if D is None else D
    n = len(X)
    adj = [{j for j in range(n) if j != i and D[i][j] <= r} for i in range(n)]
    return SimplicialComplex(_cliques(adj, maxdim), close=False)


def boxes_intersect(points, r) -> bool:
    """Whether the closed sup-metric balls of radius ``r`` around ``points`` meet."""
    for k in range(len(points[0])):
        if max(p[k] - r for p in points) > min(p[k] + r for p in points):
            return False
    return True


def cech_radius(points) -> Fraction:
    """Smallest ``r`` at which the sup-metric balls around ``points`` meet."""
    return max((max(p[k] for p in points) - min(p[k] for p in points)) / 2
               for k in range(len(points[0])))


def _integer_scaled(X: RationalPointCloud, r: Fraction):
    """Coordinates and radius multiplied by a common denominator."""
    L = r.denominator
    for p in X.points:
        for c in p:
            L = L * c.denominator // math.gcd(L, c.denominator)
    pts = [tuple(int(c * L) for c in p) for p in X.points]
    return pts, int(r * L)


def cech_sup(X: RationalPointCloud, r, maxdim: int = 2) -> SimplicialComplex:
    """Čech complex for the sup metric, by testing box intersection of every subset.

    Coordinates are scaled to integers first; box intersection is invariant
    under that scaling.
    """
    r = Fraction(r)
    pts, R = _integer_scaled(X, r)
    n = len(pts)
    out = []
    level = [(v,) for v in range(n)]
    for _ in range(maxdim + 1):
        level = [s for s in level if boxes_intersect([pts[v] for v in s], R)]
        out += level
        level = [s + (w,) for s in level for w in range(s[-1] + 1, n)]
    return SimplicialComplex(out, close=False)


# ---------------------------------------------------------------------------
# bifiltration builders


def _scale_axis(T, flavor):
    if flavor == "rips":
        return list(T)
    if flavor == "cech":
        return [t / 2 for t in T]
    raise ValueError(f"flavor must be 'rips' or 'cech', got {flavor!r}")


def _birth_scale(X, s, D, flavor):
    if len(s) == 1:
        return Fraction(0)
    if flavor == "rips":
        return max(D[u][v] for u, v in itertools.combinations(s, 2))
    return cech_radius([X.points[v] for v in s])


def _candidate_simplices(X, D, limit, maxdim, flavor, vertices=None):
    """Simplices whose birth scale is at most ``limit``."""
    n = len(X)
    reach = limit if flavor == "rips" else 2 * limit
    adj = [{j for j in range(n) if j != i and D[i][j] <= reach} for i in range(n)]
    out = []
    for s in _cliques(adj, maxdim, vertices):
        if _birth_scale(X, s, D, flavor) <= limit:
            out.append(s)
    return out


def sublevel_bifiltration(X: RationalPointCloud, gamma, flavor: str = "rips", m: int = 1,
                          maxdim: int | None = None, box=None) -> Bifiltration:
    """Sublevel bifiltration over ``Γ_X x T`` (threshold axis first).

    ``T`` lists distances for Rips and half-distances for the sup-metric
    Čech complex, so a simplex of diameter ``t`` enters both at grid index
    of ``t``. ``box = ((i0, j0), (i1, j1))`` in full-grid indices restricts
    the result to that subgrid (and skips simplices that cannot appear in it).
    """
    maxdim = m + 1 if maxdim is None else maxdim
    G = sorted(set(Fraction(g) for g in gamma))
    T = _scale_axis(distance_values(X), flavor)
    D = X.distance_matrix()
    hi = (len(G) - 1, len(T) - 1) if box is None else tuple(box[1])
    amax, rmax = G[hi[0]], T[hi[1]]
    verts = [v for v in range(len(X)) if Fraction(gamma[v]) <= amax]
    births = {}
    for s in _candidate_simplices(X, D, rmax, maxdim, flavor, verts):
        g = max(Fraction(gamma[v]) for v in s)
        births[s] = [(G.index(g), T.index(_birth_scale(X, s, D, flavor)))]
    K = SimplicialComplex(births, close=False)
    names = ("threshold", "scale")
    bf = Bifiltration(K, births, (len(G), len(T)), (tuple(G), tuple(T)), names,
                      {"builder": "sublevel", "flavor": flavor})
    if box is not None:
        bf = bf.restrict_to_box(box[0], box[1])
    return bf


def degree_bifiltration(X: RationalPointCloud, flavor: str = "rips", m: int = 1,
                        maxdim: int | None = None, box=None) -> Bifiltration:
    """Degree bifiltration over ``J_X x T`` (degree axis first).

    Grid index ``k`` on the degree axis stands for degree value
    ``|X| - 1 - k``, so the reversed order of degrees becomes increasing
    indices. At ``(k, t)`` the complex is the maximal subcomplex of the
    scale-``t`` complex on vertices whose 1-skeleton degree is at least
    ``value(k) - 1``.
    """
    maxdim = m + 1 if maxdim is None else maxdim
    N = len(X)
    T = _scale_axis(distance_values(X), flavor)
    D = X.distance_matrix()
    degrees = [N - 1 - k for k in range(N - 1)]  # J_X = {N-1 < ... < 1} in Z^op
    lo = (0, 0) if box is None else tuple(box[0])
    hi = (len(degrees) - 1, len(T) - 1) if box is None else tuple(box[1])
    rmax = T[hi[1]]
    # scale at which vertex v reaches degree t: its t-th smallest edge scale
    edge_scales = []
    for v in range(N):
        row = sorted(_birth_scale(X, (min(v, w), max(v, w)), D, flavor)
                     for w in range(N) if w != v)
        edge_scales.append(row)

    def reach(v, t):
        if t <= 0:
            return Fraction(0)
        if t > len(edge_scales[v]):
            return None
        return edge_scales[v][t - 1]

    births = {}
    for s in _candidate_simplices(X, D, rmax, maxdim, flavor):
        base = _birth_scale(X, s, D, flavor)
        pts = []
        for k in range(lo[0], hi[0] + 1):
            need = [reach(v, degrees[k] - 1) for v in s]
            if any(x is None for x in need):
                continue
            r = max([base] + need)
            j = bisect.bisect_left(T, r)
            if j <= hi[1]:
                pts.append((k, j))
        if pts:
            births[s] = minimal_antichain(pts)
    K = SimplicialComplex(births, close=False)
    names = ("degree", "scale")
    bf = Bifiltration(K, births, (len(degrees), len(T)), (tuple(degrees), tuple(T)), names,
                      {"builder": "degree", "flavor": flavor})
    if box is not None:
        bf = bf.restrict_to_box(box[0], box[1])
    return bf


# ---------------------------------------------------------------------------
# subgrids carrying the blowup module


def sublevel_blowup_box(n: int, flavor: str = "rips"):
    """Box ``Γ x T'_n`` (full-grid indices) for the sublevel cloud, plus its scale values."""
    X, gamma, info = pointcloud_sublevel(n)
    T = _scale_axis(distance_values(X), flavor)
    wanted = _scale_axis(sorted(info["b"]), flavor)
    j0 = T.index(wanted[0])
    return X, gamma, ((0, j0), (n, j0 + n)), wanted


def degree_blowup_box(n: int, flavor: str = "rips"):
    """Box ``J'_n x T'_n`` for the degree cloud; degrees ``n+4 > ... > 3``."""
    X, info = pointcloud_degree(n)
    N = len(X)
    T = _scale_axis(distance_values(X), flavor)
    wanted = _scale_axis(info["b"], flavor)
    j0 = T.index(wanted[0])
    k0 = N - 1 - (n + 4)
    return X, ((k0, j0), (k0 + n + 1, j0 + n + 1)), wanted


def sublevel_blowup_filtration(n: int, flavor: str = "rips", m: int = 1) -> Bifiltration:
    X, gamma, box, _ = sublevel_blowup_box(n, flavor)
    return sublevel_bifiltration(X, gamma, flavor, m, box=box)


def degree_blowup_filtration(n: int, flavor: str = "rips", m: int = 1) -> Bifiltration:
    X, box, _ = degree_blowup_box(n, flavor)
    return degree_bifiltration(X, flavor, m, box=box)
