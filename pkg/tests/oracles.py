"""Independent reference computations used only by the tests.

Each oracle works from a definition rather than from the library's fast
path: subsets of the grid instead of staircases, dense rank-nullity
instead of sparse reduction, a dense zeta-matrix solve instead of the
superset-first recursion, union-find instead of homology.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from gpdgrid import linalg
from gpdgrid.bifiltration import Bifiltration, births_from_presence
from gpdgrid.grid import Grid2, Interval2, interval_from_points, is_interval_set, leq
from gpdgrid.homology import SimplicialComplex, boundary_matrix


def all_interval_sets(grid: Grid2) -> list[frozenset]:
    pts = grid.points()
    out = []
    for k in range(1, len(pts) + 1):
        for S in itertools.combinations(pts, k):
            if is_interval_set(S):
                out.append(frozenset(S))
    return out


def brute_covers(I: Interval2, intervals: list[frozenset]) -> set[frozenset]:
    """Minimal strict supersets of I among all intervals."""
    sup = [J for J in intervals if J > I.points]
    return {J for J in sup if not any(K < J and K > I.points for K in sup)}


def brute_hull(sets: list[frozenset], intervals: list[frozenset]) -> frozenset | None:
    """The unique inclusion-smallest interval containing the union, if any."""
    U = frozenset().union(*sets)
    sup = [J for J in intervals if J >= U]
    minimal = [J for J in sup if not any(K < J for K in sup)]
    return minimal[0] if len(minimal) == 1 else None


def dense_betti(K: SimplicialComplex, m: int, p: int = 2) -> int:
    d_m = boundary_matrix(K, m, p)
    d_up = boundary_matrix(K, m + 1, p)
    nullity = K.count(m) - (linalg.rank(d_m, p) if d_m.size else 0)
    return nullity - (linalg.rank(d_up, p) if d_up.size else 0)


def components(K: SimplicialComplex) -> int:
    parent = {v[0]: v[0] for v in K.simplices(0)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in K.simplices(1):
        parent[find(a)] = find(b)
    return len({find(v) for v in parent})


def zeta_solve(grid: Grid2, intervals: list[Interval2], rk) -> dict:
    """Solve rk(I) = sum_{J ⊇ I} dgm(J) by a dense linear solve."""
    n = len(intervals)
    Z = np.zeros((n, n))
    for a, I in enumerate(intervals):
        for b, J in enumerate(intervals):
            if I.points <= J.points:
                Z[a, b] = 1
    r = np.array([rk[I] for I in intervals], dtype=float)
    x = np.linalg.solve(Z, r)
    out = {}
    for I, v in zip(intervals, x):
        k = int(round(v))
        assert abs(v - k) < 1e-6
        if k:
            out[I] = k
    return out


def random_complex(rng: random.Random, nv: int = 5, p_edge: float = 0.6, p_tri: float = 0.5,
                   maxdim: int = 2) -> SimplicialComplex:
    V = list(range(nv))
    E = [e for e in itertools.combinations(V, 2) if rng.random() < p_edge]
    Es = set(E)
    T = [t for t in itertools.combinations(V, 3)
         if all(f in Es for f in itertools.combinations(t, 2)) and rng.random() < p_tri]
    return SimplicialComplex([(v,) for v in V] + E + (T if maxdim >= 2 else []))


def random_bifiltration(rng: random.Random, shape=(3, 3), nv: int = 5, maxdim: int = 2) -> Bifiltration:
    """Random complex with random birth antichains, closed up to be monotone.

    Each simplex gets one or two random birth points; it is present where one
    of them is below and all its faces are present.
    """
    K = random_complex(rng, nv, maxdim=maxdim)
    raw = {}
    for s in K:
        raw[s] = [tuple(rng.randrange(n) for n in shape) for _ in range(rng.randint(1, 2))]
    memo = {}

    def present(s, q):
        key = (s, q)
        if key not in memo:
            own = any(leq(b, q) for b in raw[s])
            faces = all(present(s[:k] + s[k + 1:], q) for k in range(len(s))) if len(s) > 1 else True
            memo[key] = own and faces
        return memo[key]

    births = births_from_presence(shape, list(K), present)
    Kp = SimplicialComplex(births, close=False)
    return Bifiltration(Kp, births, shape)


def random_interval(rng: random.Random, grid: Grid2) -> Interval2:
    """A random interval grown from a point by random covers."""
    from gpdgrid.grid import cover_points
    I = interval_from_points([(rng.randrange(grid.n1 + 1), rng.randrange(grid.n2 + 1))])
    for _ in range(rng.randrange(grid.n1 * grid.n2 + 2)):
        cov = cover_points(I, grid)
        if not cov:
            break
        I = interval_from_points(I.points | {rng.choice(cov)})
    return I


def random_rational_cloud(rng: random.Random, npts: int, dim: int = 3, den: int = 4):
    from gpdgrid.constructions import RationalPointCloud
    return RationalPointCloud([tuple(Fraction(rng.randrange(-8, 9), rng.randint(1, den))
                                     for _ in range(dim)) for _ in range(npts)])


def random_invertible(rng: random.Random, k: int, p: int) -> np.ndarray:
    while True:
        A = np.array([[rng.randrange(p) for _ in range(k)] for _ in range(k)], dtype=np.int64)
        if linalg.rank(A, p) == k:
            return A.reshape(k, k)


def random_barcode(rng: random.Random, grid: Grid2, max_bars: int = 4):
    from gpdgrid.inversion import Barcode
    return Barcode.from_list(grid, [random_interval(rng, grid)
                                    for _ in range(rng.randint(0, max_bars))])


def scrambled(M, rng: random.Random):
    """The same module after a random change of basis at every point."""
    from gpdgrid.pmodule import GridModule
    p = M.p
    P = {pt: random_invertible(rng, M.dim(pt), p) for pt in M.points()}
    Pinv = {pt: linalg.solve(A, linalg.eye(len(A)), p) for pt, A in P.items()}
    arrows = {}
    for (pt, axis), A in M.arrows.items():
        q = pt[:axis] + (pt[axis] + 1,) + pt[axis + 1:]
        arrows[(pt, axis)] = linalg.matmul(linalg.matmul(P[q], A, p), Pinv[pt], p)
    return GridModule(M.shape, M.dims.copy(), arrows, p)


def random_module(rng: random.Random, grid: Grid2, p: int = 2):
    """Either a scrambled random barcode module or homology of a random bifiltration."""
    from gpdgrid.inversion import barcode_module
    from gpdgrid.pmodule import module_from_bifiltration
    if rng.random() < 0.5:
        return scrambled(barcode_module(random_barcode(rng, grid), p), rng)
    bf = random_bifiltration(rng, grid.shape, nv=rng.randint(3, 6))
    return module_from_bifiltration(bf, rng.randint(0, 1), p)
