"""Simplicial homology over F_p and maps induced by subcomplex inclusions.

Chains are sparse: over F_2 a chain is a Python int used as a bitset over
the canonical simplex order, otherwise a ``{index: coefficient}`` dict.
Cycles are reduced against a basis with pairwise distinct lowest entries
(the "low" of a chain is its largest simplex index), so coordinates in
homology come from a single sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import linalg

Simplex = tuple[int, ...]


class SimplicialComplex:
    """Finite abstract simplicial complex with a canonical simplex order.

    Simplices are sorted vertex tuples, ordered by dimension and then
    lexicographically. Faces are added unless ``close=False`` is passed for
    input already known to be closed.
    """

    def __init__(self, simplices: Iterable[Iterable[int]] = (), close: bool = True):
        S = set()
        for s in simplices:
            t = tuple(sorted(set(int(v) for v in s)))
            if not t:
                continue
            S.add(t)
        if close:
            for t in list(S):
                for k in range(1, len(t)):
                    S.update(itertools.combinations(t, k))
        top = max((len(t) for t in S), default=0)
        self.by_dim: list[list[Simplex]] = [[] for _ in range(top)]
        for t in S:
            self.by_dim[len(t) - 1].append(t)
        for lst in self.by_dim:
            lst.sort()
        self.index = [{s: i for i, s in enumerate(lst)} for lst in self.by_dim]
        self._set = frozenset(S)

    @property
    def dim(self) -> int:
        return len(self.by_dim) - 1

    def simplices(self, m: int) -> list[Simplex]:
        if 0 <= m < len(self.by_dim):
            return self.by_dim[m]
        return []

    def count(self, m: int) -> int:
        return len(self.simplices(m))

    def __len__(self):
        return len(self._set)

    def __iter__(self):
        for lst in self.by_dim:
            yield from lst

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self._set

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def issubset(self, other: "SimplicialComplex") -> bool:
        return self._set <= other._set

    @property
    def simplex_set(self) -> frozenset:
        return self._set

    def is_closed(self) -> bool:
        for t in self._set:
            for k in range(len(t)):
                f = t[:k] + t[k + 1:]
                if f and f not in self._set:
                    return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * len(lst) for m, lst in enumerate(self.by_dim))

    def to_json(self) -> dict:
        return {"simplices": [list(s) for s in self]}

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        return cls(obj["simplices"])

    def __repr__(self):
        counts = ", ".join(str(len(lst)) for lst in self.by_dim)
        return f"SimplicialComplex(counts=[{counts}])"


# ---------------------------------------------------------------------------
# sparse chain arithmetic


class _F2:
    zero = 0

    @staticmethod
    def unit(i):
        return 1 << i

    @staticmethod
    def low(v):
        return v.bit_length() - 1

    @staticmethod
    def eliminate(v, w, l):
        return v ^ w, 1

    @staticmethod
    def add(v, w, c):
        return v ^ w if c & 1 else v

    @staticmethod
    def items(v):
        while v:
            b = v & -v
            yield b.bit_length() - 1, 1
            v ^= b

    @staticmethod
    def from_items(items):
        v = 0
        for i, c in items:
            if c & 1:
                v ^= 1 << i
        return v


class _Fp:
    def __init__(self, p):
        self.p = p
        self.zero = None

    def unit(self, i):
        return {i: 1}

    @staticmethod
    def low(v):
        return max(v) if v else -1

    def eliminate(self, v, w, l):
        # v - c w with the entry at l cancelled
        c = v[l] * pow(w[l], -1, self.p) % self.p
        return self.add(v, w, -c), c

    def add(self, v, w, c):
        c %= self.p
        if not c:
            return v
        out = dict(v) if v else {}
        for i, b in w.items():
            x = (out.get(i, 0) + c * b) % self.p
            if x:
                out[i] = x
            else:
                out.pop(i, None)
        return out

    @staticmethod
    def items(v):
        return sorted(v.items()) if v else []

    def from_items(self, items):
        out = {}
        for i, c in items:
            x = (out.get(i, 0) + c) % self.p
            if x:
                out[i] = x
            else:
                out.pop(i, None)
        return out


def _field(p: int):
    if p == 2:
        return _F2
    if not linalg.is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return _Fp(p)


def _boundary_columns(K: SimplicialComplex, m: int, F):
    cols = []
    if m <= 0:
        return [F.zero] * K.count(0) if m == 0 else []
    if not K.count(m):
        return []
    faces = K.index[m - 1]
    for s in K.simplices(m):
        cols.append(F.from_items(
            (faces[s[:k] + s[k + 1:]], (-1) ** k) for k in range(len(s))))
    return cols


def _reduce(cols, F, track=False, skip=frozenset()):
    R = list(cols)
    V = [F.unit(j) for j in range(len(R))] if track else None
    lows: dict[int, int] = {}
    for j in range(len(R)):
        if j in skip:
            R[j] = F.zero
            continue
        r = R[j]
        v = V[j] if track else None
        while r:
            l = F.low(r)
            k = lows.get(l)
            if k is None:
                break
            r, c = F.eliminate(r, R[k], l)
            if track:
                v = F.add(v, V[k], -c)
        R[j] = r
        if track:
            V[j] = v
        if r:
            lows[F.low(r)] = j
    return R, V, lows


def boundary_matrix(K: SimplicialComplex, m: int, p: int = 2) -> np.ndarray:
    """Dense matrix of ∂_m : C_m -> C_{m-1} in canonical simplex order."""
    F = _field(p)
    rows = K.count(m - 1) if m >= 1 else 0
    cols = _boundary_columns(K, m, F)
    D = linalg.zeros(rows, len(cols))
    for j, c in enumerate(cols):
        for i, x in F.items(c):
            D[i, j] = x % p
    return D


@dataclass
class HomologyBasis:
    """Basis of H_m(K; F_p) by cycle representatives, with coordinates."""

    complex: SimplicialComplex
    m: int
    p: int
    representatives: list
    _table: dict

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, chain) -> np.ndarray:
        """Coordinates of the class of a cycle; raises for non-cycles."""
        F = _field(self.p)
        out = np.zeros(self.dimension, dtype=np.int64)
        z = chain
        while z:
            l = F.low(z)
            entry = self._table.get(l)
            if entry is None:
                raise ValueError("chain is not a cycle of this complex")
            w, h = entry
            z, c = F.eliminate(z, w, l)
            if h is not None:
                out[h] = (out[h] + c) % self.p
        return out

    def project(self, cycles: np.ndarray) -> np.ndarray:
        """Apply coordinates to every column of a dense cycle matrix."""
        F = _field(self.p)
        out = linalg.zeros(self.dimension, cycles.shape[1])
        for j in range(cycles.shape[1]):
            col = F.from_items((i, int(x)) for i, x in enumerate(cycles[:, j]) if x)
            out[:, j] = self.coordinates(col)
        return out

    def dense_representatives(self) -> np.ndarray:
        F = _field(self.p)
        out = linalg.zeros(self.complex.count(self.m), self.dimension)
        for h, v in enumerate(self.representatives):
            for i, x in F.items(v):
                out[i, h] = x % self.p
        return out


def homology_basis(K: SimplicialComplex, m: int, p: int = 2) -> HomologyBasis:
    if m < 0:
        raise ValueError("degree must be nonnegative")
    F = _field(p)
    R1, _, lows1 = _reduce(_boundary_columns(K, m + 1, F), F)
    R0, V0, _ = _reduce(_boundary_columns(K, m, F), F, track=True, skip=frozenset(lows1))
    table = {l: (R1[k], None) for l, k in lows1.items()}
    reps = []
    for j in range(len(R0)):
        if not R0[j] and j not in lows1:
            table[j] = (V0[j], len(reps))
            reps.append(V0[j])
    return HomologyBasis(K, m, p, reps, table)


def betti(K: SimplicialComplex, m: int, p: int = 2) -> int:
    return homology_basis(K, m, p).dimension


def induced_map(K1: SimplicialComplex, K2: SimplicialComplex, m: int, p: int = 2,
                basis1: HomologyBasis | None = None,
                basis2: HomologyBasis | None = None) -> np.ndarray:
    """Matrix of H_m(K1) -> H_m(K2) induced by the inclusion K1 ⊆ K2."""
    if not K1.issubset(K2):
        raise ValueError("K1 is not a subcomplex of K2")
    F = _field(p)
    B1 = basis1 if basis1 is not None else homology_basis(K1, m, p)
    B2 = basis2 if basis2 is not None else homology_basis(K2, m, p)
    src, dst = K1.simplices(m), K2.index[m] if m < len(K2.index) else {}
    out = linalg.zeros(B2.dimension, B1.dimension)
    for h, v in enumerate(B1.representatives):
        items = []
        for i, c in F.items(v):
            items.append((dst[src[i]], c))
        out[:, h] = B2.coordinates(F.from_items(items))
    return out
