"""Finite multi-parameter simplicial filtrations encoded by birth antichains."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .diagram import FORMAT
from .grid import Grid2, leq
from .homology import SimplicialComplex

Point = tuple[int, ...]


def minimal_antichain(points: Iterable[Point]) -> tuple[Point, ...]:
    """Minimal elements of a finite point set, sorted."""
    pts = sorted(set(tuple(p) for p in points))
    return tuple(p for p in pts if not any(q != p and leq(q, p) for q in pts))


@dataclass
class Bifiltration:
    """A simplicial complex whose simplices appear at upsets of a finite grid.

    ``births[s]`` is the antichain of minimal grid points where simplex
    ``s`` is present. ``shape`` counts values per axis; ``axis_values``
    optionally records what each grid index stands for (thresholds, scales,
    degrees).
    """

    complex: SimplicialComplex
    births: dict
    shape: tuple[int, ...]
    axis_values: tuple | None = None
    axis_names: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.shape = tuple(int(s) for s in self.shape)
        self.births = {tuple(sorted(s)): minimal_antichain(b) for s, b in self.births.items()}

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def grid(self) -> Grid2:
        if self.ndim != 2:
            raise ValueError("grid is only defined for 2-parameter filtrations")
        return Grid2(self.shape[0] - 1, self.shape[1] - 1)

    def present_at(self, pt: Point) -> frozenset:
        return frozenset(s for s, b in self.births.items() if any(leq(q, pt) for q in b))

    def complex_at(self, pt: Point) -> SimplicialComplex:
        return SimplicialComplex(self.present_at(pt), close=False)

    def check_monotone(self) -> None:
        """Raise ``ValueError`` unless every face is born no later than its cofaces."""
        if set(self.births) != set(self.complex):
            raise ValueError("births must be given for exactly the simplices of the complex")
        for s, b in self.births.items():
            if not b:
                raise ValueError(f"simplex {s} is never born")
            for q in b:
                if len(q) != self.ndim or not all(0 <= c < n for c, n in zip(q, self.shape)):
                    raise ValueError(f"birth {q} of {s} lies outside the grid")
            for k in range(len(s)):
                f = s[:k] + s[k + 1:]
                if not f:
                    continue
                fb = self.births[f]
                for q in b:
                    if not any(leq(r, q) for r in fb):
                        raise ValueError(f"face {f} of {s} is absent at {q}")

    def is_monotone(self) -> bool:
        try:
            self.check_monotone()
        except ValueError:
            return False
        return True

    def restrict_to_box(self, lo: Point, hi: Point) -> "Bifiltration":
        """The filtration on the grid box ``[lo, hi]``, re-indexed from the origin.

        A simplex is present at a box point iff it is present at the
        corresponding ambient point; simplices absent on the whole box are
        dropped.
        """
        lo, hi = tuple(lo), tuple(hi)
        shape = tuple(b - a + 1 for a, b in zip(lo, hi))
        births = {}
        for s, b in self.births.items():
            local = [tuple(max(c - a, 0) for c, a in zip(q, lo)) for q in b if leq(q, hi)]
            if local:
                births[s] = local
        K = SimplicialComplex(births, close=False)
        values = None
        if self.axis_values is not None:
            values = tuple(tuple(v[a:b + 1]) for v, a, b in zip(self.axis_values, lo, hi))
        meta = dict(self.meta, box=[list(lo), list(hi)])
        return Bifiltration(K, births, shape, values, self.axis_names, meta)

    def num_simplices(self) -> int:
        return len(self.complex)

    def to_json(self) -> dict:
        out = {
            "format": FORMAT,
            "shape": list(self.shape),
            "simplices": [
                {"vertices": list(s), "births": [list(q) for q in self.births[s]]}
                for s in self.complex
            ],
        }
        if self.axis_values is not None:
            out["axis_values"] = [[_num_to_json(v) for v in vals] for vals in self.axis_values]
        if self.axis_names is not None:
            out["axis_names"] = list(self.axis_names)
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Bifiltration":
        births = {tuple(e["vertices"]): [tuple(q) for q in e["births"]] for e in obj["simplices"]}
        K = SimplicialComplex(births, close=False)
        values = None
        if "axis_values" in obj:
            values = tuple(tuple(_num_from_json(v) for v in vals) for vals in obj["axis_values"])
        names = tuple(obj["axis_names"]) if "axis_names" in obj else None
        return cls(K, births, tuple(obj["shape"]), values, names, obj.get("meta", {}))


def _num_to_json(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _num_from_json(v):
    return Fraction(v) if isinstance(v, str) else v


def births_from_presence(shape: tuple[int, ...], simplices, present) -> dict:
    """Birth antichains from a presence predicate ``present(simplex, point)``.

    The predicate must be monotone in the point; births are its minimal
    true points.
    """
    out = {}
    pts = [tuple(int(c) for c in q) for q in np.ndindex(*shape)]
    for s in simplices:
        b = minimal_antichain(q for q in pts if present(s, q))
        if b:
            out[tuple(s)] = b
    return out
