"""Sparse integer functions on the intervals of a 2-d grid (ranks or diagrams)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .grid import Grid2, Interval2

FORMAT = 1


@dataclass
class Diagram:
    grid: Grid2
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for I, v in self.entries.items():
            v = int(v)
            if not v:
                continue
            if not I.within(self.grid):
                raise ValueError(f"{I} is not an interval of {self.grid}")
            clean[I] = v
        self.entries = clean

    def __getitem__(self, I: Interval2) -> int:
        return self.entries.get(I, 0)

    def __setitem__(self, I: Interval2, v: int):
        if v:
            self.entries[I] = int(v)
        else:
            self.entries.pop(I, None)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.grid == other.grid
                and self.entries == other.entries)

    @property
    def support(self) -> list[Interval2]:
        return sorted(self.entries, key=Interval2.sort_key)

    def support_size(self) -> int:
        return len(self.entries)

    def items(self):
        for I in self.support:
            yield I, self.entries[I]

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "grid": self.grid.to_json(),
            "entries": [{"interval": I.to_json(), "value": v} for I, v in self.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Diagram":
        grid = Grid2.from_json(obj["grid"])
        entries = {Interval2.from_json(e["interval"]): int(e["value"]) for e in obj["entries"]}
        return cls(grid, entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["interval", "size", "value"])
        for I, v in self.items():
            w.writerow([I.encode(), I.size, v])
        return buf.getvalue()
