"""Radius-1 binary cellular automata driven by an 8-entry rule table."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

NEIGHBOURHOODS = tuple(product((0, 1), repeat=3))  # 000, 001, ..., 111
BOUNDARIES = ("periodic", "zero")


@dataclass(frozen=True)
class RuleTable:
    table: dict  # (left, self, right) -> bit

    def __post_init__(self):
        missing = [eta for eta in NEIGHBOURHOODS if eta not in self.table]
        if missing:
            raise ValueError(f"rule table lacks neighbourhoods {missing}")
        if any(v not in (0, 1) for v in self.table.values()):
            raise ValueError("output bits must be 0 or 1")

    @classmethod
    def from_bits(cls, bits: str) -> "RuleTable":
        """Eight output bits listed for neighbourhoods 000..111."""
        bits = bits.strip()
        if len(bits) != 8 or set(bits) - {"0", "1"}:
            raise ValueError(f"expected 8 binary digits, got {bits!r}")
        return cls({eta: int(b) for eta, b in zip(NEIGHBOURHOODS, bits)})

    def bits(self) -> str:
        return "".join(str(self.table[eta]) for eta in NEIGHBOURHOODS)

    def __call__(self, left: int, centre: int, right: int) -> int:
        return self.table[(left, centre, right)]


MAJORITY = RuleTable.from_bits("00010111")


@dataclass(frozen=True)
class CAState:
    cells: tuple
    boundary: str = "periodic"

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        if not cells:
            raise ValueError("a CA state needs at least one cell")
        if set(cells) - {0, 1}:
            raise ValueError("cells must be 0 or 1")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def parse(cls, text: str, boundary: str = "periodic") -> "CAState":
        return cls(tuple(int(c) for c in text.strip()), boundary)

    def __str__(self):
        return "".join(map(str, self.cells))

    def neighbourhood(self, i: int) -> tuple:
        n = len(self.cells)
        if self.boundary == "periodic":
            return self.cells[(i - 1) % n], self.cells[i], self.cells[(i + 1) % n]
        left = self.cells[i - 1] if i > 0 else 0
        right = self.cells[i + 1] if i < n - 1 else 0
        return left, self.cells[i], right


def ca_step(rt: RuleTable, st: CAState) -> CAState:
    """Update every cell at once from the previous state."""
    return CAState(tuple(rt(*st.neighbourhood(i)) for i in range(len(st.cells))), st.boundary)


def ca_run(rt: RuleTable, st: CAState, steps: int) -> list:
    states = [st]
    for _ in range(steps):
        states.append(ca_step(rt, states[-1]))
    return states
