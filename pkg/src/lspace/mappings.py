"""Mirror and negative mappings and the group they generate.

``M`` reverses a string, ``N`` swaps symbols pointwise under a self-inverse
exchange (``0 <-> 1`` by default).  Both are involutions and they commute,
so every composite collapses to one of ``ID, M, N, MN``.
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping as Pairs, Sequence

from .errors import PartialInvolution


class MappingExpr(Enum):
    # value = (mirror bit, negative bit)
    ID = (False, False)
    M = (True, False)
    N = (False, True)
    MN = (True, True)

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "MappingExpr":
        """Accept ``ID``, ``M``, ``N``, ``MN``, ``NM`` or longer words like ``MNM``."""
        result = cls.ID
        word = text.strip().upper()
        if word in ("", "ID", "C", "COPY"):
            return result
        for ch in word:
            if ch == "M":
                result = compose(result, cls.M)
            elif ch == "N":
                result = compose(result, cls.N)
            else:
                raise ValueError(f"unknown mapping {text!r}")
        return result


ID, M, N, MN = MappingExpr.ID, MappingExpr.M, MappingExpr.N, MappingExpr.MN

# Search order when several mappings explain the same string.
PREFERENCE = (ID, N, M, MN)


class Involution:
    """A total, self-inverse symbol exchange."""

    def __init__(self, pairs: Pairs[str, str]):
        table = {}
        for a, b in pairs.items():
            for x, y in ((a, b), (b, a)):
                if table.setdefault(x, y) != y:
                    raise ValueError(f"{x!r} is mapped to both {table[x]!r} and {y!r}")
        self.table = table

    @classmethod
    def parse(cls, text: str) -> "Involution":
        """``"a=b,c=c"`` exchanges a with b and fixes c."""
        pairs = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            a, sep, b = item.partition("=")
            if not sep or not a.strip() or not b.strip():
                raise ValueError(f"bad involution entry {item!r}")
            pairs[a.strip()] = b.strip()
        return cls(pairs)

    def __call__(self, sym: str) -> str:
        try:
            return self.table[sym]
        except KeyError:
            raise PartialInvolution(f"involution does not map {sym!r}") from None

    def __eq__(self, other):
        return isinstance(other, Involution) and self.table == other.table

    def __repr__(self):
        return f"Involution({self.table!r})"


BINARY = Involution({"0": "1"})


def mirror(s: Sequence[str]) -> tuple:
    return tuple(s)[::-1]


def negative(s: Sequence[str], inv: Involution | None = None) -> tuple:
    inv = inv or BINARY
    try:
        return tuple(map(inv.table.__getitem__, s))
    except KeyError as exc:
        raise PartialInvolution(f"involution does not map {exc.args[0]!r}") from None


def compose(e1: MappingExpr, e2: MappingExpr) -> MappingExpr:
    """Group product; the group is abelian so order is irrelevant."""
    return MappingExpr((e1.value[0] ^ e2.value[0], e1.value[1] ^ e2.value[1]))


def apply_expr(e: MappingExpr, s: Sequence[str], inv: Involution | None = None) -> tuple:
    mirrored, negated = e.value
    out = tuple(s)
    if negated:
        out = negative(out, inv)
    if mirrored:
        out = mirror(out)
    return out


def images(s: Sequence[str], inv: Involution | None = None) -> dict:
    """All four images of ``s`` keyed by mapping, in :data:`PREFERENCE` order."""
    return {e: apply_expr(e, s, inv) for e in PREFERENCE}
