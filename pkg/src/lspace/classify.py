"""Symmetric / asymmetric classification, rule formats, and frustration probes."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

from .analysis import is_binary, is_fib_constituent
from .errors import NotBinaryMinimal
from .grammar import LGrammar, render, symbols


@dataclass(frozen=True)
class CountingMode:
    """How stumps and erasing symbols enter the comparison of right-hand sides.

    ``index_counts_stumps``: whether they count toward a rule's index (its
    right-hand-side length).  ``containment_includes_stumps``: whether they
    stay in the strings compared by the strong (containment) condition.
    """

    index_counts_stumps: bool = False
    containment_includes_stumps: bool = True


DEFAULT_MODE = CountingMode()


@dataclass(frozen=True)
class ClassificationReport:
    symmetric: bool
    asymmetry: str  # "none" | "weak" | "strong"
    exhaustive: bool
    mode: CountingMode
    strong_term: str | None = None
    weak_term: str | None = None
    remainder: tuple | None = None
    remainder_is_fib_constituent: bool | None = None
    indices: dict = field(default_factory=dict)

    @property
    def weak(self) -> bool:
        return self.asymmetry in ("weak", "strong")

    @property
    def strong(self) -> bool:
        return self.asymmetry == "strong"

    def to_json(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "asymmetry": self.asymmetry,
            "strong_term": self.strong_term,
            "weak_term": self.weak_term,
            "remainder": None if self.remainder is None else render(self.remainder),
            "remainder_is_fib_constituent": self.remainder_is_fib_constituent,
            "exhaustive": self.exhaustive,
            "indices": dict(self.indices),
            "mode": asdict(self.mode),
        }


def _find(haystack: tuple, needle: tuple) -> int:
    n = len(needle)
    for i in range(len(haystack) - n + 1):
        if haystack[i:i + n] == needle:
            return i
    return -1


def classify(g: LGrammar, mode: CountingMode = DEFAULT_MODE) -> ClassificationReport:
    """Classify a grammar by the lengths and nesting of its right-hand sides.

    Erasing rules never take part in the index comparison.  Under the
    default mode a rule's index ignores stumps and erasing symbols, while
    the containment test compares the full right-hand sides.
    """
    inert = set(g.stumps) | set(g.erasing)
    rules = {lhs: rhs for lhs, rhs in g.productions.items() if rhs}

    def index(rhs):
        if mode.index_counts_stumps:
            return len(rhs)
        return sum(1 for x in rhs if x not in inert)

    def compared(rhs):
        if mode.containment_includes_stumps:
            return rhs
        return tuple(x for x in rhs if x not in inert)

    indices = {lhs: index(rhs) for lhs, rhs in rules.items()}
    values = list(indices.values())
    symmetric = (bool(rules) and len(set(values)) == 1 and values[0] > 0
                 and all(g.productions.get(s) for s in g.alphabet))

    ordered = sorted(rules, key=lambda s: indices[s])
    weak = (len(ordered) >= 2 and indices[ordered[0]] > 0
            and len(set(values)) == len(values))

    strong = False
    remainder = None
    if weak:
        strong = True
        for i, small in enumerate(ordered):
            for large in ordered[i + 1:]:
                a, b = compared(rules[small]), compared(rules[large])
                if len(a) >= len(b) or _find(b, a) < 0:
                    strong = False
        if strong:
            a, b = compared(rules[ordered[0]]), compared(rules[ordered[-1]])
            at = _find(b, a)
            remainder = b[:at] + b[at + len(a):]

    exhaustive = (bool(rules) and len(set(values)) == 1
                  and all(len(set(rhs)) == len(rhs) for rhs in rules.values()))

    fib_remainder = None
    if remainder is not None and remainder and is_binary(remainder):
        fib_remainder = is_fib_constituent(remainder, allow_mappings=False).yes

    asymmetry = "strong" if strong else "weak" if weak else "none"
    return ClassificationReport(
        symmetric=symmetric,
        asymmetry=asymmetry,
        exhaustive=exhaustive,
        mode=mode,
        strong_term=ordered[-1] if weak else None,
        weak_term=ordered[0] if weak else None,
        remainder=remainder,
        remainder_is_fib_constituent=fib_remainder,
        indices=indices,
    )


# -- rule formats ---------------------------------------------------------------

FAMILIES = {
    ("i", "v"): "Fib",
    ("ii", "v"): "XOR",
    ("iii", "v"): "Feigenbaum",
    ("i", "iv"): "trivial-alternation",
    ("ii", "iv"): "fib-mappable",
    ("ii", "vi"): "degenerate",
    ("iii", "iv"): "degenerate",
    ("iii", "vi"): "degenerate",
    ("i", "vi"): "degenerate",
}


@dataclass(frozen=True)
class RuleFormat:
    axiom_rule: str
    nonaxiom_rule: str
    family: str

    def to_json(self) -> dict:
        return asdict(self)


def rule_format(g: LGrammar) -> RuleFormat:
    """Match a two-symbol grammar against the irreducible rule schemas.

    Right-hand sides are compared as multisets of axiom (A) and
    non-axiom (X) occurrences, so ``0 -> 01`` and ``0 -> 10`` both count
    as "axiom -> non-axiom, axiom".
    """
    if len(g.alphabet) != 2 or len(g.axiom) != 1:
        raise NotBinaryMinimal("need a two-symbol alphabet and a one-symbol axiom")
    a = g.axiom[0]
    x = next(s for s in g.alphabet if s != a)
    for s in (a, x):
        rhs = g.productions.get(s)
        if rhs is None or not 1 <= len(rhs) <= 2:
            raise NotBinaryMinimal(f"{s!r} needs a production with 1 or 2 symbols")

    def shape(rhs):
        return "".join(sorted("A" if s == a else "X" for s in rhs))

    axiom_rule = {"X": "i", "AX": "ii", "XX": "iii"}.get(shape(g.productions[a]))
    nonaxiom_rule = {"A": "iv", "AX": "v", "XX": "vi"}.get(shape(g.productions[x]))
    if axiom_rule is None or nonaxiom_rule is None:
        raise NotBinaryMinimal(
            f"rules {render(g.productions[a])!r}/{render(g.productions[x])!r} fit no schema")
    return RuleFormat(axiom_rule, nonaxiom_rule, FAMILIES[(axiom_rule, nonaxiom_rule)])


# -- frustration --------------------------------------------------------------

@dataclass(frozen=True)
class Match:
    rule: int
    lhs: tuple
    start: int

    @property
    def end(self) -> int:
        return self.start + len(self.lhs)

    def overlaps(self, other: "Match") -> bool:
        return self.start < other.end and other.start < self.end

    def label(self) -> str:
        return f"{render(self.lhs)}@{self.start}"


@dataclass(frozen=True)
class TilingConflict:
    sample: tuple
    applicable: bool
    matches: tuple = ()
    conflicts: tuple = ()
    distinct_tilings: int = 0
    tilings_truncated: bool = False

    @property
    def frustrated(self) -> bool:
        return bool(self.conflicts)

    def to_json(self) -> dict:
        return {
            "sample": render(self.sample),
            "applicable": self.applicable,
            "frustrated": self.frustrated,
            "matches": [m.label() for m in self.matches],
            "conflicts": [[a.label(), b.label()] for a, b in self.conflicts],
            "distinct_tilings": self.distinct_tilings,
            "tilings_truncated": self.tilings_truncated,
        }


def detect_frustration(rules: Sequence[tuple], sample, enumeration_bound: int = 10_000) -> TilingConflict:
    """Find overlapping rewrite sites for rules with multi-symbol left-hand sides.

    ``rules`` is a list of ``(lhs, rhs)`` pairs.  A tiling is a maximal set
    of pairwise non-overlapping matches; their number is counted up to
    ``enumeration_bound``.
    """
    sample = symbols(sample)
    parsed = [(symbols(lhs), symbols(rhs)) for lhs, rhs in rules]
    if not any(len(lhs) > 1 for lhs, _ in parsed):
        return TilingConflict(sample, applicable=False)
    matches = []
    for k, (lhs, _) in enumerate(parsed):
        if not lhs:
            continue
        for i in range(len(sample) - len(lhs) + 1):
            if sample[i:i + len(lhs)] == lhs:
                matches.append(Match(k, lhs, i))
    matches.sort(key=lambda m: (m.start, m.rule))
    conflicts = tuple((a, b) for i, a in enumerate(matches)
                      for b in matches[i + 1:] if a.overlaps(b))
    count, truncated = _count_maximal_tilings(matches, enumeration_bound)
    return TilingConflict(sample, True, tuple(matches), conflicts, count, truncated)


def _count_maximal_tilings(matches: list, bound: int) -> tuple:
    # A chosen interval is admissible next iff no free interval fits in the gap before it.
    count = 0
    stack = [0]  # positions from which the remaining tiling continues
    while stack:
        frontier = stack.pop()
        free = [m for m in matches if m.start >= frontier]
        if not free:
            count += 1
            if count >= bound:
                return count, bool(stack)
            continue
        for m in reversed(free):
            if not any(f.end <= m.start for f in free):
                stack.append(m.end)
    return count, False
