"""Counting and combinatorics on derivations.

Everything here is exact: symbol counts are Python ints, ratios and
exponents are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NotBinary, PartialInvolution, TooShort
from .grammar import Derivation, LGrammar, derive, render, symbols
from .mappings import ID, PREFERENCE, Involution, MappingExpr, apply_expr

BINARY_SYMBOLS = frozenset("01")
FIB = LGrammar.from_rules({"0": "1", "1": "01"}, axiom="0")


def is_binary(s: Sequence[str]) -> bool:
    return set(s) <= BINARY_SYMBOLS


def _require_binary(s):
    if not is_binary(s):
        raise NotBinary(f"{render(s)!r} is not over the alphabet {{0, 1}}")


@lru_cache(maxsize=None)
def fib_generation(i: int) -> str:
    """Generation ``i`` (0-based) of the minimal Fib grammar, as text."""
    if i < 0:
        raise IndexOutOfRange(f"generation {i}")
    if i == 0:
        return "".join(FIB.axiom)
    return "".join("".join(FIB.rhs(c)) for c in fib_generation(i - 1))


# -- growth -------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthProfile:
    symbols: tuple
    counts: tuple  # one Counter per generation

    @property
    def totals(self) -> list:
        return [sum(c.values()) for c in self.counts]

    def series(self, sym: str) -> list:
        return [c.get(sym, 0) for c in self.counts]

    def to_json(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "counts": {s: self.series(s) for s in self.symbols},
            "totals": self.totals,
        }


def growth_profile(d: Derivation) -> GrowthProfile:
    return GrowthProfile(d.grammar.alphabet, tuple(Counter(gen) for gen in d.generations))


def parikh_profile(g: LGrammar, n: int) -> GrowthProfile:
    """Same counts as ``growth_profile(derive(g, n))`` without building strings.

    Lets count sequences run far past the point where the strings
    themselves would exceed memory.
    """
    images = {s: Counter(g.rhs(s)) for s in g.alphabet}
    cur = Counter(g.axiom)
    counts = [cur]
    for _ in range(n):
        nxt = Counter()
        for sym, k in cur.items():
            for out, j in images[sym].items():
                nxt[out] += k * j
        cur = +nxt
        counts.append(cur)
    return GrowthProfile(g.alphabet, tuple(counts))


@dataclass(frozen=True)
class FibMatch:
    matches: bool
    burn_in: int | None = None


def matches_fibonacci(seq: Sequence[int]) -> FibMatch:
    """Does ``seq`` obey x[t] = x[t-1] + x[t-2] after a short burn-in?

    The burn-in may be 0, 1 or 2 leading terms, and at least three
    consecutive triples must confirm the recurrence.
    """
    seq = list(seq)
    if len(seq) < 4:
        raise TooShort(f"need at least 4 terms, got {len(seq)}")
    for burn_in in range(3):
        checked = range(burn_in + 2, len(seq))
        if len(checked) < 3:
            break
        if all(seq[t] == seq[t - 1] + seq[t - 2] for t in checked):
            return FibMatch(True, burn_in)
    return FibMatch(False)


def is_fibonacci_number(k: int) -> bool:
    if k < 0:
        return False
    a, b = 0, 1
    while a < k:
        a, b = b, a + b
    return a == k


def all_fibonacci_numbers(seq: Iterable[int]) -> bool:
    """Membership test: every term is some Fibonacci number (0 included)."""
    return all(is_fibonacci_number(k) for k in seq)


# -- legality and constituency -------------------------------------------------

ILLEGAL_NGRAMS = ("00", "111")


@dataclass(frozen=True)
class Legality:
    legal: bool
    violations: tuple = ()


def fib_legal(s: Sequence[str] | str) -> Legality:
    """Scan for the factors ``00`` and ``111`` (every occurrence)."""
    s = symbols(s) if isinstance(s, str) else tuple(s)
    _require_binary(s)
    text = "".join(s)
    found = []
    for gram in ILLEGAL_NGRAMS:
        i = text.find(gram)
        while i != -1:
            found.append((gram, i))
            i = text.find(gram, i + 1)
    found.sort(key=lambda v: (v[1], v[0]))
    return Legality(not found, tuple(found))


@dataclass(frozen=True)
class Constituency:
    yes: bool
    generation: int | None = None
    mapping: MappingExpr | None = None


def is_fib_constituent(s: Sequence[str] | str, allow_mappings: bool = True) -> Constituency:
    """Is ``s`` a whole Fib generation, optionally up to M/N/MN?

    Only generations of the same length are candidates, which is at most
    two of them (g0 and g1 both have length 1).
    """
    s = symbols(s) if isinstance(s, str) else tuple(s)
    _require_binary(s)
    if not s:
        return Constituency(False)
    candidates = []
    i = 0
    while len(fib_generation(i)) <= len(s):
        if len(fib_generation(i)) == len(s):
            candidates.append(i)
        i += 1
    for e in PREFERENCE if allow_mappings else (ID,):
        for i in candidates:
            if apply_expr(e, tuple(fib_generation(i))) == s:
                return Constituency(True, i, e)
    return Constituency(False)


# -- ratios ---------------------------------------------------------------------

@dataclass(frozen=True)
class RatioProfile:
    pair: tuple
    ratios: tuple  # Fraction or None (zero denominator), for t = 1..n

    def to_json(self) -> dict:
        return {"pair": list(self.pair),
                "ratios": [None if r is None else str(r) for r in self.ratios]}


def ratio_profile(g: LGrammar, pair: tuple, n: int) -> RatioProfile:
    a, b = pair
    prof = parikh_profile(g, n)
    ratios = []
    for c in prof.counts[1:]:
        ratios.append(Fraction(c[a], c[b]) if c[b] else None)
    return RatioProfile(tuple(pair), tuple(ratios))


@dataclass(frozen=True)
class RatioComparison:
    equal: bool
    profiles: tuple
    first_difference: int | None = None  # generation index t


def ratio_profiles_equal(g1: LGrammar, g2: LGrammar, pair=("0", "1"), n: int = 6) -> RatioComparison:
    p1, p2 = ratio_profile(g1, pair, n), ratio_profile(g2, pair, n)
    diff = next((t for t, (x, y) in enumerate(zip(p1.ratios, p2.ratios), start=1) if x != y), None)
    return RatioComparison(diff is None, (p1, p2), diff)


# -- self-reference -----------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    target: int
    segments: tuple  # (generation index, MappingExpr)
    kind: str  # "perfect" | "partial"

    def to_json(self) -> dict:
        return {"target": self.target, "kind": self.kind,
                "segments": [[i, str(e)] for i, e in self.segments]}


def decompose_self_referential(d: Derivation, x: int, inv: Involution | None = None) -> Decomposition | None:
    """Cover generation ``x`` exactly by images of earlier generations.

    Prefers an all-ID cover, then the fewest segments, then the
    lexicographically smallest (index, mapping) sequence.
    """
    if x < 2 or x >= len(d.generations):
        raise IndexOutOfRange(f"target generation {x} outside 2..{len(d.generations) - 1}")
    target = d.generations[x]
    rank = {e: r for r, e in enumerate(PREFERENCE)}

    def pieces(mappings):
        out = []
        for i in range(x):
            for e in mappings:
                try:
                    img = apply_expr(e, d.generations[i], inv)
                except PartialInvolution:
                    continue
                if img:
                    out.append(((i, rank[e]), (i, e), img))
        out.sort(key=lambda p: p[0])
        return out

    def cover(cands):
        n = len(target)
        best: list = [None] * (n + 1)
        best[n] = (0, ())
        for pos in range(n - 1, -1, -1):
            for key, seg, img in cands:
                end = pos + len(img)
                if end <= n and best[end] is not None and target[pos:end] == img:
                    option = (best[end][0] + 1, ((key, seg),) + best[end][1])
                    if best[pos] is None or _cover_key(option) < _cover_key(best[pos]):
                        best[pos] = option
        return best[0]

    found = cover(pieces((ID,)))
    kind = "perfect"
    if found is None:
        found = cover(pieces(PREFERENCE))
        kind = "partial"
    if found is None:
        return None
    return Decomposition(x, tuple(seg for _, seg in found[1]), kind)


def _cover_key(option):
    count, segs = option
    return (count, tuple(k for k, _ in segs))


# -- repetitions ----------------------------------------------------------------

@dataclass(frozen=True)
class RepetitionStats:
    max_exponent: Fraction
    witness: tuple | None  # (factor, position, period)

    @property
    def has_cube(self) -> bool:
        return self.max_exponent >= 3

    def to_json(self) -> dict:
        w = None
        if self.witness:
            factor, pos, period = self.witness
            w = {"factor": render(factor), "position": pos, "period": period}
        return {"max_exponent": str(self.max_exponent), "has_cube": self.has_cube, "witness": w}


def repetition_stats(s: Sequence[str] | str, max_period: int | None = None) -> RepetitionStats:
    """Largest exponent |factor|/period over all factors with period <= max_period.

    Exhaustive over every (position, period) pair: for each period p the
    longest run of positions with s[i] == s[i+p] gives the longest factor
    of period p.  Cost is O(|s| * max_period) comparisons, vectorised per
    period.
    """
    s = symbols(s) if isinstance(s, str) else tuple(s)
    n = len(s)
    if max_period is None:
        max_period = n
    if max_period > n:
        raise ValueError(f"max_period {max_period} exceeds length {n}")
    if n == 0:
        return RepetitionStats(Fraction(0), None)
    _, codes = np.unique(np.array(s, dtype=object).astype(str), return_inverse=True)
    best = Fraction(1)
    witness = (s[:1], 0, 1)
    for p in range(1, min(max_period, n - 1) + 1):
        eq = codes[:-p] == codes[p:]
        if not eq.any():
            continue
        edges = np.diff(np.concatenate(([0], eq.astype(np.int8), [0])))
        starts = np.flatnonzero(edges == 1)
        lengths = np.flatnonzero(edges == -1) - starts
        j = int(np.argmax(lengths))
        run = int(lengths[j])
        exponent = Fraction(run + p, p)
        if exponent > best:
            start = int(starts[j])
            best, witness = exponent, (s[start:start + run + p], start, p)
    return RepetitionStats(best, witness)


# -- closure probes -----------------------------------------------------------

@dataclass(frozen=True)
class ClosureResult:
    holds_at_bound: bool
    counterexample: tuple | None
    checked: int

    def to_json(self) -> dict:
        return {"holds_at_bound": self.holds_at_bound, "checked": self.checked,
                "counterexample": None if self.counterexample is None else render(self.counterexample)}


def _fib_legal_predicate(s) -> bool:
    return fib_legal(s).legal


def closure_probe(A: Iterable, B: Iterable = (), op: str = "union",
                  predicate: Callable[[tuple], bool] = _fib_legal_predicate,
                  bound: int = 3, max_strings: int = 100_000) -> ClosureResult:
    """Apply a set operation to finite samples and test the predicate on every result.

    This is a bounded empirical check.  ``star`` concatenates up to
    ``bound`` members of ``A``; ``max_strings`` caps the number of
    generated strings.
    """
    A = sorted({symbols(a) for a in A})
    B = sorted({symbols(b) for b in B})
    if op == "union":
        results: Iterable = sorted(set(A) | set(B))
    elif op == "concat":
        results = (a + b for a, b in product(A, B))
    elif op == "star":
        results = (sum(parts, ()) for k in range(bound + 1) for parts in product(A, repeat=k))
    else:
        raise ValueError(f"unknown operation {op!r}")
    checked = 0
    for w in results:
        if checked >= max_strings:
            break
        checked += 1
        if not predicate(w):
            return ClosureResult(False, w, checked)
    return ClosureResult(True, None, checked)


def fib_emergence(g: LGrammar, n: int = 12) -> dict:
    """Per-symbol verdicts over counts at t = 1..n (exact, string-free)."""
    prof = parikh_profile(g, n)
    out = {}
    for sym in g.alphabet:
        seq = prof.series(sym)[1:]
        out[sym] = {"counts": seq,
                    "recurrence": matches_fibonacci(seq).matches,
                    "fibonacci_numbers": all_fibonacci_numbers(seq)}
    return out
