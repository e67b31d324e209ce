"""Deterministic L-grammars (D0L) and their derivations.

A grammar maps each symbol to at most one right-hand side.  Symbols are
atoms: single characters in the common case, but multi-character names
(``Sentence``, ``NP``) are allowed.  Strings of symbols are plain tuples.

Three kinds of symbol behave differently under a parallel step:

* rewriting symbols are replaced by their right-hand side,
* erasing symbols (right-hand side ``~``) vanish,
* stumps (no production at all) are copied unchanged.
"""

from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateRule,
    ForeignSymbol,
    GrammarSyntaxError,
    LengthCapExceeded,
    MissingAxiom,
)

NULL = "~"
DEFAULT_LENGTH_CAP = 10**7
LENGTH_CAP_ENV = "LSPACE_LENGTH_CAP"

Symbols = tuple  # tuple[str, ...]

_WS = re.compile(r"\s")


def symbols(text: str | Iterable[str]) -> tuple:
    """Turn ``"0110"`` or ``"the man hit"`` into a symbol tuple.

    Text containing whitespace is split on it; otherwise every character
    is a symbol.  ``~`` on its own denotes the empty string.
    """
    if not isinstance(text, str):
        return tuple(text)
    text = text.strip()
    if text in ("", NULL):
        return ()
    if _WS.search(text):
        return tuple(tok for tok in text.split() if tok != NULL)
    return tuple(text)


def render(seq: Sequence[str]) -> str:
    """Inverse of :func:`symbols` for display and JSON export."""
    if all(len(s) == 1 for s in seq):
        return "".join(seq)
    return " ".join(seq)


def resolve_length_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(LENGTH_CAP_ENV)
    return int(env) if env else DEFAULT_LENGTH_CAP


def _check_symbol(sym: str) -> None:
    if not sym or _WS.search(sym) or sym == NULL:
        raise GrammarSyntaxError(f"invalid symbol {sym!r}")


@dataclass(frozen=True, eq=False)
class LGrammar:
    """An immutable D0L grammar.

    ``productions`` maps a symbol to its right-hand side tuple (empty for
    erasing symbols).  ``alternatives`` is only populated by grammar files
    using ``A -> x | y`` and is consulted solely by
    :func:`derive_sequential`; parallel derivation always uses the first
    alternative.
    """

    axiom: tuple
    productions: Mapping[str, tuple]
    alphabet: tuple = ()
    alternatives: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        axiom = symbols(self.axiom)
        prods = {lhs: symbols(rhs) for lhs, rhs in self.productions.items()}
        alts = {k: tuple(symbols(r) for r in v) for k, v in self.alternatives.items()}
        seen = dict.fromkeys(self.alphabet)
        for sym in chain(axiom, *((lhs, *rhs) for lhs, rhs in prods.items()),
                         *(chain.from_iterable(v) for v in alts.values())):
            seen.setdefault(sym)
        for sym in seen:
            _check_symbol(sym)
        object.__setattr__(self, "axiom", axiom)
        object.__setattr__(self, "productions", prods)
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "alphabet", tuple(seen))

    @classmethod
    def from_rules(cls, rules: Mapping[str, str | Sequence[str]], axiom="0", alphabet=()):
        """``LGrammar.from_rules({"0": "1", "1": "01"})`` builds the Fib grammar."""
        return cls(symbols(axiom), {k: symbols(v) for k, v in rules.items()}, tuple(alphabet))

    def __eq__(self, other):
        if not isinstance(other, LGrammar):
            return NotImplemented
        return self.key() == other.key() and set(self.alphabet) == set(other.alphabet)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rules = ", ".join(f"{k}->{render(v) or NULL}" for k, v in self.productions.items())
        return f"LGrammar(axiom={render(self.axiom)!r}, {{{rules}}})"

    def key(self) -> tuple:
        """Canonical hashable form (axiom plus sorted productions)."""
        return (self.axiom, tuple(sorted(self.productions.items())))

    @cached_property
    def stumps(self) -> tuple:
        return tuple(s for s in self.alphabet if s not in self.productions)

    @cached_property
    def erasing(self) -> tuple:
        return tuple(s for s, rhs in self.productions.items() if not rhs)

    @cached_property
    def rewriting(self) -> tuple:
        return tuple(s for s, rhs in self.productions.items() if rhs)

    def rhs(self, sym: str) -> tuple:
        """Image of one symbol under a parallel step."""
        return self._table[sym]

    @cached_property
    def _table(self) -> dict:
        table = {s: (s,) for s in self.alphabet}
        table.update(self.productions)
        return table

    def with_productions(self, productions: Mapping[str, tuple], axiom=None) -> "LGrammar":
        return LGrammar(self.axiom if axiom is None else axiom, dict(productions))


# -- file format --------------------------------------------------------------

_RULE = re.compile(r"^(?P<lhs>.*?)\s*->\s*(?P<rhs>.*)$")


def parse_grammar(text: str) -> LGrammar:
    """Parse the line-oriented grammar format.

    ::

        # Fib
        axiom: 0
        0 -> 1
        1 -> 0 1
        e -> ~
    """
    axiom = None
    prods: dict[str, tuple] = {}
    alts: dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("axiom:"):
            if axiom is not None:
                raise GrammarSyntaxError("second axiom line", lineno)
            axiom = tuple(line[len("axiom:"):].split())
            if not axiom:
                raise MissingAxiom("empty axiom", lineno)
            continue
        m = _RULE.match(line)
        if not m:
            raise GrammarSyntaxError(f"expected 'axiom:' or 'lhs -> rhs', got {line!r}", lineno)
        lhs = m["lhs"].split()
        if len(lhs) != 1:
            raise GrammarSyntaxError(
                "left-hand side must be exactly one symbol", lineno)
        lhs = lhs[0]
        if lhs == NULL:
            raise GrammarSyntaxError("the null token cannot be rewritten", lineno)
        if lhs in prods:
            raise DuplicateRule(f"second production for {lhs!r}", lineno)
        options = []
        for part in m["rhs"].split("|"):
            toks = part.split()
            if not toks:
                raise GrammarSyntaxError("empty right-hand side (use ~ to erase)", lineno)
            if NULL in toks and toks != [NULL]:
                raise GrammarSyntaxError("~ must stand alone", lineno)
            options.append(() if toks == [NULL] else tuple(toks))
        prods[lhs] = options[0]
        if len(options) > 1:
            alts[lhs] = tuple(options)
    if axiom is None:
        raise MissingAxiom("no 'axiom:' line")
    return LGrammar(axiom, prods, alternatives=alts)


def format_grammar(g: LGrammar) -> str:
    lines = ["axiom: " + " ".join(g.axiom)]
    for lhs, rhs in g.productions.items():
        options = g.alternatives.get(lhs, (rhs,))
        body = " | ".join(" ".join(o) if o else NULL for o in options)
        lines.append(f"{lhs} -> {body}")
    return "\n".join(lines) + "\n"


def load_grammar(path) -> LGrammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str
    location: str = ""


def validate(g: LGrammar) -> list:
    """Return diagnostics; an empty list means well-formed and non-halting."""
    out = []
    alphabet = set(g.alphabet)
    for lhs, rhs in g.productions.items():
        for sym in (lhs, *rhs):
            if sym not in alphabet:
                out.append(Diagnostic("error", "FOREIGN_SYMBOL",
                                      f"{sym!r} is not in the alphabet", f"rule {lhs}"))
    for sym in g.axiom:
        if sym not in alphabet:
            out.append(Diagnostic("error", "FOREIGN_SYMBOL",
                                  f"{sym!r} is not in the alphabet", "axiom"))
    if not g.axiom:
        out.append(Diagnostic("error", "EMPTY_AXIOM", "axiom is empty", "axiom"))
    if not g.productions:
        out.append(Diagnostic("warning", "ALL_STUMPS",
                              "no symbol has a production; every string is fixed"))
    on_rhs = set(chain.from_iterable(g.productions.values()))
    if not on_rhs & set(g.productions):
        out.append(Diagnostic("warning", "HALTS_GLOBALLY",
                              "no symbol occurs on both a left- and a right-hand side"))
    for sym in g.stumps:
        if g.productions:
            out.append(Diagnostic("info", "STUMP",
                                  f"{sym!r} has no production and halts locally", sym))
    if g.alternatives:
        out.append(Diagnostic("warning", "ALTERNATIVES",
                              "alternatives are only used by sequential derivation; "
                              "parallel steps take the first",
                              ", ".join(g.alternatives)))
    return out


# -- parallel derivation ------------------------------------------------------

def step(g: LGrammar, s: Sequence[str]) -> tuple:
    """One parallel rewriting step: every symbol is replaced simultaneously."""
    table = g._table
    try:
        return tuple(chain.from_iterable([table[x] for x in s]))
    except KeyError as exc:
        raise ForeignSymbol(f"{exc.args[0]!r} is not in the alphabet of {g!r}") from None


def _next_length(g: LGrammar, s: Sequence[str]) -> int:
    table = g._table
    return sum(len(table[x]) * k for x, k in Counter(s).items() if x in table)


@dataclass(frozen=True)
class Derivation:
    grammar: LGrammar
    generations: tuple

    def __len__(self):
        return len(self.generations)

    def __getitem__(self, t):
        return self.generations[t]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.generations)

    @property
    def final(self) -> tuple:
        return self.generations[-1]

    def texts(self) -> list:
        return [render(gen) for gen in self.generations]


def iter_generations(g: LGrammar, length_cap: int | None = None) -> Iterator[tuple]:
    """Yield g0, g1, ... without end; stops by raising LengthCapExceeded."""
    cap = resolve_length_cap(length_cap)
    s = g.axiom
    while True:
        yield s
        nxt = _next_length(g, s)
        if nxt > cap:
            raise LengthCapExceeded(f"next generation would have {nxt} symbols (cap {cap})")
        s = step(g, s)


def derive(g: LGrammar, n: int, length_cap: int | None = None) -> Derivation:
    if n < 0:
        raise ValueError("generation count must be non-negative")
    gens = []
    for s in iter_generations(g, length_cap):
        gens.append(s)
        if len(gens) > n:
            break
    return Derivation(g, tuple(gens))


# -- sequential (normal-grammar) derivation -----------------------------------

@dataclass(frozen=True)
class SequentialDerivation:
    forms: tuple
    applied: tuple  # lhs rewritten at each step
    truncated: bool

    @property
    def halted(self) -> bool:
        return not self.truncated


def derive_sequential(g: LGrammar, step_limit: int, strategy: str = "ordered") -> SequentialDerivation:
    """Rewrite one symbol per step, the way a normal grammar derives.

    ``strategy="leftmost"`` always rewrites the leftmost symbol that has a
    production.  ``strategy="ordered"`` walks the rule list cyclically in
    file order and applies the next rule whose left-hand side is present,
    at its leftmost occurrence; this is the convention that yields
    Chomsky's textbook derivation of "the man hit the ball".

    Symbols with ``|`` alternatives consume them in file order, one per use
    (demo-only; wraps around when exhausted).
    """
    if step_limit < 0:
        raise ValueError("step_limit must be non-negative")
    if strategy not in ("ordered", "leftmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rules = list(g.productions)
    uses: Counter = Counter()
    form = g.axiom
    forms, applied = [form], []
    pointer = 0

    def expand(sym):
        options = g.alternatives.get(sym) or (g.productions[sym],)
        choice = options[uses[sym] % len(options)]
        uses[sym] += 1
        return choice

    while True:
        pos = None
        if strategy == "leftmost":
            pos = next((i for i, x in enumerate(form) if x in g.productions), None)
        else:
            for k in range(len(rules)):
                lhs = rules[(pointer + k) % len(rules)]
                if lhs in form:
                    pos = form.index(lhs)
                    pointer = (pointer + k + 1) % len(rules)
                    break
        if pos is None:
            return SequentialDerivation(tuple(forms), tuple(applied), False)
        if len(applied) >= step_limit:
            return SequentialDerivation(tuple(forms), tuple(applied), True)
        sym = form[pos]
        form = form[:pos] + expand(sym) + form[pos + 1:]
        forms.append(form)
        applied.append(sym)


# -- derivation trees ---------------------------------------------------------

@dataclass(frozen=True)
class Node:
    symbol: str
    generation: int
    children: tuple = ()
    erased: bool = False
    atomized: bool = False

    @property
    def branching(self) -> bool:
        return len(self.children) >= 2

    def count(self) -> int:
        total, stack = 0, [self]
        while stack:
            n = stack.pop()
            total += 1
            stack.extend(n.children)
        return total

    def bracket(self) -> str:
        if not self.children:
            return self.symbol
        return f"{self.symbol}({' '.join(c.bracket() for c in self.children)})"

    def to_json(self) -> dict:
        d = {"symbol": self.symbol, "generation": self.generation}
        if self.erased:
            d["erased"] = True
        if self.atomized:
            d["atomized"] = True
        if self.children:
            d["children"] = [c.to_json() for c in self.children]
        return d


@dataclass(frozen=True)
class DerivationTree:
    """Forest with one root per axiom symbol.

    Node paths are dotted index strings: ``"0.1"`` is the second child of
    the first root.
    """

    roots: tuple

    def level(self, depth: int) -> tuple:
        nodes = list(self.roots)
        for _ in range(depth):
            nodes = [c for n in nodes for c in n.children]
        return tuple(n.symbol for n in nodes)

    def leaves(self) -> tuple:
        out, stack = [], list(reversed(self.roots))
        while stack:
            n = stack.pop()
            if n.children:
                stack.extend(reversed(n.children))
            elif not n.erased:
                out.append(n.symbol)
        return tuple(out)

    def node_count(self) -> int:
        return sum(r.count() for r in self.roots)

    def node(self, path: Sequence[int]) -> Node:
        if not path:
            raise IndexError("empty path")
        node = self.roots[path[0]]
        for i in path[1:]:
            node = node.children[i]
        return node

    def bracket(self) -> str:
        return " ".join(r.bracket() for r in self.roots)

    def to_json(self) -> dict:
        return {"roots": [r.to_json() for r in self.roots]}


def derive_tree(g: LGrammar, n: int, length_cap: int | None = None) -> DerivationTree:
    """Build the derivation tree whose level t reads generation t."""
    cap = resolve_length_cap(length_cap)
    d = derive(g, n, length_cap=cap)
    total = sum(len(gen) for gen in d.generations)
    if total > cap:
        raise LengthCapExceeded(f"tree would have {total} nodes (cap {cap})")
    erasing = set(g.erasing)
    # Frontier symbols are still present; only interior erasing nodes vanished.
    below = [Node(s, n) for s in d.generations[n]]
    for t in range(n - 1, -1, -1):
        level, pos = [], 0
        for s in d.generations[t]:
            k = len(g.rhs(s))
            level.append(Node(s, t, tuple(below[pos:pos + k]), erased=s in erasing))
            pos += k
        below = level
    return DerivationTree(tuple(below))
