"""Grammar expansion, pruning and reduction; operations on derivation trees."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .analysis import (
    FIB,
    fib_emergence,
    fib_generation,
    is_binary,
    is_fib_constituent,
)
from .errors import (
    EmptySister,
    IndexOutOfRange,
    InvalidSelector,
    InvalidSpan,
    NotApplicable,
    NotAStump,
    NotConstituent,
    NotPresent,
)
from .grammar import NULL, DerivationTree, LGrammar, Node, render, step, symbols
from .mappings import MappingExpr

XOR = LGrammar.from_rules({"0": "01", "1": "10"}, axiom="0")
MINIMAL = {"fib": FIB, "xor": XOR}
MAX_EXPANSION_INDEX = 30


# -- expansions -----------------------------------------------------------------

@dataclass(frozen=True)
class Expansion:
    grammar: LGrammar
    spec: dict
    skip: bool
    emergence: dict  # per symbol: counts, recurrence, fibonacci_numbers

    @property
    def recurrence_preserved(self) -> bool:
        return all(v["recurrence"] for v in self.emergence.values())

    @property
    def fibonacci_counts(self) -> bool:
        return all(v["fibonacci_numbers"] for v in self.emergence.values())

    def to_json(self) -> dict:
        return {
            "rules": {k: render(v) for k, v in self.grammar.productions.items()},
            "spec": {k: list(v) for k, v in self.spec.items()},
            "skip": self.skip,
            "recurrence_preserved": self.recurrence_preserved,
            "fibonacci_counts": self.fibonacci_counts,
        }


def expand_generations(spec: Mapping[str, Sequence[int]], check_generations: int = 12) -> Expansion:
    """Rewrite each symbol as a concatenation of Fib generations.

    ``{"0": [3], "1": [4]}`` gives ``0 -> 101, 1 -> 01101``.  The expansion
    is a skip expansion when the first indices of the two symbols are not
    adjacent.  Count behaviour over ``check_generations`` steps is
    measured, never assumed.
    """
    spec = {k: tuple(v) for k, v in spec.items()}
    if set(spec) != {"0", "1"}:
        raise ValueError("an expansion spec names exactly the symbols 0 and 1")
    for sym, idx in spec.items():
        if not idx:
            raise IndexOutOfRange(f"no generation given for {sym!r}")
        for i in idx:
            if not 1 <= i <= MAX_EXPANSION_INDEX:
                raise IndexOutOfRange(f"generation {i} outside 1..{MAX_EXPANSION_INDEX}")
    rules = {sym: tuple("".join(fib_generation(i) for i in idx)) for sym, idx in spec.items()}
    g = LGrammar(("0",), {"0": rules["0"], "1": rules["1"]})
    skip = abs(spec["0"][0] - spec["1"][0]) != 1
    return Expansion(g, spec, skip, fib_emergence(g, check_generations))


# -- grammar edits ------------------------------------------------------------

def add_constant(g: LGrammar, symbol: str, positions: Mapping[str, Sequence[int]] | None = None) -> LGrammar:
    """Insert a non-rewriting symbol into right-hand sides.

    ``positions`` maps a rule to insertion offsets in its current
    right-hand side; by default the symbol is appended to every rule.
    """
    if symbol in g.productions:
        raise NotAStump(f"{symbol!r} already has a production")
    if positions is None:
        positions = {lhs: [len(rhs)] for lhs, rhs in g.productions.items() if rhs}
    prods = dict(g.productions)
    for lhs, offsets in positions.items():
        if lhs not in prods:
            raise InvalidSpan(f"no rule for {lhs!r}")
        rhs = list(prods[lhs])
        for off in sorted(offsets, reverse=True):
            if not 0 <= off <= len(rhs):
                raise InvalidSpan(f"offset {off} outside rule {lhs!r}")
            rhs.insert(off, symbol)
        prods[lhs] = tuple(rhs)
    return LGrammar(g.axiom, prods, g.alphabet + (symbol,))


def remove_constant(g: LGrammar, symbol: str) -> LGrammar:
    """Delete a stump (or an erasing symbol) from every right-hand side."""
    if symbol not in g.alphabet:
        raise NotPresent(f"{symbol!r} is not in the alphabet")
    if g.productions.get(symbol):
        raise NotAStump(f"{symbol!r} rewrites and cannot be removed")
    prods = {lhs: tuple(x for x in rhs if x != symbol)
             for lhs, rhs in g.productions.items() if lhs != symbol}
    axiom = tuple(x for x in g.axiom if x != symbol)
    if not axiom:
        raise NotApplicable("removing the constant would empty the axiom")
    return LGrammar(axiom, prods, tuple(s for s in g.alphabet if s != symbol))


def permute_symbols(g: LGrammar, perm: Mapping[str, str]) -> LGrammar:
    table = {s: perm.get(s, s) for s in g.alphabet}
    if sorted(table.values()) != sorted(table):
        raise ValueError(f"{dict(perm)!r} is not a permutation of the alphabet")
    prods = {table[lhs]: tuple(table[x] for x in rhs) for lhs, rhs in g.productions.items()}
    return LGrammar(tuple(table[x] for x in g.axiom), prods, tuple(table[s] for s in g.alphabet))


def advance_constituent(g: LGrammar, target: str, span: tuple | None = None) -> LGrammar:
    """Replace ``rhs(target)[start:end]`` by its one-step image under ``g``."""
    rhs = g.productions.get(target)
    if rhs is None:
        raise InvalidSpan(f"no rule for {target!r}")
    start, end = span if span is not None else (0, len(rhs))
    if not 0 <= start < end <= len(rhs):
        raise InvalidSpan(f"span {start}:{end} outside {render(rhs)!r}")
    prods = dict(g.productions)
    prods[target] = rhs[:start] + step(g, rhs[start:end]) + rhs[end:]
    return LGrammar(g.axiom, prods, g.alphabet)


@dataclass(frozen=True)
class GrammarEdit:
    kind: str  # add_constant | remove_constant | permute_symbols | advance_constituent
    symbol: str | None = None
    positions: dict | None = None
    permutation: dict | None = None
    span: tuple | None = None


def edit_grammar(g: LGrammar, edit: GrammarEdit) -> LGrammar:
    if edit.kind == "add_constant":
        return add_constant(g, edit.symbol, edit.positions)
    if edit.kind == "remove_constant":
        return remove_constant(g, edit.symbol)
    if edit.kind == "permute_symbols":
        return permute_symbols(g, edit.permutation or {})
    if edit.kind == "advance_constituent":
        return advance_constituent(g, edit.symbol, edit.span)
    raise ValueError(f"unknown edit {edit.kind!r}")


# -- pruning ----------------------------------------------------------------------

def prune_rule(g: LGrammar, target: str, chunk, position: int | None = None,
               allow_mappings: bool = True) -> LGrammar:
    """Excise a Fib constituent from the right-hand side of ``target``."""
    chunk = symbols(chunk)
    if not is_fib_constituent(chunk, allow_mappings).yes:
        raise NotConstituent(f"{render(chunk)!r} is not a Fib constituent")
    rhs = g.productions.get(target)
    if rhs is None:
        raise NotPresent(f"no rule for {target!r}")
    if position is None:
        position = next((i for i in range(len(rhs)) if rhs[i:i + len(chunk)] == chunk), None)
    if position is None or rhs[position:position + len(chunk)] != chunk:
        raise NotPresent(f"{render(chunk)!r} does not occur in {render(rhs)!r}"
                         + ("" if position is None else f" at {position}"))
    prods = dict(g.productions)
    prods[target] = rhs[:position] + rhs[position + len(chunk):]
    return LGrammar(g.axiom, prods, g.alphabet)


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # "prune" | "remove_constant"
    rule: str
    chunk: tuple = ()
    position: int | None = None
    generation: int | None = None
    mapping: MappingExpr | None = None

    def to_json(self) -> dict:
        d = {"kind": self.kind, "rule": self.rule}
        if self.kind == "prune":
            d.update(chunk=render(self.chunk), position=self.position,
                     generation=self.generation, mapping=str(self.mapping))
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ReductionStep":
        if d["kind"] == "prune":
            return cls("prune", d["rule"], symbols(d["chunk"]), d["position"],
                       d["generation"], MappingExpr.parse(d["mapping"]))
        return cls(d["kind"], d["rule"])


@dataclass(frozen=True)
class ReductionProof:
    source: LGrammar
    steps: tuple
    final: LGrammar
    explored: int
    allow_mappings: bool = True

    success = True

    def to_json(self) -> dict:
        return {
            "success": True,
            "explored": self.explored,
            "steps": [s.to_json() for s in self.steps],
            "final": {k: render(v) for k, v in self.final.productions.items()},
        }


@dataclass(frozen=True)
class ReductionFailure:
    source: LGrammar
    explored: int
    exhausted: bool  # True: whole space searched; False: bound hit
    reason: str

    success = False

    def to_json(self) -> dict:
        return {"success": False, "explored": self.explored,
                "exhausted": self.exhausted, "reason": self.reason}


def replay(source: LGrammar, steps: Sequence[ReductionStep], allow_mappings: bool = True) -> LGrammar:
    g = source
    for s in steps:
        if s.kind == "prune":
            g = prune_rule(g, s.rule, s.chunk, s.position, allow_mappings)
        elif s.kind == "remove_constant":
            g = remove_constant(g, s.rule)
        else:
            raise ValueError(f"unknown step {s.kind!r}")
    return g


def _prune_moves(rhs: tuple, allow_mappings: bool):
    for pos in range(len(rhs)):
        for length in range(1, len(rhs) - pos + 1):
            if length == len(rhs):
                continue
            chunk = rhs[pos:pos + length]
            if not is_binary(chunk):
                continue
            c = is_fib_constituent(chunk, allow_mappings)
            if c.yes:
                yield pos, chunk, c, rhs[:pos] + rhs[pos + length:]


def reduce_to_minimal(g: LGrammar, target: str = "fib", search_bound: int = 10_000,
                      allow_mappings: bool = True) -> ReductionProof | ReductionFailure:
    """Search for a prune sequence that turns ``g`` into a minimal grammar.

    Constants (stumps and erasing symbols) are removed first.  Prunes on
    different rules commute, so each rule is searched breadth-first on its
    own and the per-rule shortest sequences are concatenated; the result
    is a shortest proof overall.  ``search_bound`` caps the total number of
    right-hand sides visited.
    """
    goal = MINIMAL[target]
    steps = []
    cur = g
    for sym in sorted(set(g.stumps) | set(g.erasing)):
        if sym not in goal.alphabet:
            cur = remove_constant(cur, sym)
            steps.append(ReductionStep("remove_constant", sym))
    if set(cur.rewriting) != set(goal.productions) or cur.erasing:
        return ReductionFailure(g, 0, True,
                                f"rewriting symbols {sorted(cur.rewriting)} cannot become "
                                f"{sorted(goal.productions)} by pruning")
    explored = 0
    for sym in sorted(goal.productions):
        want = goal.productions[sym]
        start = cur.productions[sym]
        parents = {start: None}
        queue = deque([start])
        found = start == want
        while queue and not found:
            rhs = queue.popleft()
            explored += 1
            if explored > search_bound:
                return ReductionFailure(g, explored - 1, False, f"search bound hit on rule {sym!r}")
            for pos, chunk, c, nxt in _prune_moves(rhs, allow_mappings):
                if nxt in parents:
                    continue
                parents[nxt] = (rhs, ReductionStep("prune", sym, chunk, pos, c.generation, c.mapping))
                if nxt == want:
                    found = True
                    break
                queue.append(nxt)
        if not found:
            return ReductionFailure(g, explored, True,
                                    f"no prune sequence turns {render(start)!r} into {render(want)!r}")
        path = []
        node = want
        while parents[node] is not None:
            node, st = parents[node]
            path.append(st)
        steps.extend(reversed(path))
    final = replay(g, steps, allow_mappings)
    return ReductionProof(g, tuple(steps), final, explored, allow_mappings)


# -- tree operations ----------------------------------------------------------

@dataclass(frozen=True)
class TreeOp:
    kind: str  # collapse | percolate | u_prune | atomize
    path: tuple = ()
    span: tuple | None = None  # atomize: (start, end) over the children at ``path``
    label: str = "0"

    @staticmethod
    def parse_path(text: str) -> tuple:
        text = text.strip()
        if not text:
            return ()
        try:
            return tuple(int(p) for p in text.split("."))
        except ValueError:
            raise InvalidSelector(f"bad path {text!r}") from None


def _is_empty(node: Node) -> bool:
    return node.erased or node.symbol == NULL


def _children_at(tree: DerivationTree, path: tuple) -> tuple:
    return tree.roots if not path else _node_at(tree, path).children


def _node_at(tree: DerivationTree, path: tuple) -> Node:
    try:
        if not path or any(i < 0 for i in path):
            raise IndexError
        return tree.node(path)
    except IndexError:
        raise InvalidSelector(f"no node at path {'.'.join(map(str, path)) or '<root>'}") from None


def _with_children(tree: DerivationTree, path: tuple, children: tuple) -> DerivationTree:
    """Copy of ``tree`` where the children list at ``path`` is replaced."""
    if not path:
        return DerivationTree(tuple(children))
    node = _node_at(tree, path)
    parent = path[:-1]
    siblings = list(_children_at(tree, parent))
    siblings[path[-1]] = replace(node, children=tuple(children))
    return _with_children(tree, parent, tuple(siblings))


def _splice(tree: DerivationTree, path: tuple, new: Sequence[Node]) -> DerivationTree:
    """Replace the node at ``path`` by zero or more nodes."""
    _node_at(tree, path)
    parent = path[:-1]
    siblings = list(_children_at(tree, parent))
    siblings[path[-1]:path[-1] + 1] = list(new)
    return _with_children(tree, parent, tuple(siblings))


def tree_transform(tree: DerivationTree, op: TreeOp) -> DerivationTree:
    """Apply one tree-pruning operation; nodes outside the target are shared."""
    path = tuple(op.path)
    if op.kind == "collapse":
        node = _node_at(tree, path)
        if len(path) < 2:
            raise NotApplicable("collapse needs a parent node")
        parent = _node_at(tree, path[:-1])
        if node.symbol != op.label or parent.symbol != op.label or len(parent.children) != 2:
            raise NotApplicable(f"collapse needs {op.label} under a binary-branching {op.label}")
        sister = parent.children[1 - path[-1]]
        if _is_empty(sister):
            raise EmptySister(f"({op.label}, empty) does not collapse")
        return _with_children(tree, path[:-1], (sister,))

    if op.kind == "percolate":
        node = _node_at(tree, path)
        kids = node.children
        if node.symbol != op.label or len(kids) != 2 or op.label not in (kids[0].symbol, kids[1].symbol):
            raise NotApplicable(f"percolate needs a branching {op.label} over ({op.label}, x)")
        x = kids[1] if kids[0].symbol == op.label else kids[0]
        if _is_empty(x):
            raise EmptySister(f"({op.label}, empty) is not rewritten")
        return _splice(tree, path, [x])

    if op.kind == "u_prune":
        node = _node_at(tree, path)
        if node.branching:
            raise NotApplicable("only non-branching nodes can be pruned")
        siblings = _children_at(tree, path[:-1])
        i = path[-1]
        neighbours = [siblings[j] for j in (i - 1, i + 1) if 0 <= j < len(siblings)]
        context = any(n.atomized for n in neighbours) or any(c.atomized for c in node.children)
        if not context:
            raise NotApplicable("pruning needs an adjacent or immediately dominated atomized node")
        return _splice(tree, path, node.children)

    if op.kind == "atomize":
        if op.span is None:
            raise InvalidSelector("atomize needs a span of sister nodes")
        kids = _children_at(tree, path)
        start, end = op.span
        if not 0 <= start < end <= len(kids):
            raise InvalidSelector(f"span {start}:{end} outside {len(kids)} sisters")
        chosen = kids[start:end]
        if any(_is_empty(k) for k in chosen):
            raise EmptySister("cannot atomize an empty node")
        atom = Node(f"[{render([k.symbol for k in chosen])}]", chosen[0].generation,
                    tuple(c for k in chosen for c in k.children), atomized=True)
        return _with_children(tree, path, kids[:start] + (atom,) + kids[end:])

    raise ValueError(f"unknown tree operation {op.kind!r}")


def fragment(text: str) -> DerivationTree:
    """Build a small tree from bracket notation, e.g. ``"0(0 1)"``.

    ``~`` marks an empty (erased) leaf.
    """
    pos = 0

    def parse_node(depth):
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos] not in "() ":
            pos += 1
        sym = text[start:pos]
        if not sym:
            raise InvalidSelector(f"bad fragment {text!r}")
        children = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                while pos < len(text) and text[pos] == " ":
                    pos += 1
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                children.append(parse_node(depth + 1))
        return Node(sym, depth, tuple(children), erased=sym == NULL)

    roots = []
    while pos < len(text):
        if text[pos] == " ":
            pos += 1
            continue
        roots.append(parse_node(0))
    return DerivationTree(tuple(roots))
