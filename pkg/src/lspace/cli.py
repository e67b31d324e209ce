"""``lspace`` command line.

Exit codes: 0 success, 1 domain failure, 2 usage error.  ``--json`` output
is the stable surface; the text rendering is for people.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, classify, golden, transforms
from .automata import CAState, RuleTable, ca_run
from .errors import LSpaceError
from .grammar import (
    derive,
    derive_sequential,
    derive_tree,
    format_grammar,
    render,
    symbols,
    validate,
)
from .mappings import Involution, MappingExpr, apply_expr


class UsageError(Exception):
    pass


def dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def _grammar(args):
    if not getattr(args, "grammar", None):
        raise UsageError("a grammar file (or bundled grammar name) is required")
    return golden.resolve(args.grammar)


# -- subcommands --------------------------------------------------------------

def cmd_derive(args):
    d = derive(_grammar(args), args.gens, args.length_cap)
    return {"generations": d.texts()}, "\n".join(d.texts())


def cmd_derive_seq(args):
    seq = derive_sequential(_grammar(args), args.steps, args.strategy)
    forms = [" ".join(f) for f in seq.forms]
    doc = {"forms": forms, "applied": list(seq.applied), "truncated": seq.truncated}
    return doc, "\n".join(forms) + ("\n(truncated)" if seq.truncated else "")


def cmd_tree(args):
    t = derive_tree(_grammar(args), args.gens, args.length_cap)
    doc = t.to_json()
    doc["node_count"] = t.node_count()
    return doc, t.bracket()


def cmd_map(args):
    inv = Involution.parse(args.involution) if args.involution else None
    expr = MappingExpr.parse(args.expr)
    out = []
    for line in sys.stdin.read().splitlines():
        out.append(render(apply_expr(expr, symbols(line), inv)))
    return {"expr": str(expr), "images": out}, "\n".join(out)


def _mode(args):
    return classify.CountingMode(index_counts_stumps=args.count_stumps,
                                 containment_includes_stumps=not args.containment_excludes_stumps)


def cmd_classify(args):
    g = _grammar(args)
    report = classify.classify(g, _mode(args))
    doc = report.to_json()
    doc["diagnostics"] = [d.__dict__ for d in validate(g)]
    lines = [f"{k}: {v}" for k, v in report.to_json().items()]
    lines += [f"{d.severity}: {d.code} {d.message}" for d in validate(g)]
    return doc, "\n".join(lines)


def cmd_format(args):
    fmt = classify.rule_format(_grammar(args))
    return fmt.to_json(), f"({fmt.axiom_rule}, {fmt.nonaxiom_rule}) -> {fmt.family}"


def _rule(text):
    lhs, sep, rhs = text.partition("=")
    if not sep:
        raise UsageError(f"rule {text!r} should look like LHS=RHS")
    return lhs, rhs


def cmd_frustration(args):
    rules = [_rule(r) for r in args.rule] if args.rule else list(golden.FRUSTRATION_RULES)
    r = classify.detect_frustration(rules, args.sample, args.bound)
    doc = r.to_json()
    if not r.applicable:
        text = "not applicable: every left-hand side is a single symbol"
    else:
        text = "\n".join([
            "matches: " + ", ".join(doc["matches"]),
            "conflicts: " + ", ".join(f"({a}, {b})" for a, b in doc["conflicts"]),
            f"maximal tilings: {r.distinct_tilings}{'+' if r.tilings_truncated else ''}",
            f"frustrated: {r.frustrated}",
        ])
    return doc, text


def cmd_analyze(args):
    g = _grammar(args)
    if args.report == "growth":
        prof = analysis.parikh_profile(g, args.gens)
        doc = prof.to_json()
        text = "\n".join(f"g{t}: " + " ".join(f"{s}={c[s]}" for s in prof.symbols) + f" total={sum(c.values())}"
                         for t, c in enumerate(prof.counts))
        return doc, text
    if args.report == "emergence":
        em = analysis.fib_emergence(g, args.gens)
        return em, "\n".join(f"{s}: recurrence={v['recurrence']} fibonacci_numbers={v['fibonacci_numbers']}"
                             for s, v in em.items())
    d = derive(g, args.gens, args.length_cap)
    if args.report == "legality":
        rows = []
        for t, gen in enumerate(d):
            lg = analysis.fib_legal(gen)
            rows.append({"generation": t, "legal": lg.legal,
                         "violations": [list(v) for v in lg.violations[:20]]})
        return {"generations": rows}, "\n".join(
            f"g{r['generation']}: {'legal' if r['legal'] else 'illegal ' + str(r['violations'][:3])}" for r in rows)
    if args.report == "decompose":
        inv = Involution.parse(args.involution) if args.involution else None
        x = args.target if args.target is not None else args.gens
        dec = analysis.decompose_self_referential(d, x, inv)
        if dec is None:
            return {"target": x, "decomposition": None}, f"g{x}: no cover"
        text = f"g{x} = " + " + ".join(f"g{i}^{e}" if e.name != "ID" else f"g{i}" for i, e in dec.segments)
        return dec.to_json(), f"{text} ({dec.kind})"
    if args.report == "repetition":
        s = d.final
        st = analysis.repetition_stats(s, args.max_period or len(s) // 2 or len(s))
        return st.to_json(), f"max exponent {st.max_exponent}, cube: {st.has_cube}"
    raise UsageError(f"unknown report {args.report!r}")


def _expand_spec(items):
    spec = {}
    for item in items:
        sym, sep, idx = item.partition("=")
        if not sep:
            raise UsageError(f"expansion {item!r} should look like SYMBOL=INDEX[,INDEX...]")
        try:
            spec[sym] = [int(i) for i in idx.split(",")]
        except ValueError:
            raise UsageError(f"bad generation index in {item!r}") from None
    return spec


def _prune_arg(text):
    # RULE:CHUNK[@POSITION]
    rule, sep, rest = text.partition(":")
    if not sep:
        raise UsageError(f"prune {text!r} should look like RULE:CHUNK[@POS]")
    chunk, at, pos = rest.partition("@")
    return rule, chunk, int(pos) if at else None


def cmd_transform(args):
    chosen = [a for a in ("expand", "prune", "reduce", "tree_op") if getattr(args, a)]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --expand, --prune, --reduce, --tree-op")
    if args.expand:
        ex = transforms.expand_generations(_expand_spec(args.expand), args.gens or 12)
        return ex.to_json(), format_grammar(ex.grammar).rstrip() + (
            f"\nskip: {ex.skip}\nrecurrence preserved: {ex.recurrence_preserved}"
            f"\nfibonacci counts: {ex.fibonacci_counts}")
    g = _grammar(args)
    if args.prune:
        rule, chunk, pos = _prune_arg(args.prune)
        out = transforms.prune_rule(g, rule, chunk, pos, not args.no_mappings)
        return {"rules": {k: render(v) for k, v in out.productions.items()}}, format_grammar(out).rstrip()
    if args.reduce:
        res = transforms.reduce_to_minimal(g, args.reduce, args.bound, not args.no_mappings)
        doc = res.to_json()
        if not res.success:
            return doc, f"no reduction: {res.reason} (explored {res.explored})", 1
        text = "\n".join(f"{s.kind} {s.rule}: " + (f"{render(s.chunk)}@{s.position} (g{s.generation}^{s.mapping})"
                                                     if s.kind == "prune" else "")
                         for s in res.steps)
        return doc, text + "\n" + format_grammar(res.final).rstrip()
    span = None
    if args.span:
        a, _, b = args.span.partition(":")
        span = (int(a), int(b))
    tree = derive_tree(g, args.gens if args.gens is not None else 3, args.length_cap)
    op = transforms.TreeOp(args.tree_op, transforms.TreeOp.parse_path(args.path or ""), span, args.label)
    out = transforms.tree_transform(tree, op)
    return out.to_json(), out.bracket()


def cmd_equiv(args):
    g1, g2 = golden.resolve(args.grammar), golden.resolve(args.other)
    pair = tuple(args.pair.split(","))
    if len(pair) != 2:
        raise UsageError("--pair takes two symbols, e.g. 0,1")
    cmp = analysis.ratio_profiles_equal(g1, g2, pair, args.gens)
    doc = {"equal": cmp.equal, "first_difference": cmp.first_difference,
           "profiles": [p.to_json() for p in cmp.profiles]}
    text = "\n".join(f"t={t}: {a} vs {b}" for t, (a, b) in
                     enumerate(zip(*(p.ratios for p in cmp.profiles)), start=1))
    return doc, text + f"\nequal: {cmp.equal}"


def cmd_ca(args):
    states = ca_run(RuleTable.from_bits(args.table), CAState.parse(args.state, args.boundary), args.steps)
    rows = [str(s) for s in states]
    return {"table": args.table, "boundary": args.boundary, "states": rows}, "\n".join(rows)


def cmd_reproduce(args):
    results = golden.run_golden()
    ok = all(r.passed for r in results)
    doc = {"passed": ok, "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                                    for r in results]}
    width = max(len(r.name) for r in results)
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in results)
    return doc, text, 0 if ok else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--length-cap", type=int, default=None,
                        help="abort derivations longer than this (env LSPACE_LENGTH_CAP)")
    common.add_argument("--seed", type=int, default=None, help="reserved; all operations are deterministic")

    p = argparse.ArgumentParser(prog="lspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, grammar=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if grammar:
            sp.add_argument("grammar", nargs="?" if grammar == "optional" else None,
                            help="grammar file or bundled name (fib, xor, eq13, ...)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("derive", cmd_derive, "parallel derivation")
    sp.add_argument("--gens", type=int, default=5)

    sp = add("derive-seq", cmd_derive_seq, "one-rewrite-per-step derivation")
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--strategy", choices=("ordered", "leftmost"), default="ordered")

    sp = add("tree", cmd_tree, "derivation tree")
    sp.add_argument("--gens", type=int, default=3)

    sp = add("map", cmd_map, "apply ID/M/N/MN to lines read from stdin", grammar=False)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--involution", default=None, help="e.g. a=b,c=c (default 0=1)")

    sp = add("classify", cmd_classify, "symmetric / asymmetric classification")
    sp.add_argument("--count-stumps", action="store_true")
    sp.add_argument("--containment-excludes-stumps", action="store_true")

    add("format", cmd_format, "rule-format schema and family")

    sp = add("frustration", cmd_frustration, "overlapping matches of multi-symbol rules", grammar=False)
    sp.add_argument("--rule", action="append", help="LHS=RHS, repeatable (default: 01=101, 10=0101)")
    sp.add_argument("--sample", default="0101")
    sp.add_argument("--bound", type=int, default=10_000)

    sp = add("analyze", cmd_analyze, "growth, legality, decomposition, repetition reports")
    sp.add_argument("--gens", type=int, default=8)
    sp.add_argument("--report", choices=("growth", "emergence", "legality", "decompose", "repetition"),
                    default="growth")
    sp.add_argument("--target", type=int, default=None, help="generation to decompose (default --gens)")
    sp.add_argument("--max-period", type=int, default=None)
    sp.add_argument("--involution", default=None)

    sp = add("transform", cmd_transform, "expand, prune, reduce, or edit trees", grammar="optional")
    sp.add_argument("--expand", nargs="+", metavar="SYM=IDX[,IDX]")
    sp.add_argument("--prune", metavar="RULE:CHUNK[@POS]")
    sp.add_argument("--reduce", choices=("fib", "xor"))
    sp.add_argument("--bound", type=int, default=10_000)
    sp.add_argument("--no-mappings", action="store_true", help="prune only unmapped Fib generations")
    sp.add_argument("--tree-op", choices=("collapse", "percolate", "u_prune", "atomize"))
    sp.add_argument("--path", default=None, help="dotted node path, e.g. 0.1")
    sp.add_argument("--span", default=None, help="START:END sisters for atomize")
    sp.add_argument("--label", default="0")
    sp.add_argument("--gens", type=int, default=None)

    sp = add("equiv", cmd_equiv, "compare symbol ratios of two grammars")
    sp.add_argument("other")
    sp.add_argument("--gens", type=int, default=6)
    sp.add_argument("--pair", default="0,1")

    sp = add("ca", cmd_ca, "1D radius-1 cellular automaton", grammar=False)
    sp.add_argument("--table", default="00010111", help="output bits for 000..111")
    sp.add_argument("--state", required=True)
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--boundary", choices=("periodic", "zero"), default="periodic")

    add("reproduce", cmd_reproduce, "run every golden check", grammar=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, FileNotFoundError, ValueError) as exc:
        print(f"lspace: error: {exc}", file=sys.stderr)
        return 2
    except LSpaceError as exc:
        print(f"lspace: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    doc, text, *rest = result
    print(dump(doc) if args.json else text)
    return rest[0] if rest else 0


if __name__ == "__main__":
    sys.exit(main())
