"""Property tests over random grammars, strings and trees."""

import random
from concurrent.futures import ThreadPoolExecutor

from hypothesis import given, settings
from hypothesis import strategies as st

from lspace import transforms as tf
from lspace.analysis import (
    decompose_self_referential,
    fib_generation,
    growth_profile,
    is_fib_constituent,
    parikh_profile,
)
from lspace.automata import CAState, RuleTable, ca_step
from lspace.classify import classify, detect_frustration
from lspace.golden import named
from lspace.grammar import LGrammar, derive, derive_tree, step
from lspace.mappings import ID, MappingExpr, apply_expr, compose, mirror, negative

@st.composite
def grammars(draw, alphabet="abc", max_rhs=4):
    sigma = alphabet[:draw(st.integers(1, len(alphabet)))]
    rules = {}
    for sym in sigma:
        kind = draw(st.sampled_from(["rewrite", "rewrite", "rewrite", "erase", "stump"]))
        if kind == "rewrite":
            rules[sym] = tuple(draw(st.lists(st.sampled_from(sigma), min_size=1, max_size=max_rhs)))
        elif kind == "erase":
            rules[sym] = ()
    axiom = tuple(draw(st.lists(st.sampled_from(sigma), min_size=1, max_size=3)))
    return LGrammar(axiom, rules, tuple(sigma))


@given(grammars(), st.lists(st.sampled_from("abc"), max_size=8), st.lists(st.sampled_from("abc"), max_size=8))
def test_step_is_a_homomorphism(g, u, v):
    u = tuple(x for x in u if x in g.alphabet)
    v = tuple(x for x in v if x in g.alphabet)
    assert step(g, u + v) == step(g, u) + step(g, v)


@given(grammars(), st.integers(0, 5))
def test_tree_frontier_is_last_generation(g, n):
    d = derive(g, n, length_cap=10**5)
    t = derive_tree(g, n, length_cap=10**6)
    assert t.leaves() == d.final
    assert t.node_count() == sum(len(x) for x in d.generations)


@given(grammars(), st.integers(0, 6))
def test_parikh_matches_strings(g, n):
    assert parikh_profile(g, n).counts == growth_profile(derive(g, n, length_cap=10**6)).counts


def test_derive_is_deterministic_across_threads():
    g = named("efib2")
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda _: derive(g, 14).final, range(16)))
    assert len(set(results)) == 1


def test_length_laws():
    xor, fib = named("xor"), named("fib")
    d = derive(xor, 20)
    assert all(len(d[t]) == 2**t for t in range(21))
    d = derive(fib, 25)
    fibs = [1, 1]
    while len(fibs) < 26:
        fibs.append(fibs[-1] + fibs[-2])
    assert [len(x) for x in d] == fibs


def test_mapping_laws_on_random_strings():
    rng = random.Random(20260)
    for _ in range(10_000):
        n = rng.randint(1, 512)
        s = tuple(format(rng.getrandbits(n), f"0{n}b"))
        t = tuple(rng.choice("01") for _ in range(rng.randint(0, 16)))
        assert mirror(mirror(s)) == s and negative(negative(s)) == s
        assert mirror(negative(s)) == negative(mirror(s))
        assert negative(s + t) == negative(s) + negative(t)
        assert mirror(s + t) == mirror(t) + mirror(s)


def test_klein_sixteen_cases():
    w = tuple("0010111")
    for a in MappingExpr:
        for b in MappingExpr:
            c = compose(a, b)
            assert apply_expr(c, w) == apply_expr(a, apply_expr(b, w))
            assert compose(c, b) == a  # every element is its own inverse
    assert all(compose(a, a) == ID for a in MappingExpr)


@settings(max_examples=300)
@given(grammars("abcd"), st.data())
def test_classification_invariant_under_renaming(g, data):
    perm = data.draw(st.permutations(g.alphabet))
    h = tf.permute_symbols(g, dict(zip(g.alphabet, perm)))
    r1, r2 = classify(g), classify(h)
    assert (r1.symmetric, r1.asymmetry, r1.exhaustive) == (r2.symmetric, r2.asymmetry, r2.exhaustive)


def test_classification_implications_on_random_grammars():
    rng = random.Random(7)
    for _ in range(10_000):
        sigma = "01e"[:rng.randint(2, 3)]
        rules = {s: tuple(rng.choice(sigma) for _ in range(rng.randint(0, 5))) for s in sigma
                 if rng.random() < 0.9}
        g = LGrammar(("0",), rules, tuple(sigma))
        r = classify(g)
        if r.strong:
            assert r.weak
        assert not (r.symmetric and r.weak)


@given(st.lists(st.tuples(st.sampled_from("01"), st.text("01", min_size=1, max_size=3)), min_size=1, max_size=3),
       st.text("01", max_size=12))
def test_single_symbol_rules_never_frustrate(rules, sample):
    r = detect_frustration(rules, sample)
    assert not r.applicable and r.conflicts == ()


@settings(deadline=None)
@given(st.integers(2, 11), st.sampled_from(["fib", "xor", "xor-dagger", "efib2"]))
def test_decomposition_is_sound(x, name):
    d = derive(named(name), x)
    dec = decompose_self_referential(d, x)
    if dec is not None:
        assert sum((apply_expr(e, d[i]) for i, e in dec.segments), ()) == d[x]
        assert all(i < x for i, _ in dec.segments)


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.sampled_from("01"),
                       st.lists(st.integers(1, 6), min_size=1, max_size=3), min_size=2))
def test_reduction_proofs_replay(spec):
    try:
        g = tf.expand_generations(spec, 4).grammar
    except ValueError:
        return
    res = tf.reduce_to_minimal(g, "fib", search_bound=2000)
    if res.success:
        assert tf.replay(res.source, res.steps) == res.final == tf.FIB
        for s in res.steps:
            if s.kind == "prune":
                assert apply_expr(s.mapping, tuple(fib_generation(s.generation))) == s.chunk
                assert is_fib_constituent(s.chunk).yes


@given(st.text("01", min_size=1, max_size=40), st.text("01", min_size=8, max_size=8),
       st.sampled_from(["periodic", "zero"]))
def test_ca_order_independent(cells, bits, boundary):
    rt = RuleTable.from_bits(bits)
    st_ = CAState.parse(cells, boundary)
    nxt = ca_step(rt, st_)
    order = list(range(len(cells)))
    random.Random(len(cells)).shuffle(order)
    out = [None] * len(cells)
    for i in order:
        out[i] = rt(*st_.neighbourhood(i))
    assert nxt.cells == tuple(out)


@settings(max_examples=100)
@given(st.integers(1, 6), st.data())
def test_tree_ops_are_local(n, data):
    t = derive_tree(named("xor"), n)
    path = (0,) + tuple(data.draw(st.lists(st.integers(0, 1), max_size=n - 1)))
    node = t.node(path)
    if not node.children:
        return
    out = tf.tree_transform(t, tf.TreeOp("atomize", path, span=(0, 1)))
    # Subtrees off the edited path are shared, not copied.
    for j in (0, 1):
        if len(path) > 1 and path[:2] != (0, j):
            assert out.node((0, j)) is t.node((0, j))
    assert len(out.leaves()) == len(t.leaves())


def test_fib_constituents_are_fib_generations_or_images():
    # g0 and g1 share length 1, so N("1") resolves to g0; lengths are distinct from g2 on.
    for i in range(2, 12):
        g = tuple(fib_generation(i))
        for e in MappingExpr:
            c = is_fib_constituent(apply_expr(e, g))
            assert c.yes and c.generation == i
