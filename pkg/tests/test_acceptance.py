"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line (shown in the terminal
summary) and then asserts.  Tolerances are exact and each criterion has a
wall-clock limit.  Run alone with ``pytest tests/test_acceptance.py -v``
or as a script: ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time

import pytest

from lspace import analysis, classify, transforms
from lspace.automata import MAJORITY, NEIGHBOURHOODS, CAState, ca_step
from lspace.golden import (
    CHOMSKY_3,
    EFIB1_ROWS,
    EFIB2_ROWS,
    FIB_G7_PRINTED,
    FIB_ROWS,
    FRUSTRATION_RULES,
    XOR_DAGGER_ROWS,
    XOR_ROWS,
    label,
    named,
)
from lspace.grammar import derive, derive_sequential, step
from lspace.mappings import mirror, negative

LINES: list[str] = []


def record(num: int, title: str, ok: bool, detail: str, seconds: float, limit: float) -> bool:
    passed = ok and seconds < limit
    timing = f"{seconds:.2f}s/{limit:g}s"
    LINES.append(f"{'PASS' if passed else 'FAIL'}  [{num:2d}] {title:<24} {timing:<14} {detail}")
    print(LINES[-1])
    return passed


def timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# -- criteria -------------------------------------------------------------------

def golden_derivations():
    printed = {
        "fib": FIB_ROWS + (FIB_G7_PRINTED,),
        "xor": XOR_ROWS,
        "xor-dagger": XOR_DAGGER_ROWS[:4],
        "efib1": EFIB1_ROWS,
        "efib2": EFIB2_ROWS,
    }
    bad = []
    for name, rows in printed.items():
        got = derive(named(name), len(rows) - 1).texts()
        bad += [f"{name} g{t}" for t, (a, b) in enumerate(zip(got, rows)) if a != b]
    return not bad, "byte-exact" if not bad else "mismatch: " + ", ".join(bad)


def fibonacci_emergence():
    failures = []
    for name in ("fib", "efib1", "efib2", "eq12a", "eq14"):
        for sym, v in analysis.fib_emergence(named(name), 12).items():
            if not v["recurrence"]:
                failures.append(f"{name}/{sym}")
    ones = analysis.growth_profile(derive(named("fib"), 8)).series("1")[1:]
    ok = not failures and ones == [1, 1, 2, 3, 5, 8, 13, 21]
    return ok, f"Fib ones {ones}" + (f"; no recurrence for {', '.join(failures)}" if failures else "")


def classification_table():
    want = {"xor": "symmetric", "xor-dagger": "symmetric", "fib": "strong", "g-i": "strong",
            "eq9": "strong", "efib1": "weak", "efib2": "strong"}
    got = {n: label(classify.classify(named(n))) for n in want}
    bad = [f"{n}={got[n]}" for n in want if got[n] != want[n]]
    return not bad, "7/7 labels" if not bad else "wrong: " + ", ".join(bad)


def random_binary(rng, n):
    return tuple(format(rng.getrandbits(n), f"0{n}b"))


def mapping_laws():
    rng = random.Random(4)
    for _ in range(10_000):
        s = random_binary(rng, rng.randint(1, 512))
        t = random_binary(rng, rng.randint(1, 512))
        if not (mirror(mirror(s)) == s and negative(negative(s)) == s
                and mirror(negative(s)) == negative(mirror(s))
                and negative(s + t) == negative(s) + negative(t)
                and mirror(s + t) == mirror(t) + mirror(s)):
            return False, f"law broken on {''.join(s)!r}"
    return True, "10^4 random strings"


def recurrence_identity():
    d = derive(named("fib"), 25)
    bad = [t for t in range(2, 26) if d[t] != d[t - 2] + d[t - 1]]
    return not bad, "t=2..25" if not bad else f"broken at {bad}"


def legality():
    fib = named("fib")
    s, total, bad = fib.axiom, 0, []
    t = 0
    while total + len(s) <= 10**6:
        total += len(s)
        if not analysis.fib_legal(s).legal:
            bad.append(t)
        s, t = step(fib, s), t + 1
    eq11 = derive(named("eq11"), 4)
    hit = next((t for t, g in enumerate(eq11)
                if any(gram == "00" for gram, _ in analysis.fib_legal(g).violations)), None)
    ok = not bad and hit is not None
    return ok, f"{total} Fib symbols clean; eq11 shows 00 at g{hit}"


def thue_morse():
    # The run scan is O(n * max_period); the all-factors brute force would be
    # O(n^3) here and is only used as an oracle on short prefixes in unit tests.
    w = derive(named("xor"), 14).final
    st = analysis.repetition_stats(w)
    ok = len(w) == 2**14 and not st.has_cube and st.max_exponent == 2
    return ok, f"|w|={len(w)} max exponent {st.max_exponent} cube={st.has_cube}"


def ratio_equivalence():
    r = analysis.ratio_profiles_equal(named("eq19"), named("eq20"), ("0", "1"), 6)
    f = analysis.ratio_profiles_equal(named("fib"), named("xor"), ("0", "1"), 6)
    ok = r.equal and not f.equal and f.first_difference is not None and f.first_difference <= 2
    return ok, f"eq19=eq20 at t=1..6; Fib/XOR differ at t={f.first_difference}"


def pruning_equivalence():
    out = []
    for name in ("eq13", "eq12a"):
        p = transforms.reduce_to_minimal(named(name), "fib", search_bound=10_000)
        if not p.success or transforms.replay(p.source, p.steps) != transforms.FIB:
            return False, f"{name} did not reduce"
        out.append(f"{name} in {len(p.steps)} steps")
    x = transforms.reduce_to_minimal(named("xor"), "fib", search_bound=10_000)
    ok = not x.success
    return ok, "; ".join(out) + ("; xor fails" if ok else "; xor unexpectedly reduced")


def frustration():
    r = classify.detect_frustration(FRUSTRATION_RULES, "0101")
    ok = len(r.conflicts) >= 2 and r.distinct_tilings >= 2
    return ok, f"{len(r.conflicts)} conflicts, {r.distinct_tilings} maximal tilings"


def ca_table():
    printed = dict(zip(NEIGHBOURHOODS, (0, 0, 0, 1, 0, 1, 1, 1)))
    rows = sum(MAJORITY(*eta) == printed[eta] for eta in NEIGHBOURHOODS)
    cells = "01101"
    oracle = "".join(str(printed[(int(cells[i - 1]), int(cells[i]), int(cells[(i + 1) % 5]))])
                     for i in range(5))
    got = str(ca_step(MAJORITY, CAState.parse(cells)))
    return rows == 8 and got == oracle == "11110", f"{rows}/8 rows; 01101 -> {got}"


def cnf_contrast():
    seq = derive_sequential(named("chomsky-2"), 50)
    got = tuple(" ".join(f) for f in seq.forms)
    return got == CHOMSKY_3, f"{len(got)} lines ending {got[-1]!r}"


CRITERIA = [
    (1, "golden derivations", golden_derivations, 1),
    (2, "fibonacci emergence", fibonacci_emergence, 1),
    (3, "classification table", classification_table, 1),
    (4, "mapping laws", mapping_laws, 5),
    (5, "recurrence identity", recurrence_identity, 5),
    (6, "legality", legality, 10),
    (7, "thue-morse", thue_morse, 60),
    (8, "ratio equivalence", ratio_equivalence, 1),
    (9, "pruning equivalence", pruning_equivalence, 10),
    (10, "frustration", frustration, 1),
    (11, "cellular automaton", ca_table, 1),
    (12, "sequential derivation", cnf_contrast, 1),
]


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"c{n:02d}-{t.replace(' ', '-')}"
                                                            for n, t, _, _ in CRITERIA])
def test_criterion(num, title, fn, limit):
    ok, detail, seconds = timed(fn)
    assert record(num, title, ok, detail, seconds, limit), detail


if __name__ == "__main__":
    results = [record(n, t, *timed(fn), lim) for n, t, fn, lim in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
