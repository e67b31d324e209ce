from fractions import Fraction

import pytest

from lspace import analysis
from lspace.analysis import (
    closure_probe,
    decompose_self_referential,
    fib_generation,
    fib_legal,
    growth_profile,
    is_fib_constituent,
    matches_fibonacci,
    parikh_profile,
    ratio_profiles_equal,
    repetition_stats,
)
from lspace.errors import IndexOutOfRange, NotBinary, TooShort
from lspace.golden import named
from lspace.grammar import derive, render
from lspace.mappings import ID, M, MN, N, apply_expr


def naive_max_exponent(w):
    """Quadratic-per-factor oracle: the largest |factor| / period over all factors."""
    n, best = len(w), Fraction(0)
    for i in range(n):
        for j in range(i + 1, n + 1):
            f = w[i:j]
            p = next(p for p in range(1, len(f) + 1)
                     if all(f[k] == f[k + p] for k in range(len(f) - p)))
            best = max(best, Fraction(len(f), p))
    return best


def test_fib_generation_matches_grammar(fib):
    d = derive(fib, 10)
    for i in range(11):
        assert fib_generation(i) == render(d[i])


class TestGrowth:
    def test_fib_ones(self, fib):
        assert growth_profile(derive(fib, 8)).series("1")[1:] == [1, 1, 2, 3, 5, 8, 13, 21]

    def test_efib2_ones(self, efib2):
        assert growth_profile(derive(efib2, 8)).series("1")[1:] == [1, 1, 2, 3, 5, 8, 13, 21]

    def test_parikh_agrees_with_strings(self, efib1):
        assert parikh_profile(efib1, 10).counts == growth_profile(derive(efib1, 10)).counts

    def test_parikh_reaches_beyond_length_cap(self):
        prof = parikh_profile(named("eq14"), 12)
        assert prof.totals[-1] > 10**7


class TestMatchesFibonacci:
    def test_standard(self):
        r = matches_fibonacci([1, 1, 2, 3, 5, 8, 13, 21])
        assert r.matches and r.burn_in == 0

    def test_offset(self):
        assert matches_fibonacci([2, 3, 5, 8, 13]).matches

    def test_doubling(self):
        assert not matches_fibonacci([1, 2, 4, 8]).matches

    def test_burn_in(self):
        r = matches_fibonacci([7, 1, 2, 3, 5, 8])
        assert r.matches and r.burn_in == 1

    def test_too_short(self):
        with pytest.raises(TooShort):
            matches_fibonacci([1, 1, 2])


class TestLegality:
    def test_fib_g6(self):
        assert fib_legal("0110110101101").legal

    def test_violation(self):
        r = fib_legal("01001")
        assert not r.legal and r.violations == (("00", 2),)

    def test_empty(self):
        assert fib_legal("").legal

    def test_all_occurrences(self):
        assert fib_legal("00111100").violations == (("00", 0), ("111", 2), ("111", 3), ("00", 6))

    def test_not_binary(self):
        with pytest.raises(NotBinary):
            fib_legal("012")


class TestConstituency:
    def test_101(self):
        c = is_fib_constituent("101", allow_mappings=False)
        assert c.yes and c.generation == 3 and c.mapping == ID

    def test_010_unmapped(self):
        assert not is_fib_constituent("010", allow_mappings=False).yes

    def test_010_is_negative_of_g3(self):
        # "010" is N("101"), so it is a constituent once mappings are allowed.
        c = is_fib_constituent("010")
        assert c.yes and c.generation == 3 and c.mapping == N

    def test_10(self):
        c = is_fib_constituent("10")
        assert c.yes and c.generation == 2 and c.mapping in (N, M)

    def test_mn_image(self):
        c = is_fib_constituent("01001010")
        assert c.yes and c.generation == 5 and c.mapping == MN

    def test_wrong_length(self):
        assert not is_fib_constituent("0110").yes


class TestRatios:
    def test_eq19_eq20(self):
        r = ratio_profiles_equal(named("eq19"), named("eq20"), ("0", "1"), 6)
        assert r.equal and r.first_difference is None

    def test_fib_vs_xor(self, fib, xor):
        r = ratio_profiles_equal(fib, xor, ("0", "1"), 6)
        assert not r.equal and r.first_difference <= 2
        assert all(x == 1 for x in r.profiles[1].ratios)

    def test_reflexive(self, efib2):
        assert ratio_profiles_equal(efib2, efib2).equal

    def test_zero_denominator(self, fib):
        # t=1 of Fib is "1": no zeros over one one.
        assert analysis.ratio_profile(fib, ("1", "0"), 2).ratios[0] is None


class TestDecompose:
    def test_fib_5(self, fib):
        d = decompose_self_referential(derive(fib, 5), 5)
        assert d.segments == ((3, ID), (4, ID)) and d.kind == "perfect"

    def test_xor_3(self, xor):
        d = decompose_self_referential(derive(xor, 3), 3)
        assert d.segments == ((2, ID), (2, N)) and d.kind == "partial"

    def test_fib_7(self, fib):
        d = decompose_self_referential(derive(fib, 7), 7)
        assert d.segments == ((5, ID), (6, ID))

    def test_out_of_range(self, fib):
        with pytest.raises(IndexOutOfRange):
            decompose_self_referential(derive(fib, 3), 4)

    def test_segments_concatenate(self, xor):
        d = derive(xor, 6)
        for x in range(2, 7):
            dec = decompose_self_referential(d, x)
            assert sum((apply_expr(e, d[i]) for i, e in dec.segments), ()) == d[x]


class TestRepetition:
    def test_thue_morse_1024(self, xor):
        w = derive(xor, 10).final
        st = repetition_stats(w, 512)
        assert not st.has_cube and st.max_exponent == 2

    def test_aaa(self):
        st = repetition_stats("aaa", 1)
        assert st.max_exponent == 3 and st.has_cube

    def test_witness(self):
        st = repetition_stats("abaab")
        factor, pos, period = st.witness
        assert Fraction(len(factor), period) == st.max_exponent == Fraction(2)
        assert render(factor) == "aa"

    @pytest.mark.parametrize("w", ["0", "01", "abcab", "0110100110010110", "aabaabaa", "10101101011"])
    def test_against_naive(self, w):
        assert repetition_stats(w).max_exponent == naive_max_exponent(w)

    def test_fib_word_exponent(self, fib):
        # The finite Fib prefix has exponent below the infinite word's 2 + golden ratio.
        w = derive(fib, 9).final
        e = repetition_stats(w).max_exponent
        assert e == naive_max_exponent(w) and 3 < e < 3.62

    def test_max_period_too_large(self):
        with pytest.raises(ValueError):
            repetition_stats("01", 3)


class TestClosure:
    def test_star(self):
        r = closure_probe({"01101"}, op="star", bound=3)
        assert r.holds_at_bound and r.checked == 4

    def test_concat(self):
        r = closure_probe({"10"}, {"011"}, op="concat")
        assert not r.holds_at_bound and render(r.counterexample) == "10011"

    def test_union(self):
        assert closure_probe({"01", "101"}, {"0110110101101"}, op="union").holds_at_bound


def test_emergence(fib):
    em = analysis.fib_emergence(fib, 12)
    assert em["1"]["recurrence"] and em["0"]["recurrence"]
    assert em["1"]["counts"][:8] == [1, 1, 2, 3, 5, 8, 13, 21]
