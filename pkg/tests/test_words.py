from __future__ import annotations

import random
from fractions import Fraction

import pytest

from loewner_lab import closed_forms, words
from loewner_lab.errors import ResonanceError, SizeCapError
from loewner_lab.levy import LevySymbol
from loewner_lab.scalars import RatFunc, eval_at
from loewner_lab.verify import random_table
from loewner_lab.words import Word

K = RatFunc.kappa()
ONE = RatFunc.const(1)
SYM = LevySymbol.sle()


def test_generate_small_families():
    assert words.generate_words(words.a(2)) == [Word(-2, ((1, 1),))]
    assert sorted(words.generate_words(words.a(3)), key=len) == [Word(-2, ((2, 2),)), Word(8, ((1, 1), (1, 1)))]
    assert words.generate_words(words.b(1)) == [Word(-1, ((1, 1),))]


@pytest.mark.parametrize("n", range(2, 12))
def test_word_count_and_shape(n):
    ws = words.generate_words(words.a(n))
    assert len(ws) == 2 ** (n - 2)
    for w in ws:
        assert all(al == be > 0 for al, be in w.pairs)
        assert sum(al for al, _ in w.pairs) == n - 1


def test_single_word_expectations():
    assert words.word_expectation(Word(-2, ((1, 1),)), SYM) == -4 / (2 + K)
    assert words.word_expectation(Word(1, ((2, 2),)), LevySymbol.table([0, 1, 4])) == Fraction(1, 6)


def test_first_coefficient_sum(exact_symbols):
    for sym in exact_symbols:
        e1, e2 = sym.eta(1), sym.eta(2)
        want = Fraction(-2) * (e1 - 3) / ((1 + e1) * (2 + e2))
        assert words.family_expectation(words.a(3), sym) == want


def test_pair_examples():
    w = Word(-2, ((1, 1),))
    for sym in (LevySymbol.table([0, Fraction(5, 3), 7]), SYM):
        e1 = sym.eta(1) if not sym.is_symbolic else K / 2
        want = Fraction(4) / (1 + e1) if not sym.is_symbolic else 4 / (1 + e1)
        assert words.pair_expectation_shuffle(w, w, sym) == want
        assert words.pair_expectation_dp(w, w, sym) == want
    flat = LevySymbol.table([0] * 20)
    u = Word(1, ((1, 1),))
    assert words.pair_expectation_shuffle(u, u, flat) == 1
    assert words.pair_expectation_dp(w, w, SYM) == 8 / (2 + K)


def test_third_coefficient_pair_sum():
    assert words.second_moment(words.a(3), SYM) == (108 + 88 * K + K * K) / ((1 + K) * (2 + K) * (6 + K))


def _all_pairs(family):
    ws = words.generate_words(family)
    return [(l, r) for l in ws for r in ws]


def test_shuffle_equals_dp_exact():
    rng = random.Random(21)
    fams = [words.a(n) for n in range(2, 7)] + [words.b(n) for n in range(1, 7)]
    for _ in range(10):
        sym = random_table(rng, 14)
        for fam in fams:
            pairs = _all_pairs(fam)
            for l, r in rng.sample(pairs, min(6, len(pairs))):
                assert words.pair_expectation_shuffle(l, r, sym) == words.pair_expectation_dp(l, r, sym)


def test_shuffle_equals_dp_float():
    rng = random.Random(22)
    for _ in range(5):
        sym = LevySymbol.table([0.0] + [rng.uniform(0.1, 20) for _ in range(14)])
        for l, r in _all_pairs(words.a(5)):
            a = words.pair_expectation_shuffle(l, r, sym)
            b = words.pair_expectation_dp(l, r, sym)
            assert abs(a - b) <= 1e-12 * max(1, abs(a))


def test_shuffle_equals_dp_symbolic():
    for l, r in _all_pairs(words.a(4)):
        assert words.pair_expectation_shuffle(l, r, SYM) == words.pair_expectation_dp(l, r, SYM)


def test_shuffle_cap():
    long = Word(1, tuple((1, 1) for _ in range(9)))
    with pytest.raises(SizeCapError):
        words.pair_expectation_shuffle(long, long, LevySymbol.sle(2))


def test_second_moment_size_cap_points_to_dp():
    with pytest.raises(SizeCapError, match="level_dp"):
        words.second_moment(words.a(9), SYM)


@pytest.mark.parametrize("n", range(2, 9))
def test_theorem_values_symbolic(n):
    f = words.second_moment(words.a(n), SYM)
    assert eval_at(f, 6) == 1
    assert eval_at(f, 2) == n


@pytest.mark.parametrize("n", range(1, 7))
def test_odd_values_symbolic(n):
    f = words.second_moment(words.b(n), SYM)
    assert eval_at(f, 4) == Fraction(1, 2 * n + 1)


def test_level_dp_two_by_two(exact_symbols):
    for sym in exact_symbols:
        assert words.level_dp_second_moment("a", sym, 2, words.EXACT)[2] == Fraction(4) / (1 + sym.eta(1))


def test_level_dp_long_range():
    assert abs(words.level_dp_second_moment("a", LevySymbol.sle(2), 19)[19] - 19) < 1e-9
    assert abs(words.level_dp_second_moment("a", LevySymbol.sle(6), 19)[19] - 1) < 1e-9


@pytest.mark.parametrize("kappa", [0.5, 1.7, 3.0, 4.4, 9.0])
def test_level_dp_matches_word_pairs(kappa):
    sym = LevySymbol.sle(kappa)
    dp_a = words.level_dp_second_moment("a", sym, 8)
    dp_b = words.level_dp_second_moment("b", sym, 6)
    for n in range(2, 9):
        assert abs(dp_a[n] - words.second_moment(words.a(n), sym, words.FLOAT)) < 1e-10
    for n in range(1, 7):
        assert abs(dp_b[n] - words.second_moment(words.b(n), sym, words.FLOAT)) < 1e-10


def test_level_dp_symbolic_mode_matches_words():
    dp = words.level_dp_second_moment("a", SYM, 6, words.SYMBOLIC)
    for n in range(2, 7):
        assert dp[n] == closed_forms.sle_reference(n)


@pytest.mark.parametrize("n", range(2, 9))
def test_positive_coefficients_and_decay(n):
    f = words.second_moment(words.a(n), SYM)
    assert all(c >= 0 for c in f.num) and all(c >= 0 for c in f.den)
    dn, dd = f.degree()
    assert dd - dn == 1


def test_resonant_denominator():
    sym = LevySymbol.table([0, -1.0, 4.0])
    with pytest.raises(ResonanceError):
        words.word_expectation(Word(1, ((1, 1),)), sym)


def test_level_dp_cap():
    with pytest.raises(SizeCapError):
        words.level_dp_second_moment("a", LevySymbol.sle(2), 65)
