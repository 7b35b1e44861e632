from __future__ import annotations

import random
from fractions import Fraction

import pytest

from loewner_lab import closed_forms as cf
from loewner_lab import words
from loewner_lab.closed_forms import INFINITE, Provenance
from loewner_lab.levy import LevySymbol
from loewner_lab.scalars import RatFunc, eval_at
from loewner_lab.verify import random_table

K = RatFunc.kappa()
SYM = LevySymbol.sle()


def test_expected_an_examples():
    assert cf.expected_an(2, SYM).value == -4 / (2 + K)
    assert cf.expected_an(3, SYM).value == -(K - 6) / ((1 + K) * (2 + K))
    eta = [0, 7, 9, 5, 11, 13]
    assert cf.expected_an(5, LevySymbol.table(eta)).value == 0
    assert cf.expected_an(2, SYM).provenance is Provenance.PRODUCT_AN


def test_expected_b_examples():
    assert cf.expected_b2n1(1, SYM).value == -2 / (K + 2)
    assert cf.expected_b2n1(2, SYM).value == -(K - 4) / (2 * (K + 1) * (K + 2))
    assert cf.expected_b2n1(3, LevySymbol.table([0, 2, 9, 5])).value == 0


def test_small_forms_examples():
    assert cf.quad_moment_small("a3_mu", SYM, mu=1).value == 1 / (1 + K)
    assert cf.quad_moment_small("schwarzian0", SYM).value == 36 / (1 + K)
    assert cf.quad_moment_small("a4", LevySymbol.sle(2)).value == 4
    b5 = cf.quad_moment_small("b5", SYM).value
    assert b5 == (48 + 44 * K + K * K) / (4 * (1 + K) * (2 + K) * (6 + K))


def test_small_forms_vs_level_dp():
    rng = random.Random(41)
    for _ in range(20):
        sym = LevySymbol.table([0.0] + [rng.uniform(0.05, 30) for _ in range(10)])
        dp = words.level_dp_second_moment("a", sym, 5)
        for n in (2, 3, 4, 5):
            got = cf.quad_moment_small(f"a{n}", sym).value
            assert abs(got - dp[n]) <= 1e-12 * max(1, abs(dp[n]))
        got = cf.quad_moment_small("b5", sym).value
        assert abs(got - words.level_dp_second_moment("b", sym, 2)[2]) < 1e-12


def test_fekete_szego_in_expectation():
    b5 = cf.quad_moment_small("b5", SYM).value
    assert eval_at(b5, 0) == 1
    for i in range(1, 1001):
        assert eval_at(b5, Fraction(i, 10)) < 1


@pytest.mark.parametrize("n", range(2, 9))
def test_reference_table_matches_engine(n):
    assert words.second_moment(words.a(n), SYM) == cf.sle_reference(n)


def test_reference_examples():
    assert cf.sle_reference(3) == (108 + 88 * K + K * K) / ((1 + K) * (2 + K) * (6 + K))
    assert eval_at(cf.sle_reference(6), 6) == 1
    assert eval_at(cf.sle_reference(8), 2) == 8
    with pytest.raises(ValueError):
        cf.sle_reference(9)


def test_truncated_series():
    assert cf.truncated_series_Sn(1, SYM).value == 1
    assert cf.truncated_series_Sn(2, LevySymbol.sle(6)).value == 0
    rng = random.Random(5)
    for _ in range(10):
        sym = random_table(rng, 12)
        assert cf.truncated_series_Sn(5, sym).value == cf.truncated_series_closed(5, sym).value


def test_poly_degree():
    assert cf.expected_map_poly_degree(LevySymbol.sle(6), "f") == 2
    assert cf.expected_map_poly_degree(LevySymbol.sle(2), "f") == 3
    assert cf.expected_map_poly_degree(LevySymbol.sle(4), "h") == 3
    assert cf.expected_map_poly_degree(LevySymbol.sle(3), "f") == INFINITE
