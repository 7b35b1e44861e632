from __future__ import annotations

from fractions import Fraction

import pytest

from loewner_lab.errors import SymbolicUnsupportedError, SymbolUndefinedError
from loewner_lab.levy import LevySymbol, eta, eta_symbolic, parse_symbol
from loewner_lab.scalars import RatFunc, eval_at

K = RatFunc.kappa()

ALL = [
    LevySymbol.sle(6),
    LevySymbol.sle(Fraction(7, 3)),
    LevySymbol.stable(1.5, 2),
    LevySymbol.stable(1, 2),
    LevySymbol.dendritic(),
    LevySymbol.brownian_plus_poisson(4, Fraction(1, 2)),
    LevySymbol.table(list(range(0, 200, 2))),
]


def test_examples():
    assert eta(LevySymbol.sle(6), 1) == 3
    assert all(eta(LevySymbol.stable(1, 2), n) == n for n in range(1, 20))
    assert eta(LevySymbol.dendritic(), 3) == 1


@pytest.mark.parametrize("sym", ALL, ids=lambda s: s.spec())
def test_even_and_zero_at_origin(sym):
    assert eta(sym, 0) == 0
    for k in range(1, 51):
        assert eta(sym, -k) == eta(sym, k)


def test_symbolic_values():
    sym = LevySymbol.sle()
    assert eta_symbolic(sym, 2) == 2 * K
    assert eta_symbolic(sym, 0) == RatFunc.const(0)
    assert eta_symbolic(sym, -3) == Fraction(9, 2) * K


def test_symbolic_matches_numeric():
    for k0 in (Fraction(1, 3), 2, 6, Fraction(17, 5)):
        for k in range(-6, 7):
            assert eval_at(eta_symbolic(LevySymbol.sle(), k), k0) == eta(LevySymbol.sle(k0), k)


def test_symbolic_unsupported():
    with pytest.raises(SymbolicUnsupportedError):
        eta_symbolic(LevySymbol.dendritic(), 2)


def test_table_out_of_range():
    with pytest.raises(SymbolUndefinedError, match="undefined at k"):
        eta(LevySymbol.table([0, 1, 4]), 3)


def test_dendritic_is_exactly_one_at_integers():
    sym = LevySymbol.dendritic()
    assert all(eta(sym, k) == 1 for k in range(1, 30))


def test_full_turn_poisson_is_invisible():
    assert all(eta(LevySymbol.brownian_plus_poisson(4, 3), k) == 2 * k * k for k in range(10))


@pytest.mark.parametrize("text", ["sle:6", "stable:1.5:2", "dendritic", "bp:4:0.5", "table:0,1,4,9"])
def test_cli_grammar_round_trip(text):
    sym = parse_symbol(text)
    again = parse_symbol(sym.spec())
    assert [eta(sym, k) for k in range(4)] == [eta(again, k) for k in range(4)]


def test_table_grammar_values():
    assert [eta(parse_symbol("table:0,1,4,9"), k) for k in range(4)] == [0, 1, 4, 9]
