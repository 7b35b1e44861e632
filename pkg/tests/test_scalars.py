from __future__ import annotations

import random
from fractions import Fraction

import pytest

from loewner_lab import scalars
from loewner_lab.errors import PoleError
from loewner_lab.scalars import RatFunc, eval_at, parse, ratfunc_arith

K = RatFunc.kappa()
ONE = RatFunc.const(1)


def test_sum_of_simple_fractions():
    got = ratfunc_arith(ONE / (K + 1), ONE / (K + 3), "+")
    assert got == (2 * K + 4) / ((K + 1) * (K + 3))


def test_kappa_times_inverse_is_one():
    assert ratfunc_arith(K, ONE / K, "*") == ONE


def test_self_division_is_one():
    f = (K - 6) / (K + 2)
    assert ratfunc_arith(f, f, "/") == ONE


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ratfunc_arith(K, RatFunc.const(0), "/")


def test_eval_third_moment_table_value():
    f = (108 + 88 * K + K * K) / ((1 + K) * (2 + K) * (6 + K))
    assert eval_at(f, 6) == 1
    assert eval_at(f, 2) == 3
    assert eval_at(K / (K + 2), 0) == 0


def test_eval_at_pole_raises():
    with pytest.raises(PoleError):
        eval_at(ONE / (K + 2), -2)


def test_canonical_form():
    f = (2 * K + 2) / (-4 * K - 4)
    assert f == RatFunc.const(Fraction(-1, 2))
    g = (K * K - 1) / (K - 1)
    assert g == K + 1
    assert g.den[-1] > 0


def _random_ratfunc(rng: random.Random) -> RatFunc:
    def poly(deg):
        p = RatFunc.const(0)
        for _ in range(deg + 1):
            p = p * K + rng.randint(-5, 5)
        return p

    num = poly(rng.randint(0, 3))
    den = poly(rng.randint(0, 3))
    while den.is_zero():
        den = poly(2)
    return num / den


def test_eval_is_a_homomorphism():
    rng = random.Random(7)
    ops = {"+": lambda x, y: x + y, "-": lambda x, y: x - y, "*": lambda x, y: x * y, "/": lambda x, y: x / y}
    for _ in range(25):
        f, g = _random_ratfunc(rng), _random_ratfunc(rng)
        for op, fn in ops.items():
            if op == "/" and g.is_zero():
                continue
            h = ratfunc_arith(f, g, op)
            hits = 0
            for _ in range(60):
                k0 = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
                try:
                    want = fn(eval_at(f, k0), eval_at(g, k0))
                    got = eval_at(h, k0)
                except (PoleError, ZeroDivisionError):
                    continue
                assert got == want
                hits += 1
                if hits == 20:
                    break
            assert hits == 20


def test_canonicalization_idempotent():
    rng = random.Random(3)
    for _ in range(20):
        f = _random_ratfunc(rng)
        assert RatFunc(f.num, f.den) == f
        assert (f.num, f.den) == (RatFunc(f.num, f.den).num, RatFunc(f.num, f.den).den)


def test_render_parse_round_trip():
    rng = random.Random(9)
    for _ in range(30):
        f = _random_ratfunc(rng)
        assert parse(f.render()) == f
        assert parse(f.render("kappa")) == f


def test_parse_accepts_factored_text():
    assert parse("(108+88k+k^2)/((1+k)(2+k)(6+k))") == (108 + 88 * K + K * K) / ((1 + K) * (2 + K) * (6 + K))


def test_float_scalars_share_helpers():
    assert scalars.inv(4.0) == 0.25
    assert scalars.scalar_equal(0.1 + 0.2, 0.3, tol=1e-15)
    assert scalars.to_float(Fraction(1, 4)) == 0.25
    assert scalars.is_exact(Fraction(1, 3)) and not scalars.is_exact(0.5)
