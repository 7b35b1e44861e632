"""Iterated-integral words for Loewner coefficients and their expectations.

A word is a coefficient times an ordered tuple of ``(alpha, beta)`` pairs,
outermost integral first. Its expectation is the coefficient times the
product over suffixes of ``[sum beta + eta(sum alpha)]^-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .errors import SizeCapError, SymbolicUnsupportedError
from .levy import SLE, LevySymbol
from .scalars import FactoredRatFunc, RatFunc, inv

WHOLE_PLANE = "a"  # coefficients a_n of f
ODDIFIED = "b"  # coefficients b_{2n+1} of the odd transform h

SYMBOLIC, EXACT, FLOAT, AUTO = "symbolic", "exact", "float", "auto"

SHUFFLE_CAP = 16
SYMBOLIC_N_MAX = 8
FLOAT_N_MAX = 10
LEVEL_DP_N_MAX = 64


@dataclass(frozen=True)
class Word:
    coeff: object
    pairs: tuple

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a word needs at least one (alpha, beta) pair")
        if any(b < 1 for _, b in self.pairs):
            raise ValueError("beta entries must be positive")

    def conjugate(self) -> "Word":
        return Word(self.coeff, tuple((-a, b) for a, b in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class CoeffFamily:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (WHOLE_PLANE, ODDIFIED):
            raise ValueError(f"family kind must be 'a' or 'b', got {self.kind!r}")
        lo = 2 if self.kind == WHOLE_PLANE else 1
        if int(self.n) != self.n or self.n < lo:
            raise ValueError(f"family {self.kind} needs n >= {lo}")

    @property
    def label(self) -> str:
        return f"a_{self.n}" if self.kind == WHOLE_PLANE else f"b_{2 * self.n + 1}"

    @property
    def max_frequency(self) -> int:
        return self.n - 1 if self.kind == WHOLE_PLANE else self.n


def a(n: int) -> CoeffFamily:
    return CoeffFamily(WHOLE_PLANE, n)


def b(n: int) -> CoeffFamily:
    return CoeffFamily(ODDIFIED, n)


# ---------------------------------------------------------------------------
# word generation


def _chains(top: int, bottom: int):
    """Strictly decreasing chains top = c_0 > c_1 > ... > c_r = bottom."""
    inner = range(bottom + 1, top)
    for size in range(len(inner) + 1):
        for mid in itertools.combinations(reversed(inner), size):
            yield (top, *mid, bottom)


def generate_words(family: CoeffFamily) -> list[Word]:
    words = []
    if family.kind == WHOLE_PLANE:
        for chain in _chains(family.n, 1):
            coeff = 1
            for lvl in chain[1:]:
                coeff *= -2 * lvl
            pairs = tuple((hi - lo, hi - lo) for hi, lo in zip(chain, chain[1:]))
            words.append(Word(coeff, pairs))
    else:
        for chain in _chains(family.n, 0):
            coeff = 1
            for lvl in chain[1:]:
                coeff *= -(2 * lvl + 1)
            pairs = tuple((hi - lo, hi - lo) for hi, lo in zip(chain, chain[1:]))
            words.append(Word(coeff, pairs))
    return words


# ---------------------------------------------------------------------------
# scalar modes


class _Arith:
    """Eta lookup plus constants for one scalar mode."""

    def __init__(self, symbol: LevySymbol, mode: str):
        self.symbol, self.mode = symbol, mode
        self._cache: dict[int, object] = {}
        if mode == SYMBOLIC:
            if symbol.variant != SLE:
                raise SymbolicUnsupportedError(f"symbolic mode unsupported for {symbol.variant} symbols")
            self.one = FactoredRatFunc([1])
        elif mode == EXACT:
            self.one = Fraction(1)
        elif mode == FLOAT:
            self.one = 1.0
        else:
            raise ValueError(f"unknown mode {mode!r}")

    def eta(self, k: int):
        k = abs(k)
        val = self._cache.get(k)
        if val is None:
            if self.mode == SYMBOLIC:
                val = FactoredRatFunc.from_poly([0, k * k], 2)
            else:
                raw = self.symbol.eta(k)
                if isinstance(raw, RatFunc):
                    raise ValueError("a formal-kappa symbol needs mode='symbolic'")
                if self.mode == EXACT:
                    if isinstance(raw, float):
                        raise ValueError(f"eta_{k} = {raw} is not exact; use mode='float'")
                    val = Fraction(raw)
                else:
                    val = float(raw)
            self._cache[k] = val
        return val

    def finish(self, value):
        if self.mode == SYMBOLIC:
            return value.to_ratfunc()
        return value


def resolve_mode(symbol: LevySymbol, mode: str = AUTO, kmax: int = 1) -> str:
    if mode != AUTO:
        return mode
    if symbol.is_symbolic:
        return SYMBOLIC
    for k in range(kmax + 1):
        if isinstance(symbol.eta(k), float):
            return FLOAT
    return EXACT


# ---------------------------------------------------------------------------
# single words


def _suffix_factors(pairs, ar: _Arith):
    val = ar.one
    bsum = asum = 0
    for alpha, beta in reversed(pairs):
        bsum += beta
        asum += alpha
        val = val * inv(bsum + ar.eta(asum))
    return val


def word_expectation(w: Word, symbol: LevySymbol, mode: str = AUTO):
    kmax = sum(abs(al) for al, _ in w.pairs)
    ar = _Arith(symbol, resolve_mode(symbol, mode, kmax))
    return ar.finish(_suffix_factors(w.pairs, ar) * w.coeff)


def family_expectation(family: CoeffFamily, symbol: LevySymbol, mode: str = AUTO):
    """E(a_n) or E(b_{2n+1}) as the sum of word expectations."""
    ar = _Arith(symbol, resolve_mode(symbol, mode, family.max_frequency))
    total = None
    for w in generate_words(family):
        term = _suffix_factors(w.pairs, ar) * w.coeff
        total = term if total is None else total + term
    return ar.finish(total)


# ---------------------------------------------------------------------------
# word pairs


def pair_expectation_shuffle(left: Word, right: Word, symbol: LevySymbol, mode: str = AUTO, cap: int = SHUFFLE_CAP):
    """Brute-force sum over all interleavings of ``left`` and ``conj(right)``."""
    k, l = len(left), len(right)
    if k + l > cap:
        raise SizeCapError(f"oracle size cap exceeded: {k}+{l} > {cap}")
    kmax = sum(abs(al) for al, _ in left.pairs) + sum(abs(al) for al, _ in right.pairs)
    ar = _Arith(symbol, resolve_mode(symbol, mode, kmax))
    rpairs = right.conjugate().pairs
    total = None
    for pos in itertools.combinations(range(k + l), k):
        merged = []
        li = ri = 0
        chosen = set(pos)
        for t in range(k + l):
            if t in chosen:
                merged.append(left.pairs[li])
                li += 1
            else:
                merged.append(rpairs[ri])
                ri += 1
        term = _suffix_factors(merged, ar)
        total = term if total is None else total + term
    return ar.finish(total * (left.coeff * right.coeff))


def _suffix_sums(pairs):
    A = [0] * (len(pairs) + 1)
    B = [0] * (len(pairs) + 1)
    for i in range(len(pairs) - 1, -1, -1):
        A[i] = A[i + 1] + pairs[i][0]
        B[i] = B[i + 1] + pairs[i][1]
    return A, B


def _pair_value(lp: tuple, rp: tuple, ar: _Arith, memo: dict):
    """V(0, 0) of the suffix recursion; ``rp`` is unconjugated (alphas enter with minus)."""
    Al, Bl = _suffix_sums(lp)
    Ar, Br = _suffix_sums(rp)
    nl, nr = len(lp), len(rp)

    def V(i, j):
        key = (lp[i:], rp[j:])
        hit = memo.get(key)
        if hit is not None:
            return hit
        if i == nl and j == nr:
            val = ar.one
        else:
            if i < nl and j < nr:
                acc = V(i + 1, j) + V(i, j + 1)
            elif i < nl:
                acc = V(i + 1, j)
            else:
                acc = V(i, j + 1)
            val = acc * inv(Bl[i] + Br[j] + ar.eta(Al[i] - Ar[j]))
        memo[key] = val
        return val

    return V(0, 0)


def pair_expectation_dp(left: Word, right: Word, symbol: LevySymbol, mode: str = AUTO, memo: dict | None = None):
    """E[left * conj(right)] by memoized recursion over remaining suffixes."""
    kmax = sum(abs(al) for al, _ in left.pairs) + sum(abs(al) for al, _ in right.pairs)
    ar = _Arith(symbol, resolve_mode(symbol, mode, kmax))
    v = _pair_value(left.pairs, right.pairs, ar, {} if memo is None else memo)
    return ar.finish(v * (left.coeff * right.coeff))


def second_moment(family: CoeffFamily, symbol: LevySymbol, mode: str = AUTO):
    """E|a_n|^2 (or E|b_{2n+1}|^2) summed over all word pairs."""
    mode = resolve_mode(symbol, mode, 2 * family.max_frequency)
    cap = SYMBOLIC_N_MAX if mode == SYMBOLIC else FLOAT_N_MAX
    if family.n > cap:
        raise SizeCapError(
            f"word-pair path limited to n <= {cap} in {mode} mode; use level_dp_second_moment"
        )
    ar = _Arith(symbol, mode)
    words = generate_words(family)
    memo: dict = {}
    total = None
    for wl in words:
        row = None
        for wr in words:
            term = _pair_value(wl.pairs, wr.pairs, ar, memo) * wr.coeff
            row = term if row is None else row + term
        row = row * wl.coeff
        total = row if total is None else total + row
    return ar.finish(total)


# ---------------------------------------------------------------------------
# level DP


def _level_dp_generic(kind: str, n_max: int, ar: _Arith) -> dict:
    """Level-pair recursion over any scalar mode (exact / symbolic)."""
    if kind == WHOLE_PLANE:
        lo, shift = 1, -2

        def weight(k):
            return -2 * k
    else:
        lo, shift = 0, 0

        def weight(k):
            return -(2 * k + 1)

    V: dict = {(lo, lo): ar.one}
    for s in range(2 * lo + 1, 2 * n_max + 1):
        for kl in range(max(lo, s - n_max), min(n_max, s - lo) + 1):
            kr = s - kl
            acc = None
            for kp in range(lo, kl):
                term = V[(kp, kr)] * weight(kp)
                acc = term if acc is None else acc + term
            for kp in range(lo, kr):
                term = V[(kl, kp)] * weight(kp)
                acc = term if acc is None else acc + term
            V[(kl, kr)] = acc * inv(kl + kr + shift + ar.eta(kl - kr))
    start = 2 if kind == WHOLE_PLANE else 1
    return {n: ar.finish(V[(n, n)]) for n in range(start, n_max + 1)}


def level_dp_second_moment(kind: str, symbol: LevySymbol, n_max: int, mode: str = FLOAT) -> dict:
    """Table n -> E|a_n|^2 (kind 'a') or n -> E|b_{2n+1}|^2 (kind 'b').

    Float mode runs the compiled kernel; exact and symbolic modes use the
    same recursion over Fractions / rational functions.
    """
    if isinstance(kind, CoeffFamily):
        kind = kind.kind
    if kind not in (WHOLE_PLANE, ODDIFIED):
        raise ValueError("kind must be 'a' or 'b'")
    if not 1 <= n_max <= LEVEL_DP_N_MAX:
        raise SizeCapError(f"n_max must lie in 1..{LEVEL_DP_N_MAX}")
    mode = resolve_mode(symbol, mode, 2 * n_max) if mode == AUTO else mode
    if mode != FLOAT:
        return _level_dp_generic(kind, n_max, _Arith(symbol, mode))
    if symbol.is_symbolic:
        raise ValueError("float level DP needs a numeric symbol")
    etas = [float(symbol.eta(k)) for k in range(n_max + 1)]
    diag = _kernels.level_dp(kind == WHOLE_PLANE, etas, n_max)
    start = 2 if kind == WHOLE_PLANE else 1
    return {n: float(diag[n]) for n in range(start, n_max + 1)}
