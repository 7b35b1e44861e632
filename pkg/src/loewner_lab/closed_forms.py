"""Closed-form moment formulas used as oracles for the word engine and the simulator."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .levy import LevySymbol
from .scalars import RatFunc, inv
from .words import AUTO, EXACT, FLOAT, SYMBOLIC, resolve_mode


class Provenance(str, enum.Enum):
    PRODUCT_AN = "product formula for E(a_n)"
    PRODUCT_B = "product formula for E(b_{2n+1})"
    SMALL_A2 = "second moment of a_2"
    SMALL_A3 = "second moment of a_3"
    SMALL_A3_MU = "second moment of a_3 - mu a_2^2"
    SMALL_A4 = "second moment of a_4 (general eta)"
    SMALL_A5 = "second moment of a_5 (general eta)"
    SMALL_B5 = "second moment of b_5"
    SCHWARZIAN = "second moment of the Schwarzian at 0"
    SLE_TABLE = "tabulated SLE rational function"
    TRUNCATED_SERIES = "truncated series of n E(a_n)"
    TRUNCATED_SERIES_CLOSED = "closed form of the truncated series"


@dataclass(frozen=True)
class MomentFormulaResult:
    value: object
    provenance: Provenance

    def __float__(self) -> float:
        return float(self.value)


def _eta_list(symbol: LevySymbol, kmax: int, mode: str = AUTO) -> list:
    mode = resolve_mode(symbol, mode, kmax)
    out = []
    for k in range(kmax + 1):
        if mode == SYMBOLIC:
            out.append(symbol.eta_symbolic(k))
        elif mode == EXACT:
            out.append(Fraction(symbol.eta(k)))
        elif mode == FLOAT:
            out.append(float(symbol.eta(k)))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out


def _one(e):
    return RatFunc.const(1) if isinstance(e[0], RatFunc) else (Fraction(1) if isinstance(e[0], Fraction) else 1.0)


def expected_an(n: int, symbol: LevySymbol, mode: str = AUTO) -> MomentFormulaResult:
    """E(a_n) = prod_{k=0}^{n-2} (eta_k - k - 2) / (eta_{k+1} + k + 1)."""
    if n < 2:
        raise DomainError("expected_an needs n >= 2")
    e = _eta_list(symbol, n - 1, mode)
    val = _one(e)
    for k in range(n - 1):
        val = val * (e[k] - k - 2) * inv(e[k + 1] + k + 1)
    return MomentFormulaResult(val, Provenance.PRODUCT_AN)


def expected_b2n1(n: int, symbol: LevySymbol, mode: str = AUTO) -> MomentFormulaResult:
    """E(b_{2n+1}) = prod_{k=0}^{n-1} (eta_k - k - 1) / (eta_{k+1} + k + 1)."""
    if n < 1:
        raise DomainError("expected_b2n1 needs n >= 1")
    e = _eta_list(symbol, n, mode)
    val = _one(e)
    for k in range(n):
        val = val * (e[k] - k - 1) * inv(e[k + 1] + k + 1)
    return MomentFormulaResult(val, Provenance.PRODUCT_B)


# ---------------------------------------------------------------------------
# second moments of the first coefficients


def _a5_q(e1, e2, e3):
    # the eta_1^2 coefficient is 540 (a printed 520 disagrees with the word engine)
    poly = (
        24 * e1**2 * e2**2 + 9 * e1**2 * e2 * e3**2 + 72 * e1**2 * e2 * e3 + 39 * e1**2 * e2
        + 36 * e1**2 * e3**2 + 288 * e1**2 * e3 + 540 * e1**2
        + 19 * e1 * e2**3 * e3 + 77 * e1 * e2**3 + 56 * e1 * e2**2 * e3 + 472 * e1 * e2**2
        - 36 * e1 * e2 * e3**2 - 816 * e1 * e2 * e3 - 3660 * e1 * e2
        - 144 * e1 * e3**2 - 1152 * e1 * e3 - 2160 * e1 + 75 * e2**3 * e3 + 285 * e2**3
        + 348 * e2**2 * e3**2 + 2952 * e2**2 * e3 + 6420 * e2**2 + 3507 * e2 * e3**2
        + 26184 * e2 * e3 + 43245 * e2 + 8460 * e3**2 + 67680 * e3 + 126900
    )
    return poly * Fraction(4, 3) if not isinstance(poly, float) else poly * (4.0 / 3.0)


SMALL_KINDS = ("a2", "a3", "a3_mu", "a4", "a5", "b5", "schwarzian0")


def quad_moment_small(kind: str, symbol: LevySymbol, mu=None, mode: str = AUTO) -> MomentFormulaResult:
    """Closed-form E|.|^2 for a_2, a_3, a_3 - mu a_2^2, a_4, a_5, b_5 and the Schwarzian at 0."""
    if kind not in SMALL_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {SMALL_KINDS}")
    e = _eta_list(symbol, 4 if kind == "a5" else 3, mode)
    e1, e2, e3 = e[1], e[2], e[3]
    if kind == "a2":
        return MomentFormulaResult(4 * inv(1 + e1), Provenance.SMALL_A2)
    if kind == "a3":
        val = (24 + 2 * (e1 - 1) * (e1 - 3) * inv(2 + e2)) * inv((1 + e1) * (3 + e1))
        return MomentFormulaResult(val, Provenance.SMALL_A3)
    if kind == "a3_mu":
        if mu is None:
            raise ValueError("a3_mu needs a real mu")
        t = 1 - (Fraction(mu) if not isinstance(mu, float) else mu)
        num = 32 * t * t * (3 + e2) - 8 * t * (6 + 2 * e1 + e2) + 2 * (1 + e1) * (3 + e1)
        return MomentFormulaResult(num * inv((1 + e1) * (2 + e2) * (3 + e1)), Provenance.SMALL_A3_MU)
    if kind == "schwarzian0":
        return MomentFormulaResult(72 * inv(2 + e2), Provenance.SCHWARZIAN)
    if kind == "b5":
        val = (6 + 3 * e2 - e1 + e1 * e1 / 2) * inv((1 + e1) * (3 + e1) * (2 + e2))
        return MomentFormulaResult(val, Provenance.SMALL_B5)
    if kind == "a4":
        d1 = (e1 + 1) * (e1 + 3) * (e1 + 5)
        first = 192 * inv(d1)
        tail = 4 * (e1 - 1) * (e1 - 3) * (e2 * (e2 - 4) * (e1 + 3) + 24 * (e2 + 4) * (e3 + 3))
        den = 3 * d1 * (e2 + 2) * (e2 + 4) * (e3 + 3)
        return MomentFormulaResult(first + tail * inv(den), Provenance.SMALL_A4)
    e4 = e[4]
    d1 = (e1 + 1) * (e1 + 3) * (e1 + 5) * (e1 + 7)
    first = 1920 * inv(d1)
    bracket = (
        e2 * (e2 - 4) * (e1 + 3) * (e3 + 1) * (e3 - 5) * (e1 + 5) * (e2 + 4) * inv(e4 + 4)
        + _a5_q(e1, e2, e3)
    )
    den = d1 * (e2 + 2) * (e2 + 4) * (e2 + 6) * (e3 + 3) * (e3 + 5)
    return MomentFormulaResult(first + (e1 - 1) * (e1 - 3) * bracket * inv(den), Provenance.SMALL_A5)


# ---------------------------------------------------------------------------
# tabulated SLE second moments: scale * num(k) / prod (c0 + c1 k)^m

_SLE_TABLE = {
    2: (8, [1], [(2, 1, 1)]),
    3: (1, [108, 88, 1], [(1, 1, 1), (2, 1, 1), (6, 1, 1)]),
    4: (
        Fraction(8, 9),
        [8640, 22896, 18288, 4576, 104, 1],
        [(10, 1, 1), (2, 3, 1), (6, 1, 1), (1, 1, 1), (2, 1, 2)],
    ),
    5: (
        Fraction(1, 36),
        [18144000, 87882624, 153156096, 119492832, 42644896, 6142312, 194336, 3242, 27],
        [(14, 1, 1), (2, 3, 1), (10, 1, 1), (1, 2, 1), (6, 1, 1), (3, 1, 1), (1, 1, 1), (2, 1, 2)],
    ),
    6: (
        Fraction(2, 225),
        [2939328000, 21233664000, 58263304320, 76716664128, 50825787744, 16419864848,
         2277912280, 90749820, 2062556, 29563, 216],
        [(18, 1, 1), (2, 3, 1), (14, 1, 1), (1, 2, 1), (10, 1, 1), (6, 1, 1), (2, 5, 1),
         (3, 1, 1), (1, 1, 1), (2, 1, 2)],
    ),
    7: (
        Fraction(1, 8100),
        [63371911680000, 749049576192000, 3711483045734400, 10110569026936320,
         16725481436226816, 17547915006086400, 11854768997862912, 5130607642056896,
         1386550697705712, 221861771218136, 19121503739240, 787796136854, 20594712527,
         373838334, 4479353, 27000],
        [(22, 1, 1), (1, 3, 1), (2, 5, 1), (18, 1, 1), (1, 2, 1), (14, 1, 1), (2, 3, 1),
         (10, 1, 1), (6, 1, 1), (5, 1, 1), (3, 1, 1), (1, 1, 2), (2, 1, 3)],
    ),
    8: (
        Fraction(2, 99225),
        [158176291553280000, 2435069931098112000, 16005106174366310400,
         59063686024095313920, 135640094878259859456, 203508494170475323392,
         204258207932541043200, 138392538501661946112, 63191729416067875840,
         19218418658636100992, 3802657434377773600, 471116720002819536, 34674813906653712,
         1476227672190480, 42715714646750, 906444920407, 14031668642, 143757261, 729000],
        [(2, 7, 1), (2, 5, 1), (26, 1, 1), (1, 3, 1), (22, 1, 1), (1, 2, 1), (18, 1, 1),
         (14, 1, 1), (2, 3, 1), (10, 1, 1), (5, 1, 1), (3, 1, 1), (6, 1, 2), (1, 1, 2),
         (2, 1, 3)],
    ),
}


def sle_reference(n: int) -> RatFunc:
    """Tabulated E|a_n|^2 for whole-plane SLE as a rational function of kappa, n = 2..8."""
    if n not in _SLE_TABLE:
        raise DomainError(f"tabulated SLE moments cover n = 2..8, got {n}")
    scale, num, factors = _SLE_TABLE[n]
    return RatFunc.from_factored(scale, num, factors)


# ---------------------------------------------------------------------------
# truncated series and polynomial expected maps


def truncated_series_Sn(n: int, symbol: LevySymbol, mode: str = AUTO) -> MomentFormulaResult:
    """S_n = 1 + sum_{j=2}^n j E(a_j)."""
    if n < 1:
        raise DomainError("truncated series needs n >= 1")
    e = _eta_list(symbol, max(n - 1, 1), mode)
    total = _one(e)
    ea = _one(e)
    for j in range(2, n + 1):
        k = j - 2
        ea = ea * (e[k] - k - 2) * inv(e[k + 1] + k + 1)
        total = total + j * ea
    return MomentFormulaResult(total, Provenance.TRUNCATED_SERIES)


def truncated_series_closed(n: int, symbol: LevySymbol, mode: str = AUTO) -> MomentFormulaResult:
    """-(eta_n + n) E(a_{n+1}) / 2, which equals S_n."""
    e = _eta_list(symbol, n, mode)
    val = -(e[n] + n) * expected_an(n + 1, symbol, mode).value / 2
    return MomentFormulaResult(val, Provenance.TRUNCATED_SERIES_CLOSED)


INFINITE = "infinite"


def _is_equal(x, target: int) -> bool:
    if isinstance(x, float):
        return abs(x - target) <= 1e-12 * max(1.0, abs(target))
    return x == target


def expected_map_poly_degree(symbol: LevySymbol, family: str, cap: int = 64):
    """Degree of the polynomial E f_0 (family 'f') or E h'_0-type map (family 'h'), or "infinite"."""
    if family not in ("f", "h"):
        raise ValueError("family must be 'f' or 'h'")
    if symbol.is_symbolic:
        raise ValueError("polynomial degree needs a numeric symbol")
    limit = cap if symbol.max_k() is None else min(cap, symbol.max_k())
    for k in range(1, limit + 1):
        target = k + 2 if family == "f" else k + 1
        if _is_equal(symbol.eta(k), target):
            return k + 1 if family == "f" else 2 * k + 1
    return INFINITE
