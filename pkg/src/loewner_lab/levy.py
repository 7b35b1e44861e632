"""Real, even Lévy symbols evaluated at integer frequencies.

Numbers supplied as ``int`` or ``Fraction`` give exact values whenever the
symbol is rational at integers; floats propagate as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

from .errors import SymbolicUnsupportedError, SymbolUndefinedError
from .scalars import RatFunc

SLE = "sle"
STABLE = "stable"
DENDRITIC = "dendritic"
BROWNIAN_PLUS_POISSON = "bp"
TABLE = "table"


def _num(x):
    """Keep ints/Fractions exact, everything else becomes float."""
    if isinstance(x, bool):
        raise TypeError("boolean is not a number here")
    if isinstance(x, Integral):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


def _simplify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class LevySymbol:
    """Symbol ``eta`` with ``E exp(i xi L_t) = exp(-t eta(xi))``.

    ``params`` depends on ``variant``:
    sle ``(kappa,)`` with ``kappa=None`` for a formal kappa;
    stable ``(alpha, kappa)``; dendritic ``()``;
    bp ``(kappa, lam, turns)`` with jumps of size ``2*pi*turns``;
    table ``(eta_0, eta_1, ...)``.
    """

    variant: str
    params: tuple = ()

    # -- constructors
    @classmethod
    def sle(cls, kappa=None) -> "LevySymbol":
        if kappa is not None:
            kappa = _num(kappa)
            if kappa < 0:
                raise ValueError("kappa must be nonnegative")
        return cls(SLE, (kappa,))

    @classmethod
    def stable(cls, alpha, kappa) -> "LevySymbol":
        alpha, kappa = _num(alpha), _num(kappa)
        if not 0 < alpha <= 2:
            raise ValueError("stable index alpha must lie in (0, 2]")
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        return cls(STABLE, (alpha, kappa))

    @classmethod
    def dendritic(cls) -> "LevySymbol":
        return cls(DENDRITIC, ())

    @classmethod
    def brownian_plus_poisson(cls, kappa, lam, turns=1) -> "LevySymbol":
        kappa, lam, turns = _num(kappa), _num(lam), _num(turns)
        if kappa < 0 or lam < 0:
            raise ValueError("kappa and lambda must be nonnegative")
        return cls(BROWNIAN_PLUS_POISSON, (kappa, lam, turns))

    @classmethod
    def table(cls, values) -> "LevySymbol":
        vals = tuple(_num(v) for v in values)
        if not vals or vals[0] != 0:
            raise ValueError("a symbol table must start with eta_0 = 0")
        return cls(TABLE, vals)

    # -- properties
    @property
    def is_symbolic(self) -> bool:
        return self.variant == SLE and self.params[0] is None

    @property
    def kappa(self):
        if self.variant in (SLE,):
            return self.params[0]
        if self.variant == STABLE:
            return self.params[1]
        if self.variant == BROWNIAN_PLUS_POISSON:
            return self.params[0]
        return None

    def max_k(self) -> int | None:
        """Largest |k| at which the symbol is defined (None if unbounded)."""
        return len(self.params) - 1 if self.variant == TABLE else None

    # -- evaluation
    def eta(self, k: int):
        return eta(self, k)

    def eta_symbolic(self, k: int) -> RatFunc:
        return eta_symbolic(self, k)

    def is_exact_at(self, k: int) -> bool:
        return not isinstance(self.eta(k), float)

    def spec(self) -> str:
        """Inverse of :func:`parse_symbol`."""
        fmt = _fmt
        if self.variant == SLE:
            return "sle:sym" if self.params[0] is None else f"sle:{fmt(self.params[0])}"
        if self.variant == STABLE:
            return f"stable:{fmt(self.params[0])}:{fmt(self.params[1])}"
        if self.variant == DENDRITIC:
            return "dendritic"
        if self.variant == BROWNIAN_PLUS_POISSON:
            kappa, lam, turns = self.params
            base = f"bp:{fmt(kappa)}:{fmt(lam)}"
            return base if turns == 1 else f"{base}:{fmt(turns)}"
        return "table:" + ",".join(fmt(v) for v in self.params)

    def __str__(self) -> str:
        return self.spec()


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def _sin2_pi(x):
    """sin(pi*x)^2, exact when 2x is an integer."""
    if isinstance(x, Fraction) and (2 * x).denominator == 1:
        return 0 if x.denominator == 1 else 1
    return math.sin(math.pi * float(x)) ** 2


def eta(symbol: LevySymbol, k: int):
    """eta_{|k|}; exact (int/Fraction) when possible, RatFunc for a formal kappa."""
    k = abs(int(k))
    v = symbol.variant
    if v == SLE:
        kappa = symbol.params[0]
        if kappa is None:
            return eta_symbolic(symbol, k)
        return _simplify(kappa * k * k / 2)
    if k == 0:
        return 0
    if v == STABLE:
        alpha, kappa = symbol.params
        if isinstance(alpha, Fraction) and alpha.denominator == 1 and isinstance(kappa, Fraction):
            return _simplify(kappa * k ** int(alpha) / 2)
        return float(kappa) * float(k) ** float(alpha) / 2.0
    if v == DENDRITIC:
        return 1
    if v == BROWNIAN_PLUS_POISSON:
        kappa, lam, turns = symbol.params
        jump = _sin2_pi(turns * k) if isinstance(turns, Fraction) else math.sin(math.pi * turns * k) ** 2
        if jump == 0:
            return _simplify(kappa * k * k / 2)
        return _simplify(kappa * k * k / 2 + 2 * lam * jump)
    if v == TABLE:
        if k >= len(symbol.params):
            raise SymbolUndefinedError(f"symbol undefined at k={k} (table has k=0..{len(symbol.params) - 1})")
        return _simplify(symbol.params[k])
    raise ValueError(f"unknown symbol variant {v!r}")


def eta_symbolic(symbol: LevySymbol, k: int) -> RatFunc:
    """kappa*k^2/2 as an exact rational function (SLE family only)."""
    if symbol.variant != SLE:
        raise SymbolicUnsupportedError(f"symbolic mode unsupported for {symbol.variant} symbols")
    k = abs(int(k))
    return RatFunc([0, k * k], [2])


def parse_symbol(text: str) -> LevySymbol:
    """Parse ``sle:6``, ``sle:sym``, ``stable:1.5:2``, ``dendritic``, ``bp:4:0.5[:turns]``, ``table:0,1,4,9``."""
    parts = text.strip().split(":")
    head = parts[0].lower()
    args = parts[1:]
    try:
        if head == "sle":
            if len(args) != 1:
                raise ValueError
            if args[0] in ("sym", "symbolic", "k", "kappa"):
                return LevySymbol.sle()
            return LevySymbol.sle(parse_number(args[0]))
        if head == "stable" and len(args) == 2:
            return LevySymbol.stable(parse_number(args[0]), parse_number(args[1]))
        if head == "dendritic" and not args:
            return LevySymbol.dendritic()
        if head == "bp" and len(args) in (2, 3):
            return LevySymbol.brownian_plus_poisson(*(parse_number(a) for a in args))
        if head == "table" and len(args) == 1:
            return LevySymbol.table(parse_number(v) for v in args[0].split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad symbol spec {text!r}: {exc}") from None
    raise ValueError(f"bad symbol spec {text!r}")


def parse_number(text: str):
    """Decimal or ``p/q`` literals become exact Fractions; anything else float."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)
