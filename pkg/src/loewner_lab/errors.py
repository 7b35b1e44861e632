"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class LoewnerLabError(Exception):
    """Base class for library errors."""


class ResonanceError(LoewnerLabError, ArithmeticError):
    """A denominator factor vanished (resonant denominator)."""


class PoleError(LoewnerLabError, ArithmeticError):
    """Rational function evaluated at a pole."""


class SymbolUndefinedError(LoewnerLabError, KeyError):
    """A tabulated symbol was queried outside its stored range."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "symbol undefined"


class SymbolicUnsupportedError(LoewnerLabError):
    """Symbolic (rational-in-kappa) mode requested for a symbol that lacks it."""


class SizeCapError(LoewnerLabError):
    """Problem size exceeds a configured cap."""


class DegenerateParametersError(LoewnerLabError):
    """A gamma-function pole makes a hypergeometric construction singular."""


class DomainError(LoewnerLabError, ValueError):
    """Input outside the domain where a formula is real or defined."""


class BracketError(LoewnerLabError):
    """Root bracketing failed."""
