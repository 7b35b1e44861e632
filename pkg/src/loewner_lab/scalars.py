"""Exact rational functions in kappa, plus the scalar helpers shared with float mode.

Moment computations run over one of three scalar kinds:

* ``float`` (double precision, resonance threshold ``RESONANCE_TOL``),
* :class:`fractions.Fraction` (exact rationals at a numeric kappa),
* :class:`RatFunc` (exact rational functions of a formal kappa).

:class:`FactoredRatFunc` is an accelerator for symbolic word sums. Its
denominator is kept as a multiset of linear factors, so sums only need an
LCM of factor sets instead of a polynomial gcd.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Integral, Rational, Real

from .errors import PoleError, ResonanceError

RESONANCE_TOL = 1e-13

Poly = list  # integer coefficients, lowest degree first, no trailing zeros


# ---------------------------------------------------------------------------
# dense integer polynomials


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a: list[int]) -> list[int]:
    return [-c for c in a]


def _pscale(a: list[int], c: int) -> list[int]:
    if c == 0:
        return []
    return [c * x for x in a]


def _pmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pmul_linear(a: list[int], c0: int, c1: int) -> list[int]:
    """Multiply ``a`` by ``c0 + c1*k``."""
    if not a:
        return []
    out = [0] * (len(a) + 1)
    for i, x in enumerate(a):
        out[i] += c0 * x
        out[i + 1] += c1 * x
    return _trim(out)


def _content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(a: list[int]) -> list[int]:
    g = _content(a)
    if g == 0:
        return []
    out = [c // g for c in a]
    if out[-1] < 0:
        out = _pneg(out)
    return out


def _prem(a: list[int], b: list[int]) -> list[int]:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        c = r[-1]
        r = [x * lb for x in r]
        for i, bi in enumerate(b):
            r[i + shift] -= c * bi
        _trim(r)
        # keep coefficients small
        g = _content(r)
        if g > 1:
            r = [x // g for x in r]
    return r


def _pgcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd with positive leading coefficient (``[1]`` for coprime)."""
    a, b = _primitive(a), _primitive(b)
    if not a:
        return b or [1]
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return a


def _pdiv_exact(a: list[int], b: list[int]) -> list[int]:
    """Exact quotient of integer polynomials; raises if not exact."""
    if not a:
        return []
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    lb = b[-1]
    for shift in range(len(a) - 1 - db, -1, -1):
        c, rem = divmod(r[shift + db], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[shift] = c
        if c:
            for i, bi in enumerate(b):
                r[shift + i] -= c * bi
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _peval(a: list[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _peval_float(a: list[int], x: float) -> float:
    acc = 0.0
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# RatFunc


class RatFunc:
    """Canonical ``num(k)/den(k)`` with coprime integer polynomials.

    The canonical form has ``gcd(num, den) = 1``, unit joint content and a
    positive leading coefficient in ``den``. Zero is ``0/1``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=(1,)):
        num = _trim([int(c) for c in num])
        den = _trim([int(c) for c in den])
        if not den:
            raise ZeroDivisionError("RatFunc with zero denominator")
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: list[int], den: list[int]) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def kappa(cls) -> "RatFunc":
        return cls._raw([0, 1], [1])

    @classmethod
    def const(cls, value) -> "RatFunc":
        v = Fraction(value)
        if v == 0:
            return cls._raw([], [1])
        return cls._raw([v.numerator], [v.denominator])

    @classmethod
    def from_factored(cls, scale, num, linear_factors) -> "RatFunc":
        """``scale * num(k) / prod(c0 + c1*k)^m`` from ``[(c0, c1, m), ...]``."""
        s = Fraction(scale)
        den = [s.denominator]
        for c0, c1, mult in linear_factors:
            for _ in range(mult):
                den = _pmul_linear(den, c0, c1)
        return cls(_pscale(list(num), s.numerator), den)

    # -- predicates / conversion
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def degree(self) -> tuple[int, int]:
        return len(self.num) - 1, len(self.den) - 1

    def eval_at(self, k0) -> Fraction:
        return eval_at(self, k0)

    def eval_float(self, x: float) -> float:
        d = _peval_float(self.den, x)
        if d == 0.0:
            raise PoleError(f"pole at kappa={x}")
        return _peval_float(self.num, x) / d

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Integral, Rational)):
            return RatFunc.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(_padd(self.num, o.num), self.den)
        return RatFunc(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(_pneg(self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # cross-cancel first so the products stay small
        g1 = _pgcd(self.num, o.den) if self.num and len(o.den) > 1 else [1]
        g2 = _pgcd(o.num, self.den) if o.num and len(self.den) > 1 else [1]
        n1 = _pdiv_exact(self.num, g1) if len(g1) > 1 else self.num
        d2 = _pdiv_exact(o.den, g1) if len(g1) > 1 else o.den
        n2 = _pdiv_exact(o.num, g2) if len(g2) > 1 else o.num
        d1 = _pdiv_exact(self.den, g2) if len(g2) > 1 else self.den
        num, den = _pmul(n1, n2), _pmul(d1, d2)
        return RatFunc._raw(*_normalize_content(num, den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by zero RatFunc")
        num, den = list(self.den), list(self.num)
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return RatFunc._raw(num, den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, Integral):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = RatFunc.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num), tuple(self.den)))
        return self._hash

    # -- text
    def render(self, var: str = "k") -> str:
        return render(self, var)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"RatFunc({render(self)!r})"


def _normalize_content(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    if not num:
        return [], [1]
    g = math.gcd(_content(num), _content(den))
    if den[-1] < 0:
        g = -g
    if g != 1:
        num = [c // g for c in num]
        den = [c // g for c in den]
    return num, den


def _canonical(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    if not num:
        return [], [1]
    if len(den) > 1 and len(num) > 0:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdiv_exact(num, g)
            den = _pdiv_exact(den, g)
    return _normalize_content(num, den)


def ratfunc_arith(a, b, op: str) -> RatFunc:
    """Binary arithmetic on RatFunc operands; ``op`` is one of ``+ - * /``."""
    a = a if isinstance(a, RatFunc) else RatFunc.const(a)
    b = b if isinstance(b, RatFunc) else RatFunc.const(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b.is_zero():
            raise ZeroDivisionError("division by zero RatFunc")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def eval_at(f: RatFunc, k0) -> Fraction:
    x = Fraction(k0)
    d = _peval(f.den, x)
    if d == 0:
        raise PoleError(f"pole at kappa={x}")
    return _peval(f.num, x) / d


# ---------------------------------------------------------------------------
# text rendering / parsing


def _render_poly(a: list[int], var: str) -> str:
    if not a:
        return "0"
    terms = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if c == 1 else f"{c}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def render(f: RatFunc, var: str = "k") -> str:
    """Expanded text form, e.g. ``(k^2 + 88*k + 108)/(k^3 + 9*k^2 + 20*k + 12)``."""
    num = _render_poly(f.num, var)
    if f.den == [1]:
        return num
    den = _render_poly(f.den, var)
    if len(f.num) > 1 or (f.num and f.num[0] < 0 and len(f.den) > 1):
        num = f"({num})"
    if len(f.den) > 1:
        den = f"({den})"
    return f"{num}/{den}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(kappa|κ|k)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse rational function at {text[pos:]!r}")
            pos = m.end()
            if m.group(1):
                self.tokens.append(("num", m.group(1)))
            elif m.group(2):
                self.tokens.append(("var", m.group(2)))
            else:
                op = "^" if m.group(3) == "**" else m.group(3)
                self.tokens.append(("op", op))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ValueError(f"expected {op!r}")

    def parse(self) -> RatFunc:
        if not self.tokens:
            raise ValueError("empty expression")
        out = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input at token {self.peek()[1]!r}")
        return out

    def expr(self) -> RatFunc:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> RatFunc:
        acc = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.take()
                rhs = self.unary()
                if val == "/":
                    if rhs.is_zero():
                        raise ZeroDivisionError("division by zero in expression")
                    acc = acc / rhs
                else:
                    acc = acc * rhs
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                acc = acc * self.unary()  # implicit product, e.g. 2k
            else:
                return acc

    def unary(self) -> RatFunc:
        kind, val = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer literal")
            base = base ** int(val)
        return base

    def atom(self) -> RatFunc:
        kind, val = self.take()
        if kind == "num":
            return RatFunc.const(int(val))
        if kind == "var":
            return RatFunc.kappa()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def parse(text: str) -> RatFunc:
    """Parse the output of :func:`render` (or any + - * / ^ expression in k)."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# factored accumulator for symbolic word sums


class FactoredRatFunc:
    """``num(k) / (const * prod_f f(k)^m_f)`` with primitive linear ``f``.

    Only the operations needed by the word engines are provided: sums, products
    and inversion of elements with a linear numerator and no factors.
    """

    __slots__ = ("num", "const", "factors")

    def __init__(self, num: list[int], const: int = 1, factors: dict | None = None):
        self.num = num
        self.const = const
        self.factors = factors if factors is not None else {}

    @classmethod
    def from_poly(cls, num, const: int = 1) -> "FactoredRatFunc":
        num = _trim([int(c) for c in num])
        return cls(num, const, {})._normalized()

    def _normalized(self) -> "FactoredRatFunc":
        if not self.num:
            return FactoredRatFunc([], 1, {})
        g = math.gcd(_content(self.num), self.const)
        if self.const < 0:
            g = -g
        if g != 1:
            return FactoredRatFunc([c // g for c in self.num], self.const // g, self.factors)
        return self

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other):
        if isinstance(other, int):
            other = FactoredRatFunc([other] if other else [], 1, {})
        if not isinstance(other, FactoredRatFunc):
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        fa, fb = self.factors, other.factors
        lcm_f = dict(fa)
        for f, m in fb.items():
            if lcm_f.get(f, 0) < m:
                lcm_f[f] = m
        na, nb = self.num, other.num
        for f, m in lcm_f.items():
            for _ in range(m - fa.get(f, 0)):
                na = _pmul_linear(na, f[0], f[1])
            for _ in range(m - fb.get(f, 0)):
                nb = _pmul_linear(nb, f[0], f[1])
        ca, cb = self.const, other.const
        lc = ca * cb // math.gcd(ca, cb)
        num = _padd(_pscale(na, lc // ca), _pscale(nb, lc // cb))
        return FactoredRatFunc(num, lc, lcm_f)._normalized()

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return FactoredRatFunc([], 1, {})
            return FactoredRatFunc(_pscale(self.num, other), self.const, self.factors)._normalized()
        if not isinstance(other, FactoredRatFunc):
            return NotImplemented
        if not self.num or not other.num:
            return FactoredRatFunc([], 1, {})
        fac = dict(self.factors)
        for f, m in other.factors.items():
            fac[f] = fac.get(f, 0) + m
        return FactoredRatFunc(_pmul(self.num, other.num), self.const * other.const, fac)._normalized()

    __rmul__ = __mul__

    def inverse(self) -> "FactoredRatFunc":
        if not self.num:
            raise ResonanceError("resonant denominator (identically zero)")
        if self.factors or len(self.num) > 2:
            raise NotImplementedError("only linear elements can be inverted")
        if len(self.num) == 1:
            c = self.num[0]
            sign = -1 if c < 0 else 1
            return FactoredRatFunc([sign * self.const], abs(c), {})._normalized()
        g = _content(self.num)
        c0, c1 = self.num[0] // g, self.num[1] // g
        if c1 < 0:
            c0, c1, g = -c0, -c1, -g
        sign = -1 if g < 0 else 1
        return FactoredRatFunc([sign * self.const], abs(g), {(c0, c1): 1})._normalized()

    def to_ratfunc(self) -> RatFunc:
        """Cancel common linear factors, then expand into a canonical RatFunc."""
        num = self.num
        if not num:
            return RatFunc._raw([], [1])
        den = [self.const]
        for (c0, c1), m in sorted(self.factors.items()):
            left = m
            while left and _vanishes_at(num, c0, c1):
                num = _pdiv_exact(num, [c0, c1])
                left -= 1
            for _ in range(left):
                den = _pmul_linear(den, c0, c1)
        return RatFunc._raw(*_normalize_content(num, den))


def _vanishes_at(num: list[int], c0: int, c1: int) -> bool:
    # c1^d * num(-c0/c1) as an integer
    d = len(num) - 1
    acc = 0
    pw = 1
    for i, c in enumerate(num):
        acc += c * pw * c1 ** (d - i)
        pw *= -c0
    return acc == 0


# ---------------------------------------------------------------------------
# scalar helpers over float / Fraction / RatFunc


def is_exact(x) -> bool:
    return isinstance(x, (Integral, Rational, RatFunc, FactoredRatFunc))


def inv(x):
    """Reciprocal with the resonance check appropriate to the scalar kind."""
    if isinstance(x, (RatFunc, FactoredRatFunc)):
        if x.is_zero():
            raise ResonanceError("resonant denominator (identically zero)")
        return x.inverse()
    if isinstance(x, (Integral, Rational)):
        if x == 0:
            raise ResonanceError("resonant denominator")
        return Fraction(1) / Fraction(x)
    xf = float(x)
    if abs(xf) < RESONANCE_TOL:
        raise ResonanceError(f"resonant denominator ({xf:.3e})")
    return 1.0 / xf


def div(a, b):
    return a * inv(b)


def to_float(x) -> float:
    if isinstance(x, RatFunc):
        raise TypeError("cannot convert a symbolic RatFunc to float")
    return float(x)


def scalar_equal(a, b, tol: float = 0.0) -> bool:
    if isinstance(a, RatFunc) or isinstance(b, RatFunc):
        return a == b
    if is_exact(a) and is_exact(b):
        return Fraction(a) == Fraction(b)
    return abs(float(a) - float(b)) <= tol


__all__ = [
    "RatFunc",
    "FactoredRatFunc",
    "ratfunc_arith",
    "eval_at",
    "render",
    "parse",
    "inv",
    "div",
    "is_exact",
    "to_float",
    "scalar_equal",
    "RESONANCE_TOL",
]
