"""Exact arithmetic in F_p, F_p[x] and F_p(x) with the 1/x-adic absolute value.

The absolute value is |f| = q^(deg num - deg den), so polynomials have
|f| >= 1 and the unit ball O = {|f| <= 1} holds the proper fractions.
Every object here is immutable and kept in canonical form, so equality is
structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import (
    EmptyVector,
    NotFiniteTail,
    ParseError,
    ZeroDenominator,
    ZeroInput,
)

# Degree of the zero polynomial.  Kept as -inf rather than -1 so that any
# arithmetic on it stays visibly non-integral.
DEG_ZERO = -math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p; ``q`` is the field size and equals ``p``."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**16) or not is_prime(self.p):
            raise ValueError(f"field size must be a prime below 2^16, got {self.p}")

    @property
    def q(self) -> int:
        return self.p


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Polynomial over F_p, coefficients stored least-significant first."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[int], p: int):
        self.coeffs = _trim([c % p for c in coeffs])
        self.p = p

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...], p: int) -> "Poly":
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj.p = p
        return obj

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls._raw((), p)

    @classmethod
    def one(cls, p: int) -> "Poly":
        return cls._raw((1,), p)

    @classmethod
    def constant(cls, c: int, p: int) -> "Poly":
        return cls((c,), p)

    @classmethod
    def monomial(cls, c: int, k: int, p: int) -> "Poly":
        if k < 0:
            raise ValueError("negative monomial degree")
        c %= p
        if c == 0:
            return cls.zero(p)
        return cls._raw((0,) * k + (c,), p)

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls._raw((0, 1), p)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "Poly"):
        if self.p != other.p:
            raise ValueError(f"mixed characteristics {self.p} and {other.p}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, int):
            return Poly.constant(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Poly._raw(_trim(out), p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw(tuple((-c) % p for c in self.coeffs), p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Poly":
        p = self.p
        c %= p
        if c == 0:
            return Poly.zero(p)
        return Poly._raw(tuple(a * c % p for a in self.coeffs), p)

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k, k >= 0."""
        if not self.coeffs or k == 0:
            return self
        return Poly._raw((0,) * k + self.coeffs, self.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.p)
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly._raw(_trim([c % p for c in out]), p)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        self._check(other)
        if other.is_zero():
            raise ZeroDenominator("polynomial division by zero")
        p = self.p
        b = other.coeffs
        db = len(b) - 1
        inv = pow(b[-1], -1, p)
        r = list(self.coeffs)
        if len(r) <= db:
            return Poly.zero(p), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] % p
            if c:
                f = c * inv % p
                q[k - db] = f
                for j in range(db + 1):
                    r[k - db + j] -= f * b[j]
        return Poly._raw(_trim(q), p), Poly._raw(_trim([c % p for c in r[:db]]), p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.p)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def is_x_power(self) -> bool:
        """True for c*x^k with c != 0."""
        return bool(self.coeffs) and not any(self.coeffs[:-1])

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(other, self.p)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={self.p})"

    def __str__(self):
        return format_poly(self)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


@total_ordering
@dataclass(frozen=True)
class AbsValue:
    """An element of q^Z together with 0.  ``exponent is None`` means 0."""

    exponent: int | None

    @classmethod
    def zero(cls) -> "AbsValue":
        return cls(None)

    @classmethod
    def power(cls, e: int) -> "AbsValue":
        return cls(int(e))

    def is_zero(self) -> bool:
        return self.exponent is None

    def __lt__(self, other: "AbsValue"):
        if not isinstance(other, AbsValue):
            return NotImplemented
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent < other.exponent

    def __mul__(self, other: "AbsValue") -> "AbsValue":
        if self.exponent is None or other.exponent is None:
            return AbsValue(None)
        return AbsValue(self.exponent + other.exponent)

    def __str__(self):
        return "0" if self.exponent is None else f"q^{self.exponent}"


ZERO_ABS = AbsValue(None)
ONE_ABS = AbsValue(0)


class RatFunc:
    """Element of F_p(x) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.p)
        num._check(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if num.is_zero():
            den = Poly.one(num.p)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            inv = pow(den.lc, -1, num.p)
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_int(cls, c: int, p: int) -> "RatFunc":
        return cls._raw(Poly.constant(c, p), Poly.one(p))

    @classmethod
    def from_poly(cls, f: Poly) -> "RatFunc":
        return cls._raw(f, Poly.one(f.p))

    @classmethod
    def zero(cls, p: int) -> "RatFunc":
        return cls._raw(Poly.zero(p), Poly.one(p))

    @classmethod
    def one(cls, p: int) -> "RatFunc":
        return cls._raw(Poly.one(p), Poly.one(p))

    @classmethod
    def x_power(cls, k: int, p: int, c: int = 1) -> "RatFunc":
        """c * x^k for any integer k."""
        if c % p == 0:
            return cls.zero(p)
        if k >= 0:
            return cls._raw(Poly.monomial(c, k, p), Poly.one(p))
        return cls._raw(Poly.constant(c, p), Poly.monomial(1, -k, p))

    @property
    def p(self) -> int:
        return self.num.p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    @property
    def degree(self):
        """log_q |f|; DEG_ZERO for f = 0."""
        if self.num.is_zero():
            return DEG_ZERO
        return self.num.degree - self.den.degree

    def abs(self) -> AbsValue:
        if self.num.is_zero():
            return ZERO_ABS
        return AbsValue(self.num.degree - self.den.degree)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, int):
            return RatFunc.from_int(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den.degree == 0:
                return RatFunc._raw(self.num + other.num, self.den)
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFunc._raw(self.num * other.num, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominator("division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r}, p={self.p})"

    def __str__(self):
        return format_ratfunc(self)


@dataclass(frozen=True)
class LaurentTail:
    """Finite tail sum_{j=1}^h a_j x^-j, stored as (a_1, ..., a_h)."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([c % self.p for c in self.coeffs]))

    @property
    def h(self) -> int:
        return len(self.coeffs)

    def coeff(self, j: int) -> int:
        """a_j, zero outside 1..h."""
        return self.coeffs[j - 1] if 1 <= j <= len(self.coeffs) else 0

    def padded(self, length: int) -> tuple[int, ...]:
        return tuple(self.coeff(j) for j in range(1, length + 1))

    def abs(self) -> AbsValue:
        for j, c in enumerate(self.coeffs, start=1):
            if c:
                return AbsValue(-j)
        return ZERO_ABS

    def to_ratfunc(self) -> RatFunc:
        h = self.h
        if h == 0:
            return RatFunc.zero(self.p)
        num = Poly(reversed(self.coeffs), self.p)  # sum a_j x^(h-j)
        return RatFunc(num, Poly.monomial(1, h, self.p))

    def __str__(self):
        return format_ratfunc(self.to_ratfunc())


# -- valuation primitives ---------------------------------------------------


def abs_value(f: RatFunc) -> AbsValue:
    return f.abs()


def rho_pi(f: RatFunc) -> tuple[int, RatFunc]:
    """Split f = x^rho * pi with |pi| = 1."""
    if f.is_zero():
        raise ZeroInput("rho/pi undefined at 0")
    rho = f.num.degree - f.den.degree
    return rho, f * RatFunc.x_power(-rho, f.p)


def split_integer_fractional(f: RatFunc) -> tuple[Poly, RatFunc]:
    """Return ([f], <f>) with f = [f] + <f> and |<f>| < 1."""
    q, r = divmod(f.num, f.den)
    return q, RatFunc._raw(r, f.den) if r else RatFunc.zero(f.p)


def tail_of(f: RatFunc) -> LaurentTail:
    _, frac = split_integer_fractional(f)
    if frac.is_zero():
        return LaurentTail((), f.p)
    den = frac.den
    if not den.is_x_power():
        raise NotFiniteTail(f"denominator {den} is not a power of x")
    h = den.degree
    # r / x^h with deg r < h: coefficient of x^-j is r_{h-j}
    return LaurentTail(tuple(frac.num.coeff(h - j) for j in range(1, h + 1)), f.p)


def laurent_coeffs(f: RatFunc, lo: int, hi: int) -> list[int]:
    """Coefficients of x^k in the 1/x-expansion of f for k = lo..hi."""
    if hi < lo:
        return []
    s = max(0, -lo)
    q, _ = divmod(f.num.shift(s), f.den)
    return [q.coeff(k + s) for k in range(lo, hi + 1)]


def vec_norm(v: Sequence[RatFunc]) -> AbsValue:
    if len(v) == 0:
        raise EmptyVector("norm of an empty vector")
    return max(f.abs() for f in v)


def product_norm(v: Sequence[RatFunc]) -> AbsValue:
    if len(v) == 0:
        raise EmptyVector("product norm of an empty vector")
    out = ONE_ABS
    for f in v:
        out = out * f.abs()
    return out


# -- text form ----------------------------------------------------------------


def _mono(c: int, e: int) -> str:
    if e == 0:
        return str(c)
    x = "x" if e == 1 else f"x^{e}"
    return x if c == 1 else f"{c}*{x}"


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    terms = [_mono(c, e) for e, c in reversed(list(enumerate(f.coeffs))) if c]
    return "+".join(terms)


def format_ratfunc(f: RatFunc) -> str:
    """Canonical text; x-power denominators print as a Laurent sum."""
    if f.is_zero():
        return "0"
    if f.den.degree == 0:
        return format_poly(f.num)
    if f.den.is_x_power():
        k = f.den.degree
        terms = []
        for i in range(f.num.degree, -1, -1):
            c = f.num.coeffs[i]
            if not c:
                continue
            e = i - k
            if e >= 0:
                terms.append(_mono(c, e))
            else:
                terms.append(f"{c}/x" if e == -1 else f"{c}/x^{-e}")
        return "+".join(terms)
    num, den = format_poly(f.num), format_poly(f.den)
    if len(f.num.coeffs) - f.num.coeffs.count(0) > 1:
        num = f"({num})"
    if len(f.den.coeffs) - f.den.coeffs.count(0) > 1 or f.den.lc != 1:
        den = f"({den})"
    return f"{num}/{den}"


class _Parser:
    # expr   := ('+'|'-')? term (('+'|'-') term)*
    # term   := factor (('*'|'/')? factor)*      juxtaposition multiplies
    # factor := atom ('^' int)?
    # atom   := int | 'x' | '(' expr ')'

    def __init__(self, text: str, p: int):
        self.text = text
        self.p = p
        self.pos = 0

    def fail(self, expected: str):
        raise ParseError(self.text, self.pos, expected)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("integer")
        return int(self.text[start : self.pos])

    def parse(self) -> RatFunc:
        value = self.expr()
        if self.peek():
            self.fail("'+', '-', '*', '/' or end of input")
        return value

    def expr(self) -> RatFunc:
        sign = 1
        c = self.peek()
        if c and c in "+-":
            sign = -1 if c == "-" else 1
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                value = value * self.factor()
            elif c == "/":
                self.pos += 1
                at = self.pos
                rhs = self.factor()
                if rhs.is_zero():
                    raise ZeroDenominator(f"division by zero at offset {at}")
                value = value / rhs
            elif c and (c == "x" or c == "(" or c.isdigit()):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> RatFunc:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.integer()
        return base

    def atom(self) -> RatFunc:
        c = self.peek()
        if c == "x":
            self.pos += 1
            return RatFunc.x_power(1, self.p)
        if c == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.fail("')'")
            self.pos += 1
            return value
        if c.isdigit():
            return RatFunc.from_int(self.integer(), self.p)
        self.fail("integer, 'x' or '('")


def parse_ratfunc(text: str, p: int) -> RatFunc:
    """Parse a rational function such as ``1/x+1/x^2`` or ``(x+1)/(x^2+2)``."""
    return _Parser(text, p).parse()


def parse_tail(text: str, p: int) -> LaurentTail:
    return tail_of(parse_ratfunc(text, p))
