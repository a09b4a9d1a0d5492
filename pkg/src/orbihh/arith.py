"""Exact scalars: rationals, the cyclotomic field Q(zeta_N), formal positive square roots.

Elements of Q(zeta_N) are stored as their reduced residue modulo the N-th
cyclotomic polynomial, in the power basis 1, z, ..., z^(phi(N)-1).  That
representation is canonical, so equality is a coefficient comparison.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction, "Cyclotomic"]

POSITIVITY_TOL = 1e-9


class ScalarParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic polynomials and per-order reduction data


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # low-degree-first integer polynomials, den monic
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            out[i - dq] = c
            for j, d in enumerate(den):
                num[i - dq + j] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


class _OrderData:
    """Reduction table z^k mod Phi_N for 0 <= k < N, plus hashing weights."""

    __slots__ = ("order", "phi", "table", "weights")

    def __init__(self, order: int):
        self.order = order
        phi_poly = cyclotomic_polynomial(order)
        phi = len(phi_poly) - 1
        self.phi = phi
        table: list[tuple[int, ...]] = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(order):
            table.append(tuple(cur))
            # multiply by z, then reduce the z^phi term with the monic Phi_N
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(phi):
                    cur[j] -= top * phi_poly[j]
        self.table = tuple(table)
        # normalized trace of z^k is mu(m)/phi(m), m = N/gcd(N,k); independent of N
        weights = []
        for k in range(phi):
            m = order // math.gcd(order, k)
            weights.append(Fraction(_mobius(m), euler_phi(m)))
        self.weights = tuple(weights)


@lru_cache(maxsize=None)
def _order_data(order: int) -> _OrderData:
    return _OrderData(order)


def _reduce(coeffs: Iterable[Fraction], order: int) -> tuple[Fraction, ...]:
    data = _order_data(order)
    phi = data.phi
    acc = [Fraction(0)] * order
    for k, c in enumerate(coeffs):
        if c:
            acc[k % order] += c
    out = acc[:phi]
    for k in range(phi, order):
        c = acc[k]
        if c:
            row = data.table[k]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
    return tuple(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------


class Cyclotomic:
    """An element of Q(zeta_N), immutable.

    Arithmetic between different orders lifts both operands to the lcm of the
    orders. Python ints and Fractions are accepted wherever a Cyclotomic is.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, coeffs: Sequence, order: int = 1, *, _reduced: bool = False):
        if order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {order}")
        if _reduced:
            self.coeffs = tuple(coeffs)
        else:
            self.coeffs = _reduce((_as_fraction(c) for c in coeffs), order)
        self.order = order
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def rational(cls, q, order: int = 1) -> Cyclotomic:
        phi = _order_data(order).phi
        return cls((_as_fraction(q),) + (Fraction(0),) * (phi - 1), order, _reduced=True)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> Cyclotomic:
        return cls(tuple(Fraction(c) for c in _order_data(order).table[power % order]), order, _reduced=True)

    @classmethod
    def coerce(cls, x: Scalar, order: int = 1) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        return cls.rational(x, order)

    # structure ----------------------------------------------------------

    def lift(self, order: int) -> Cyclotomic:
        """Embed into Q(zeta_M) for M a multiple of this element's order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        data = _order_data(order)
        out = [Fraction(0)] * data.phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = data.table[(k * step) % order]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return Cyclotomic(out, order, _reduced=True)

    def _common(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(_as_fraction(other), self.order)
        if other.order == self.order:
            return self, other
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> Cyclotomic:
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.order, _reduced=True)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(tuple(-x for x in self.coeffs), self.order, _reduced=True)

    def __sub__(self, other) -> Cyclotomic:
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), a.order, _reduced=True)

    def __rsub__(self, other) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(tuple(x * other for x in self.coeffs), self.order, _reduced=True)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        n = a.order
        if n <= 2:
            return Cyclotomic((a.coeffs[0] * b.coeffs[0],), n, _reduced=True)
        acc = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        acc[(i + j) % n] += x * y
        return Cyclotomic(_reduce(acc, n), n, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return Cyclotomic.rational(Fraction(1) / self.coeffs[0], self.order)
        # solve (multiplication-by-self matrix) x = 1
        phi = len(self.coeffs)
        basis = [Cyclotomic.zeta(self.order, k) for k in range(phi)]
        cols = [(self * b).coeffs for b in basis]
        rows = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for c in range(phi):
            p = next(r for r in range(c, phi) if rows[r][c])
            rows[c], rows[p] = rows[p], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [v * inv for v in rows[c]]
            for r in range(phi):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
        return Cyclotomic(tuple(rows[i][phi] for i in range(phi)), self.order, _reduced=True)

    def __truediv__(self, other) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> Cyclotomic:
        return Cyclotomic.rational(_as_fraction(other), self.order) * self.inverse()

    def __pow__(self, e: int) -> Cyclotomic:
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> Cyclotomic:
        """Complex conjugation, zeta -> zeta^(N-1)."""
        n = self.order
        acc = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            acc[(-k) % n] += c
        return Cyclotomic(_reduce(acc, n), n, _reduced=True)

    def is_real(self) -> bool:
        return self.conj() == self

    def embed(self) -> complex:
        """Numeric value at zeta = exp(2 pi i / N)."""
        n = self.order
        total = 0j
        for k, c in enumerate(self.coeffs):
            if c:
                total += float(c) * cmath.exp(2j * math.pi * k / n)
        return total

    def is_positive(self, tol: float = POSITIVITY_TOL) -> bool:
        """Real and numerically > tol; reality is decided exactly."""
        return self.is_real() and self.embed().real > tol

    # comparison, hashing, printing --------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.order == self.order:
            return self.coeffs == other.coeffs
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        # normalized trace is independent of the ambient order, so equal
        # elements of different orders hash equal
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                w = _order_data(self.order).weights
                self._hash = hash((sum(c * x for c, x in zip(self.coeffs, w)), "cyc"))
        return self._hash

    def key(self) -> tuple:
        return (self.order, self.coeffs)

    def __repr__(self) -> str:
        return f"Cyclotomic({str(self)!r}, order={self.order})"

    def __str__(self) -> str:
        return format_scalar(self)


# ---------------------------------------------------------------------------
# functional surface


def cyclo_reduce(coeffs: Sequence, order: int) -> Cyclotomic:
    return Cyclotomic(coeffs, order)


def cyclo_add(a: Scalar, b: Scalar) -> Cyclotomic:
    return Cyclotomic.coerce(a) + b


def cyclo_mul(a: Scalar, b: Scalar) -> Cyclotomic:
    return Cyclotomic.coerce(a) * b


def cyclo_neg(a: Scalar) -> Cyclotomic:
    return -Cyclotomic.coerce(a)


def cyclo_inv(a: Scalar) -> Cyclotomic:
    return Cyclotomic.coerce(a).inverse()


def cyclo_conj(a: Scalar) -> Cyclotomic:
    return Cyclotomic.coerce(a).conj()


def cyclo_embed(a: Scalar) -> complex:
    return Cyclotomic.coerce(a).embed()


# ---------------------------------------------------------------------------
# formal positive square roots


@dataclass(frozen=True)
class SqrtPosReal:
    """The positive square root of a real, positive cyclotomic number."""

    square: Cyclotomic
    approx: float

    @classmethod
    def of(cls, square: Scalar) -> SqrtPosReal:
        square = Cyclotomic.coerce(square)
        if not square.is_real():
            raise ValueError(f"square {square} is not real")
        value = square.embed().real
        if value <= POSITIVITY_TOL:
            raise ValueError(f"square {square} is not positive (~{value})")
        return cls(square, math.sqrt(value))

    def __mul__(self, other: SqrtPosReal) -> SqrtPosReal:
        return SqrtPosReal(self.square * other.square, self.approx * other.approx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SqrtPosReal):
            return NotImplemented
        return self.square == other.square

    def __hash__(self) -> int:
        return hash(self.square)


def sqrtpos_mul(a: SqrtPosReal, b: SqrtPosReal) -> SqrtPosReal:
    return a * b


def sqrtpos_eq(a: SqrtPosReal, b: SqrtPosReal) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# text grammar:  1/2*z^3 - z + 2


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    if not isinstance(x, Cyclotomic):
        return _fmt_frac(_as_fraction(x))
    terms = []
    for k in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[k]
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_frac(mag)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if mag == 1 else f"{_fmt_frac(mag)}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|([-+*/^()]))")


class _Parser:
    def __init__(self, text: str, order: int):
        self.text = text
        self.order = order
        self.tokens: list[str] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise ScalarParseError(f"unexpected character {stripped[pos:].lstrip()[:1]!r} in {text!r}")
            self.tokens.append(m.group(m.lastindex))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ScalarParseError(f"unexpected end of {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Cyclotomic:
        if not self.tokens:
            raise ScalarParseError("empty scalar")
        value = self.expr()
        if self.peek() is not None:
            raise ScalarParseError(f"trailing input {self.peek()!r} in {self.text!r}")
        return value

    def expr(self) -> Cyclotomic:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Cyclotomic:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ScalarParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self) -> Cyclotomic:
        if self.peek() in ("+", "-"):
            op = self.take()
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self) -> Cyclotomic:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("+", "-"):
                sign = -1 if self.take() == "-" else 1
            tok = self.take()
            if not tok.isdigit():
                raise ScalarParseError(f"exponent must be an integer in {self.text!r}")
            e = sign * int(tok)
            if e < 0 and base.is_zero():
                raise ScalarParseError(f"division by zero in {self.text!r}")
            base = base**e
        return base

    def atom(self) -> Cyclotomic:
        tok = self.take()
        if tok == "(":
            v = self.expr()
            if self.take() != ")":
                raise ScalarParseError(f"unbalanced parentheses in {self.text!r}")
            return v
        if tok == "z":
            return Cyclotomic.zeta(self.order)
        if tok.isdigit():
            return Cyclotomic.rational(int(tok), self.order)
        raise ScalarParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_scalar(text: str, order: int = 1) -> Cyclotomic:
    """Parse an exact scalar; `z` denotes zeta_order. Floats are rejected."""
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar must be a string, got {type(text).__name__}")
    return _Parser(text, order).parse()
