"""Exact arithmetic in F_p, GF(p^t) and the rationals.

Elements of GF(p^t) are packed into a single integer ``sum(c_i * p**i)`` where
``c_i`` are the power-basis coefficients of the extension generator ``a``.
That integer is also the element's position in :func:`enumerate_field`, so
``enumerate_field(GF(4))`` is ``[0, 1, a, a+1]``.

Polynomials and semantics use the raw integer encoding for speed;
:class:`FieldElement` is the user-facing wrapper.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from ._expr import ParseError, parse_expression

__all__ = [
    "FieldSpec",
    "FieldElement",
    "RationalField",
    "QQ",
    "FieldError",
    "GF",
    "parse_field",
    "field_arith",
    "trace",
    "enumerate_field",
    "CONWAY",
]


class FieldError(ArithmeticError):
    """Raised on division by zero, mismatched fields or invalid field data."""


# Conway polynomials, coefficients low-to-high.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}

# GF(p^t) multiplication tables are materialized up to this order.
_TABLE_LIMIT = 1 << 12


def _is_prime(n: int) -> bool:
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


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo monic ``m`` over F_p (coefficient lists low-to-high)."""
    a = [c % p for c in a]
    d = len(m) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * m[j]) % p
    a = a[:d] + [0] * max(0, d - len(a))
    return a


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    d = len(m) - 1
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            div = list(low) + [1]
            if not any(_poly_mod(list(m), div, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^t) defined by a monic irreducible polynomial."""

    p: int
    t: int = 1
    irreducible: tuple[int, ...] = ()
    q: int = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.t < 1:
            raise FieldError("extension degree must be >= 1")
        irr = tuple(int(c) % self.p for c in self.irreducible)
        if not irr:
            if self.t == 1:
                irr = (0, 1)
            elif (self.p, self.t) in CONWAY:
                irr = CONWAY[(self.p, self.t)]
            else:
                raise FieldError(
                    f"no built-in irreducible polynomial for GF({self.p}^{self.t}); "
                    "supply one explicitly"
                )
        if len(irr) != self.t + 1 or irr[-1] != 1:
            raise FieldError("irreducible polynomial must be monic of degree t")
        if self.t > 1:
            if any(_eval_int_poly(irr, x, self.p) == 0 for x in range(self.p)):
                raise FieldError("defining polynomial has a root in F_p")
            if not _is_irreducible(irr, self.p):
                raise FieldError("defining polynomial is reducible")
        object.__setattr__(self, "irreducible", irr)
        object.__setattr__(self, "q", self.p**self.t)

    # ring protocol on raw integer encodings -------------------------------
    is_finite = True

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def is_zero(self, a: int) -> bool:
        return a == 0

    def from_int(self, n: int) -> int:
        return n % self.p

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.t):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def pack(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.t:
            coeffs = _poly_mod(list(coeffs), self.irreducible, self.p)
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (int(c) % self.p)
        return v

    def add(self, a: int, b: int) -> int:
        if self.t == 1:
            return (a + b) % self.p
        return self.pack([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.t == 1:
            return (-a) % self.p
        return self.pack([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.t == 1:
            return (a * b) % self.p
        if self.q <= _TABLE_LIMIT:
            return int(self.mul_table[a, b])
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.t - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.pack(_poly_mod(prod, self.irreducible, self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        if self.t == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def trace_raw(self, a: int) -> int:
        """Field trace down to F_p as an integer in [0, p)."""
        if self.t == 1:
            return a
        acc, x = 0, a
        for _ in range(self.t):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        return acc

    # numpy tables for vectorized evaluation -------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        q = self.q
        if self.t == 1:
            r = np.arange(q)
            return (r[:, None] + r[None, :]) % q
        tab = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                tab[a, b] = self.add(a, b)
        return tab

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        if q > _TABLE_LIMIT:
            raise FieldError(f"GF({q}) is too large for tabulated arithmetic")
        if self.t == 1:
            r = np.arange(q)
            return (r[:, None] * r[None, :]) % q
        tab = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                tab[a, b] = tab[b, a] = self._mul_slow(a, b)
        return tab

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        return np.array([self.trace_raw(a) for a in range(self.q)], dtype=np.int64)

    # text ------------------------------------------------------------------
    def parse(self, text: str, offset: int = 0) -> int:
        return parse_expression(text, _FieldAlgebra(self), offset)

    def format(self, a: int) -> str:
        if self.t == 1:
            return str(a)
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs(a)))):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "a" if i == 1 else f"a^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def label(self) -> str:
        return str(self.p) if self.t == 1 else f"{self.p}^{self.t}"

    def __str__(self) -> str:
        return f"GF({self.label()})"

    # element helpers -------------------------------------------------------
    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.pack(value))
        return FieldElement(self, self.from_int(int(value)))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]

    def generator(self) -> "FieldElement":
        return FieldElement(self, self.p if self.t > 1 else 1)


def _eval_int_poly(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


class _FieldAlgebra:
    def __init__(self, spec: FieldSpec):
        self.s = spec

    def const(self, n):
        return self.s.from_int(n)

    def var(self, name, pos):
        if name == "a" and self.s.t > 1:
            return self.s.p
        raise ParseError(f"unknown symbol {name!r} in element of {self.s}", pos)

    def add(self, a, b):
        return self.s.add(a, b)

    def sub(self, a, b):
        return self.s.sub(a, b)

    def mul(self, a, b):
        return self.s.mul(a, b)

    def div(self, a, b, pos):
        if b == 0:
            raise ParseError("division by zero", pos)
        return self.s.div(a, b)

    def neg(self, a):
        return self.s.neg(a)

    def pow(self, a, e):
        return self.s.pow(a, e)


class RationalField:
    """The field Q with :class:`fractions.Fraction` elements."""

    is_finite = False
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)
    q = None

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) * self.inv(b)

    def pow(self, a, e: int):
        return Fraction(a) ** e

    def parse(self, text: str, offset: int = 0) -> Fraction:
        return Fraction(parse_expression(text, _RationalAlgebra(), offset))

    def format(self, a) -> str:
        return str(Fraction(a))

    def label(self) -> str:
        return "Q"

    def element(self, value) -> Fraction:
        if isinstance(value, str):
            return self.parse(value)
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"

    __str__ = label


class _RationalAlgebra:
    def const(self, n):
        return Fraction(n)

    def var(self, name, pos):
        raise ParseError(f"unknown symbol {name!r} in rational literal", pos)

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)
    pow = staticmethod(lambda a, e: a**e)

    def div(self, a, b, pos):
        if b == 0:
            raise ParseError("division by zero", pos)
        return Fraction(a) / b


QQ = RationalField()


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldError(f"{self.value} is not an element encoding of {self.spec}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError(f"mismatched fields {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def trace(self) -> "FieldElement":
        return trace(self)

    def __str__(self):
        return self.spec.format(self.value)

    def __repr__(self):
        return f"FieldElement({self.spec.label()}, {self})"


def GF(q_or_p: int, t: int | None = None, irreducible: Sequence[int] = ()) -> FieldSpec:
    """``GF(4)`` or ``GF(2, 2)``; a prime power is factored automatically."""
    if t is None:
        n = q_or_p
        for p in range(2, n + 1):
            if n % p == 0:
                t = 0
                while n % p == 0:
                    n //= p
                    t += 1
                if n != 1:
                    raise FieldError(f"{q_or_p} is not a prime power")
                return FieldSpec(p, t, tuple(irreducible))
        raise FieldError(f"{q_or_p} is not a prime power")
    return FieldSpec(q_or_p, t, tuple(irreducible))


def parse_field(text: str, irreducible: str | Sequence[int] | None = None):
    """Parse ``2``, ``2^2``, ``9`` or ``Q``; ``irreducible`` is ``"c0,c1,...,ct"``."""
    text = text.strip()
    if text.upper() in ("Q", "QQ"):
        return QQ
    if isinstance(irreducible, str):
        irreducible = [int(c) for c in irreducible.split(",") if c.strip()]
    irr = tuple(irreducible or ())
    try:
        if "^" in text:
            p, t = text.split("^")
            return FieldSpec(int(p), int(t), irr)
        n = int(text)
    except ValueError as exc:
        raise FieldError(f"cannot parse field {text!r}") from exc
    if irr:
        return GF(n, None, irr)
    return GF(n)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.spec != b.spec:
        raise FieldError(f"mismatched fields {a.spec} and {b.spec}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def trace(x: FieldElement) -> FieldElement:
    """tr(x) = x + x^p + ... + x^(p^(t-1)), returned as an element of the same field."""
    return FieldElement(x.spec, x.spec.trace_raw(x.value))


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    return spec.elements()

