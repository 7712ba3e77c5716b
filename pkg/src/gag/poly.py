"""Multivariate polynomials, multivariate division and reduced Gröbner bases.

Coefficients live in a ring object from :mod:`gag.field`: a :class:`FieldSpec`
(raw integer encodings) or :data:`QQ` (``Fraction``).  Polynomials are
immutable; arithmetic returns fresh objects.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from ._expr import ParseError, parse_expression
from .field import FieldSpec, QQ

Monomial = tuple[int, ...]


class PolyError(ValueError):
    """Ambient dimension or coefficient ring mismatch."""


@dataclass(frozen=True)
class MonomialOrder:
    """lex, graded lex or graded reverse lex over a permutation of the variables.

    ``perm[0]`` is the most significant variable; ``None`` means natural order.
    """

    kind: str = "grevlex"
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial) -> tuple:
        if self.perm is not None:
            m = tuple(m[i] for i in self.perm)
        if self.kind == "lex":
            return m
        if self.kind == "grlex":
            return (sum(m),) + m
        return (sum(m),) + tuple(-e for e in reversed(m))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


def order_from_name(name: str) -> MonomialOrder:
    return MonomialOrder(name)


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _mono_add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    __slots__ = ("ring", "n", "terms", "_hash")

    def __init__(self, ring, n: int, terms: dict | None = None, _clean: bool = False):
        self.ring = ring
        self.n = n
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {tuple(m): c for m, c in terms.items() if not ring.is_zero(c)}
            for m in terms:
                if len(m) != n:
                    raise PolyError(f"monomial {m} has wrong length for {n} variables")
        self.terms = terms
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ring, n: int) -> "Polynomial":
        return cls(ring, n, {}, _clean=True)

    @classmethod
    def const(cls, ring, n: int, c) -> "Polynomial":
        if isinstance(c, int) and not isinstance(c, bool) and ring is QQ:
            c = Fraction(c)
        return cls(ring, n, {(0,) * n: c})

    @classmethod
    def var(cls, ring, n: int, i: int, power: int = 1) -> "Polynomial":
        if not 0 <= i < n:
            raise PolyError(f"variable index {i} out of range for {n} variables")
        m = [0] * n
        m[i] = power
        return cls(ring, n, {tuple(m): ring.one}, _clean=True)

    @classmethod
    def variables(cls, ring, n: int) -> list["Polynomial"]:
        return [cls.var(ring, n, i) for i in range(n)]

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.n, self.ring.zero)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables_used(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.n != self.n:
            raise PolyError(f"ambient mismatch: {self.n} vs {other.n} variables")
        if other.ring != self.ring:
            raise PolyError("coefficient ring mismatch")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.ring, self.n, self.ring.from_int(other) if isinstance(other, int) else other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        R = self.ring
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = R.add(out[m], c)
                if R.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Polynomial(R, self.n, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return Polynomial(R, self.n, {m: R.neg(c) for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        R = self.ring
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_add(m1, m2)
                c = R.mul(c1, c2)
                if m in out:
                    c = R.add(out[m], c)
                out[m] = c
        return Polynomial(R, self.n, {m: c for m, c in out.items() if not R.is_zero(c)}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise PolyError("negative polynomial power")
        result = Polynomial.const(self.ring, self.n, self.ring.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        R = self.ring
        if R.is_zero(c):
            return Polynomial.zero(R, self.n)
        return Polynomial(R, self.n, {m: R.mul(c, v) for m, v in self.terms.items()}, _clean=True)

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        R = self.ring
        return Polynomial(
            R, self.n, {_mono_add(m, mono): R.mul(c, v) for m, v in self.terms.items()}, _clean=True
        )

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # order-dependent ----------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Monomial, object]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.ring.inv(c))

    # structural ---------------------------------------------------------
    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        return substitute(self, images)

    def extend(self, n_new: int, offset: int = 0) -> "Polynomial":
        """Re-embed into ``n_new`` variables, shifting variable ``i`` to ``i + offset``."""
        if offset + self.n > n_new:
            raise PolyError("extension too small")
        pre, post = (0,) * offset, (0,) * (n_new - offset - self.n)
        return Polynomial(self.ring, n_new, {pre + m + post: c for m, c in self.terms.items()}, _clean=True)

    def rename(self, mapping: Sequence[int], n_new: int) -> "Polynomial":
        """Send variable ``i`` to variable ``mapping[i]`` of an ``n_new``-variable ring."""
        R = self.ring
        out: dict = {}
        for m, c in self.terms.items():
            nm = [0] * n_new
            for i, e in enumerate(m):
                if e:
                    nm[mapping[i]] += e
            nm = tuple(nm)
            out[nm] = R.add(out[nm], c) if nm in out else c
        return Polynomial(R, n_new, {m: c for m, c in out.items() if not R.is_zero(c)}, _clean=True)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at raw ring values."""
        R = self.ring
        acc = R.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = R.mul(v, R.pow(x, e))
            acc = R.add(acc, v)
        return acc

    def evaluate_batch(self, columns: Sequence[np.ndarray], size: int) -> np.ndarray:
        """Vectorized evaluation over a finite field; ``columns[i]`` holds variable i."""
        spec = self.ring
        if not isinstance(spec, FieldSpec):
            raise PolyError("batch evaluation needs a finite field")
        return _eval_batch(spec, self.terms, columns, size)

    # text -----------------------------------------------------------------
    def to_str(self, order: MonomialOrder = GREVLEX, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        R = self.ring
        names = names or [f"x{i + 1}" for i in range(self.n)]
        pieces: list[tuple[str, str]] = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            sign = "+"
            if R is QQ and c < 0:
                sign, c = "-", -c
            cs = R.format(c)
            if isinstance(R, FieldSpec) and R.t > 1 and "+" in cs:
                cs = f"({cs})"
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            pieces.append((sign, body))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, n={self.n}, ring={self.ring})"

    def to_json(self, order: MonomialOrder = GREVLEX) -> list:
        return [[_coeff_json(self.ring, c), list(m)] for m, c in self.sorted_terms(order)]


def _coeff_json(ring, c):
    if isinstance(ring, FieldSpec) and ring.t == 1:
        return int(c)
    return ring.format(c)


def poly_from_json(data: list, ring, n: int) -> Polynomial:
    terms = {}
    for c, m in data:
        terms[tuple(m)] = ring.parse(c) if isinstance(c, str) else ring.from_int(int(c))
    return Polynomial(ring, n, terms)


_POW_CACHE: dict = {}


def _pow_table(spec: FieldSpec) -> np.ndarray:
    """pw[e, x] = x^e for 0 <= e < q (higher exponents are folded)."""
    tab = _POW_CACHE.get(spec)
    if tab is None:
        q = spec.q
        tab = np.zeros((q, q), dtype=np.int64)
        tab[0, :] = 1
        for e in range(1, q):
            tab[e] = spec.mul_table[tab[e - 1], np.arange(q)]
        _POW_CACHE[spec] = tab
    return tab


def _fold_exponent(e: int, q: int) -> int:
    return e if e < q else ((e - 1) % (q - 1)) + 1


def _eval_batch(spec: FieldSpec, terms: dict, columns, size: int) -> np.ndarray:
    q = spec.q
    prime = spec.t == 1
    acc = np.zeros(size, dtype=np.int64)
    pw = _pow_table(spec) if not prime or q <= 64 else None
    for m, c in terms.items():
        val = np.full(size, c, dtype=np.int64)
        for i, e in enumerate(m):
            if not e:
                continue
            col = columns[i]
            if pw is not None:
                factor = pw[_fold_exponent(e, q)][col]
            else:
                factor = np.ones(size, dtype=np.int64)
                for _ in range(_fold_exponent(e, q)):
                    factor = (factor * col) % q
            val = (val * factor) % q if prime else spec.mul_table[val, factor]
        acc = (acc + val) % q if prime else spec.add_table[acc, val]
    return acc


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple[Polynomial, ...]
    n: int
    ring: object
    order: MonomialOrder = GREVLEX
    is_reduced_groebner: bool = False

    @classmethod
    def of(cls, gens: Iterable[Polynomial], n: int | None = None, ring=None,
           order: MonomialOrder = GREVLEX) -> "IdealBasis":
        gens = tuple(gens)
        if gens:
            n = gens[0].n if n is None else n
            ring = gens[0].ring if ring is None else ring
        if n is None or ring is None:
            raise PolyError("empty ideal needs explicit n and ring")
        for g in gens:
            if g.n != n:
                raise PolyError(f"generator in {g.n} variables, expected {n}")
            if g.ring != ring:
                raise PolyError("generators over different coefficient rings")
        return cls(gens, n, ring, order, False)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def to_json(self) -> list:
        return [g.to_json(self.order) for g in self.generators]

    def __str__(self):
        return "{" + ", ".join(g.to_str(self.order) for g in self.generators) + "}"


def _as_basis(basis, f: Polynomial | None = None, order: MonomialOrder | None = None) -> IdealBasis:
    if isinstance(basis, IdealBasis):
        return basis
    gens = tuple(basis)
    if not gens and f is not None:
        return IdealBasis((), f.n, f.ring, order or GREVLEX)
    return IdealBasis.of(gens, order=order or GREVLEX)


def normal_form(f: Polynomial, basis, order: MonomialOrder = GREVLEX,
                with_quotients: bool = False):
    """Multivariate division of ``f`` by ``basis``.

    Returns the remainder, or ``(remainder, quotients)`` when ``with_quotients``
    is set, so that ``f == sum(q_i * g_i) + remainder``.
    """
    B = _as_basis(basis, f, order)
    gens = [g for g in B.generators if not g.is_zero()]
    for g in gens:
        f._check(g)
    R = f.ring
    leads = [g.leading_term(order) for g in gens]
    quotients = [dict() for _ in gens] if with_quotients else None
    p = dict(f.terms)
    rem: dict = {}
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for idx, (lm, lc) in enumerate(leads):
            if _mono_divides(lm, m):
                shift = _mono_sub(m, lm)
                factor = R.div(c, lc)
                for gm, gc in gens[idx].terms.items():
                    tm = _mono_add(gm, shift)
                    v = R.sub(p.get(tm, R.zero), R.mul(factor, gc))
                    if R.is_zero(v):
                        p.pop(tm, None)
                    else:
                        p[tm] = v
                if with_quotients:
                    qd = quotients[idx]
                    v = R.add(qd.get(shift, R.zero), factor)
                    if R.is_zero(v):
                        qd.pop(shift, None)
                    else:
                        qd[shift] = v
                break
        else:
            rem[m] = c
            del p[m]
    r = Polynomial(R, f.n, rem, _clean=True)
    if with_quotients:
        qs = []
        it = iter(quotients)
        for g in B.generators:
            qs.append(Polynomial.zero(R, f.n) if g.is_zero() else Polynomial(R, f.n, next(it), _clean=True))
        return r, qs
    return r


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    (mf, cf), (mg, cg) = f.leading_term(order), g.leading_term(order)
    lcm = _mono_lcm(mf, mg)
    R = f.ring
    return f.mul_term(_mono_sub(lcm, mf), R.inv(cf)) - g.mul_term(_mono_sub(lcm, mg), R.inv(cg))


def buchberger(gens, order: MonomialOrder = GREVLEX) -> IdealBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Uses normal pair selection and the coprime-leading-monomial criterion.
    The output is monic, inter-reduced and sorted by descending leading
    monomial, hence identical for any generating set of the same ideal.
    """
    B = gens if isinstance(gens, IdealBasis) else IdealBasis.of(tuple(gens), order=order)
    n, ring = B.n, B.ring
    G: list[Polynomial] = []
    for g in B.generators:
        if not g.is_zero():
            G.append(g.monic(order))
    if any(g.is_constant() for g in G):
        one = Polynomial.const(ring, n, ring.one)
        return IdealBasis((one,), n, ring, order, True)
    lms = [g.leading_monomial(order) for g in G]
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    key = order.key
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_mono_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pairs.discard((i, j))
        a, b = lms[i], lms[j]
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        r = normal_form(s_polynomial(G[i], G[j], order), G, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.is_constant():
            one = Polynomial.const(ring, n, ring.one)
            return IdealBasis((one,), n, ring, order, True)
        G.append(r)
        lms.append(r.leading_monomial(order))
        k = len(G) - 1
        pairs.update((t, k) for t in range(k))
    reduced = _reduce_basis(G, order)
    out = IdealBasis(tuple(reduced), n, ring, order, True)
    for g in B.generators:
        if not normal_form(g, out.generators, order).is_zero():
            raise AssertionError("Gröbner basis does not contain an input generator")
    return out


def _reduce_basis(G: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    key = order.key
    items = sorted(G, key=lambda g: key(g.leading_monomial(order)))
    minimal: list[Polynomial] = []
    for g in items:
        lm = g.leading_monomial(order)
        if not any(_mono_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    result = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        result.append(normal_form(g, others, order).monic(order) if others else g.monic(order))
    result.sort(key=lambda g: key(g.leading_monomial(order)), reverse=True)
    return result


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    gens = [g for g in basis if not g.is_zero()]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not normal_form(s_polynomial(gens[i], gens[j], order), gens, order).is_zero():
                return False
    return True


def is_reduced_groebner(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    gens = list(basis)
    if not is_groebner(gens, order):
        return False
    lms = [g.leading_term(order) for g in gens]
    if len({m for m, _ in lms}) != len(gens):
        return False
    R = gens[0].ring if gens else None
    for (m, c), g in zip(lms, gens):
        if c != R.one:
            return False
        for h_m, _ in lms:
            if h_m == m:
                continue
            if any(_mono_divides(h_m, tm) for tm in g.terms):
                return False
    return True


def q_saturate(basis, spec: FieldSpec) -> IdealBasis:
    """Adjoin the field equations ``x_i^q - x_i`` for every variable."""
    B = basis if isinstance(basis, IdealBasis) else IdealBasis.of(tuple(basis))
    if B.ring != spec:
        raise PolyError(f"ideal is over {B.ring}, not {spec}")
    extra = []
    for i in range(B.n):
        fe = Polynomial.var(spec, B.n, i, spec.q) - Polynomial.var(spec, B.n, i)
        if fe not in B.generators:
            extra.append(fe)
    return IdealBasis(B.generators + tuple(extra), B.n, spec, B.order, False)


def substitute(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Replace variable ``i`` of ``f`` by ``images[i]``."""
    images = list(images)
    if len(images) != f.n:
        raise PolyError(f"{len(images)} images for a polynomial in {f.n} variables")
    if not images:
        # constant in zero variables; the target ambient is unknown
        raise PolyError("substituting into a 0-variable polynomial needs substitute_into")
    return substitute_into(f, images, images[0].n)


def substitute_into(f: Polynomial, images: Sequence[Polynomial], n_target: int) -> Polynomial:
    R = f.ring
    for img in images:
        if img.n != n_target:
            raise PolyError("substitution images live in different ambients")
        if img.ring != R:
            raise PolyError("substitution images over a different ring")
    if len(images) != f.n:
        raise PolyError(f"{len(images)} images for a polynomial in {f.n} variables")
    cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        k = (i, e)
        if k not in cache:
            cache[k] = images[i] if e == 1 else images[i] ** e
        return cache[k]

    acc = Polynomial.zero(R, n_target)
    for m, c in f.terms.items():
        t = Polynomial.const(R, n_target, c)
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        acc = acc + t
    return acc


# ---------------------------------------------------------------------------
# text

_XVAR = re.compile(r"^x(\d+)$")


class _PolyAlgebra:
    def __init__(self, ring, names: Sequence[str] | None, n: int | None):
        self.ring = ring
        self.names = list(names) if names else None
        self.n = n
        self.max_index = -1

    # terms are sparse: monomial = sorted ((var, exp), ...)
    def const(self, k):
        c = self.ring.from_int(k)
        return {} if self.ring.is_zero(c) else {(): c}

    def var(self, name, pos):
        if self.names and name in self.names:
            idx = self.names.index(name)
        else:
            m = _XVAR.match(name)
            if m is not None and not self.names:
                idx = int(m.group(1)) - 1
                if idx < 0:
                    raise ParseError("variables are numbered from x1", pos)
            elif isinstance(self.ring, FieldSpec) and self.ring.t > 1 and name == "a":
                return {(): self.ring.p}  # encoding of the generator
            else:
                raise ParseError(f"unknown variable {name!r}", pos)
        if self.n is not None and idx >= self.n:
            raise ParseError(f"variable {name!r} outside the {self.n}-variable ambient", pos)
        self.max_index = max(self.max_index, idx)
        return {((idx, 1),): self.ring.one}

    def add(self, a, b):
        R = self.ring
        out = dict(a)
        for m, c in b.items():
            out[m] = R.add(out[m], c) if m in out else c
        return {m: c for m, c in out.items() if not R.is_zero(c)}

    def neg(self, a):
        return {m: self.ring.neg(c) for m, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        R = self.ring
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                d = dict(m1)
                for i, e in m2:
                    d[i] = d.get(i, 0) + e
                m = tuple(sorted(d.items()))
                c = R.mul(c1, c2)
                out[m] = R.add(out[m], c) if m in out else c
        return {m: c for m, c in out.items() if not R.is_zero(c)}

    def div(self, a, b, pos):
        if any(m for m in b) or not b:
            raise ParseError("only division by nonzero constants is supported", pos)
        inv = self.ring.inv(b[()])
        return {m: self.ring.mul(c, inv) for m, c in a.items()}

    def pow(self, a, e):
        out = {(): self.ring.one}
        for _ in range(e):
            out = self.mul(out, a)
        return out


def parse_polynomial(text: str, ring=QQ, n: int | None = None,
                     names: Sequence[str] | None = None, offset: int = 0) -> Polynomial:
    """Parse ``x1^2 + 3*x1*x2 - 1``; ``n`` defaults to the largest variable index."""
    polys = parse_polynomials([text], ring, n, names, [offset])
    return polys[0]


def parse_polynomials(texts: Sequence[str], ring=QQ, n: int | None = None,
                      names: Sequence[str] | None = None,
                      offsets: Sequence[int] | None = None) -> list[Polynomial]:
    """Parse several polynomials into one common ambient."""
    alg = _PolyAlgebra(ring, names, n)
    offsets = offsets or [0] * len(texts)
    raw = [parse_expression(t, alg, off) for t, off in zip(texts, offsets)]
    if n is None:
        n = len(names) if names else alg.max_index + 1
    out = []
    for terms in raw:
        dense = {}
        for m, c in terms.items():
            e = [0] * n
            for i, k in m:
                e[i] += k
            dense[tuple(e)] = c
        out.append(Polynomial(ring, n, dense))
    return out
