"""Diagram syntax: generators, inductive terms, open hypergraphs, DSL and sugar.

A diagram ``n -> m`` is drawn with ``n`` inputs and ``m`` outputs.  Terms are
the free syntax (``Empty | Id | Swap | Gen | Comp | Tensor``); an
:class:`OpenGraph` is the coherence-free representation in which two terms
related by the strict symmetric monoidal axioms become isomorphic.
"""
from __future__ import annotations

import enum
import heapq
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

from ._expr import ParseError
from .field import FieldElement, FieldSpec, QQ
from .poly import GREVLEX, IdealBasis, MonomialOrder, Polynomial, parse_polynomials


class DiagramError(ValueError):
    """Arity mismatch or a generator outside the active language."""


# ---------------------------------------------------------------------------
# generators

ARITY = {
    "copy": (1, 2),
    "del": (1, 0),
    "add": (2, 1),
    "zero": (0, 1),
    "mul": (2, 1),
    "one": (0, 1),
    "sc": (1, 1),
    "z1": (0, 1),
    "sdown": (0, 0),
}
FOURIER_KINDS = ("z1", "sdown")


def _scalar_text(c) -> str:
    if isinstance(c, FieldElement):
        return str(c)
    return str(Fraction(c))


def _scalar_key(c) -> str:
    if isinstance(c, FieldElement):
        return f"{c.spec.label()}:{c.value:06d}"
    c = Fraction(c)
    return f"Q:{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Generator:
    kind: str
    daggered: bool = False
    scalar: Any = None

    def __post_init__(self):
        if self.kind not in ARITY:
            raise DiagramError(f"unknown generator {self.kind!r}")
        if (self.kind == "sc") != (self.scalar is not None):
            raise DiagramError("a scalar payload is required exactly for 'sc'")
        if self.kind == "sc" and not isinstance(self.scalar, FieldElement):
            object.__setattr__(self, "scalar", Fraction(self.scalar))

    @property
    def n_in(self) -> int:
        a = ARITY[self.kind]
        return a[1] if self.daggered else a[0]

    @property
    def n_out(self) -> int:
        a = ARITY[self.kind]
        return a[0] if self.daggered else a[1]

    def dagger(self) -> "Generator":
        if self.kind == "sdown":
            return self
        if self.kind == "z1":
            raise DiagramError("the Fourier state has no dagger in this language")
        return Generator(self.kind, not self.daggered, self.scalar)

    def key(self) -> str:
        s = self.kind + ("'" if self.daggered else "")
        if self.scalar is not None:
            s += "(" + _scalar_key(self.scalar) + ")"
        return s

    def dsl(self) -> str:
        s = f"sc({_scalar_text(self.scalar)})" if self.kind == "sc" else self.kind
        return s + ("'" if self.daggered else "")

    def __str__(self):
        return self.dsl()


COPY = Generator("copy")
DELETE = Generator("del")
ADD = Generator("add")
ZERO = Generator("zero")
MULT = Generator("mul")
ONE = Generator("one")
FOURIER_STATE = Generator("z1")
SCALAR_DOWN = Generator("sdown")


def scalar_gen(c) -> Generator:
    return Generator("sc", False, c)


# ---------------------------------------------------------------------------
# languages


class LanguageTag(enum.IntEnum):
    LCALG = 0
    GCA = 1
    GAG_K = 2
    GAG_Q = 3
    GAG_Q_FOURIER = 4


@dataclass(frozen=True)
class Language:
    tag: LanguageTag
    ring: Any = QQ

    def __post_init__(self):
        if isinstance(self.tag, str):
            object.__setattr__(self, "tag", LanguageTag[self.tag.upper()])
        if self.tag >= LanguageTag.GAG_Q and not getattr(self.ring, "is_finite", False):
            raise DiagramError(f"{self.tag.name} requires a finite field")

    @property
    def daggers(self) -> bool:
        return self.tag >= LanguageTag.GCA

    @property
    def fourier(self) -> bool:
        return self.tag == LanguageTag.GAG_Q_FOURIER

    def admits(self, g) -> bool:
        if not isinstance(g, Generator):
            return False
        if g.kind in FOURIER_KINDS:
            return self.fourier
        if g.daggered and not self.daggers:
            return False
        if g.kind == "sc":
            try:
                coerce_scalar(g.scalar, self.ring)
            except (DiagramError, ArithmeticError):
                return False
        return True

    def check(self, t: "Term") -> "Term":
        for g in t.generators():
            if not self.admits(g):
                raise DiagramError(f"generator {g.dsl()} is not admissible in {self}")
        return t

    def __str__(self):
        return f"{self.tag.name}[{self.ring.label() if hasattr(self.ring, 'label') else self.ring}]"


def language(tag: str | LanguageTag, ring=QQ) -> Language:
    return Language(LanguageTag[tag.upper()] if isinstance(tag, str) else tag, ring)


def coerce_scalar(c, ring):
    """Raw ring value of a scalar payload (rationals map into F_p when possible)."""
    if isinstance(ring, FieldSpec):
        if isinstance(c, FieldElement):
            if c.spec != ring:
                raise DiagramError(f"scalar {c} belongs to {c.spec}, not {ring}")
            return c.value
        c = Fraction(c)
        if c.denominator % ring.p == 0:
            raise DiagramError(f"scalar {c} has no image in {ring}")
        return ring.div(ring.from_int(c.numerator), ring.from_int(c.denominator))
    if isinstance(c, FieldElement):
        raise DiagramError(f"finite-field scalar {c} used over {ring}")
    return Fraction(c)


def ring_scalar(value, ring):
    """The payload object for a raw ring value."""
    if isinstance(ring, FieldSpec):
        return FieldElement(ring, value)
    return Fraction(value)


# ---------------------------------------------------------------------------
# terms


class Term:
    """Base class; concrete shapes are frozen dataclasses below."""

    n_in: int
    n_out: int

    def __rshift__(self, other: "Term") -> "Term":
        return compose(self, other)

    def __matmul__(self, other: "Term") -> "Term":
        return tensor(self, other)

    def generators(self) -> Iterable[Any]:
        stack = [self]
        while stack:
            t = stack.pop()
            if isinstance(t, Gen):
                yield t.gen
            elif isinstance(t, (Comp, Tensor)):
                stack.append(t.right)
                stack.append(t.left)

    def size(self) -> int:
        return sum(1 for _ in self.generators())

    def is_identity(self) -> bool:
        stack = [self]
        while stack:
            t = stack.pop()
            if isinstance(t, Tensor):
                stack.extend((t.left, t.right))
            elif not isinstance(t, (Id, Empty)):
                return False
        return True

    def __str__(self):
        return to_dsl(self)


@dataclass(frozen=True, eq=True)
class Empty(Term):
    n_in: int = dc_field(default=0, init=False)
    n_out: int = dc_field(default=0, init=False)


@dataclass(frozen=True, eq=True)
class Id(Term):
    n_in: int = dc_field(default=1, init=False)
    n_out: int = dc_field(default=1, init=False)


@dataclass(frozen=True, eq=True)
class Swap(Term):
    n_in: int = dc_field(default=2, init=False)
    n_out: int = dc_field(default=2, init=False)


@dataclass(frozen=True, eq=True)
class Gen(Term):
    gen: Any
    n_in: int = dc_field(default=0, init=False, compare=False)
    n_out: int = dc_field(default=0, init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n_in", self.gen.n_in)
        object.__setattr__(self, "n_out", self.gen.n_out)


@dataclass(frozen=True, eq=True)
class Comp(Term):
    left: Term
    right: Term
    n_in: int = dc_field(default=0, init=False, compare=False)
    n_out: int = dc_field(default=0, init=False, compare=False)

    def __post_init__(self):
        if self.left.n_out != self.right.n_in:
            raise DiagramError(
                f"cannot compose {self.left.n_in}->{self.left.n_out} with "
                f"{self.right.n_in}->{self.right.n_out}"
            )
        object.__setattr__(self, "n_in", self.left.n_in)
        object.__setattr__(self, "n_out", self.right.n_out)


@dataclass(frozen=True, eq=True)
class Tensor(Term):
    left: Term
    right: Term
    n_in: int = dc_field(default=0, init=False, compare=False)
    n_out: int = dc_field(default=0, init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n_in", self.left.n_in + self.right.n_in)
        object.__setattr__(self, "n_out", self.left.n_out + self.right.n_out)


EMPTY = Empty()
ID = Id()
SWAP = Swap()


def gen(g) -> Gen:
    return Gen(g)


def id_n(n: int) -> Term:
    if n < 0:
        raise DiagramError("negative wire count")
    if n == 0:
        return EMPTY
    t: Term = ID
    for _ in range(n - 1):
        t = Tensor(t, ID)
    return t


def compose(*ts: Term) -> Term:
    """Sequential composition, dropping identity factors."""
    if not ts:
        raise DiagramError("compose needs at least one term")
    for a, b in zip(ts, ts[1:]):
        if a.n_out != b.n_in:
            raise DiagramError(f"cannot compose {a.n_in}->{a.n_out} with {b.n_in}->{b.n_out}")
    rest = [t for t in ts if not t.is_identity()]
    if not rest:
        return id_n(ts[0].n_in)
    out = rest[0]
    for t in rest[1:]:
        out = Comp(out, t)
    return out


def tensor(*ts: Term) -> Term:
    """Parallel composition, dropping empty factors."""
    rest = [t for t in ts if not isinstance(t, Empty)]
    if not rest:
        return EMPTY
    out = rest[0]
    for t in rest[1:]:
        out = Tensor(out, t)
    return out


def dagger(t: Term, lang: Language | None = None) -> Term:
    """Mirror a term: reverses boundaries and daggers every generator."""
    if lang is not None and not lang.daggers:
        raise DiagramError(f"{lang} does not admit daggers")
    if isinstance(t, (Empty, Id, Swap)):
        return t
    if isinstance(t, Gen):
        return Gen(t.gen.dagger())
    if isinstance(t, Comp):
        return Comp(dagger(t.right), dagger(t.left))
    if isinstance(t, Tensor):
        return Tensor(dagger(t.left), dagger(t.right))
    raise TypeError(f"not a term: {t!r}")


def permutation(perm: Sequence[int]) -> Term:
    """Wire permutation whose output ``i`` is input ``perm[i]``; adjacent swaps."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError(f"{list(perm)} is not a permutation")
    cur = list(range(n))
    layers: list[Term] = []
    target = list(perm)
    # bubble sort cur into target, recording adjacent transpositions
    for i in range(n):
        j = cur.index(target[i], i)
        while j > i:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            layers.append(tensor(id_n(j - 1), SWAP, id_n(n - j - 1)))
            j -= 1
    return compose(id_n(n), *layers)


def reorder(current: Sequence, target: Sequence) -> Term:
    """Permutation term taking wires labelled ``current`` to labels ``target``."""
    pos = {w: i for i, w in enumerate(current)}
    return permutation([pos[w] for w in target])


# ---------------------------------------------------------------------------
# printing


def to_dsl(t: Term) -> str:
    if isinstance(t, Empty):
        return "id0"
    if isinstance(t, Id):
        return "id"
    if isinstance(t, Swap):
        return "swap"
    if isinstance(t, Gen):
        return t.gen.dsl()
    if isinstance(t, Comp):
        lhs = to_dsl(t.left)
        rhs = to_dsl(t.right)
        if isinstance(t.right, Comp):
            rhs = f"({rhs})"
        return f"{lhs} ; {rhs}"
    if isinstance(t, Tensor):
        lhs = to_dsl(t.left)
        rhs = to_dsl(t.right)
        if isinstance(t.left, Comp):
            lhs = f"({lhs})"
        if isinstance(t.right, (Comp, Tensor)):
            rhs = f"({rhs})"
        return f"{lhs} * {rhs}"
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# parsing

def _lex(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("ident", text[i:j], i))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], i))
            i = j
        elif ch == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
        else:
            # anything else is a one-character operator; the grammar rejects strays
            out.append(("op", ch, i))
            i += 1
    return out


AtomHandler = Callable[["DslParser", str, int], Term]


class DslParser:
    """Recursive-descent parser; ``*`` binds tighter than ``;``."""

    def __init__(self, text: str, lang: Language, atoms: dict[str, AtomHandler] | None = None):
        self.text = text
        self.lang = lang
        self.toks = _lex(text)
        self.i = 0
        self.atoms = dict(_BASE_ATOMS)
        if atoms:
            self.atoms.update(atoms)

    # token helpers
    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def expect(self, value: str) -> int:
        tok = self.peek()
        if tok is None or tok[1] != value:
            pos = tok[2] if tok else len(self.text)
            raise ParseError(f"expected {value!r}", pos)
        self.i += 1
        return tok[2]

    def raw_until(self, close: str) -> tuple[str, int]:
        """Raw source text up to the matching ``close`` bracket (consumed)."""
        tok = self.peek()
        start = tok[2] if tok else len(self.text)
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                raise ParseError(f"missing {close!r}", len(self.text))
            if tok[0] == "op" and tok[1] in "([":
                depth += 1
            elif tok[0] == "op" and tok[1] in ")]":
                if depth == 0:
                    if tok[1] != close:
                        raise ParseError(f"expected {close!r}", tok[2])
                    self.i += 1
                    return self.text[start:tok[2]], start
                depth -= 1
            self.i += 1

    def int_arg(self) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "int":
            raise ParseError("expected an integer", tok[2] if tok else len(self.text))
        self.i += 1
        return int(tok[1])

    # grammar
    def parse(self) -> Term:
        if not self.toks:
            raise ParseError("empty diagram", 0)
        t = self.seq()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return t

    def seq(self) -> Term:
        t = self.tens()
        while self.at(";"):
            pos = self.peek()[2]
            self.i += 1
            rhs = self.tens()
            if t.n_out != rhs.n_in:
                raise ParseError(
                    f"arity mismatch in ';': {t.n_in}->{t.n_out} then {rhs.n_in}->{rhs.n_out}", pos
                )
            t = Comp(t, rhs)
        return t

    def tens(self) -> Term:
        t = self.postfix()
        while self.at("*"):
            self.i += 1
            t = Tensor(t, self.postfix())
        return t

    def postfix(self) -> Term:
        t = self.atom()
        while True:
            if self.at("'"):
                pos = self.peek()[2]
                self.i += 1
                if not self.lang.daggers:
                    raise ParseError(f"daggers are not admissible in {self.lang}", pos)
                try:
                    t = dagger(t)
                except DiagramError as exc:
                    raise ParseError(str(exc), pos) from exc
            elif self.at("^"):
                self.i += 1
                k = self.int_arg()
                out: Term = EMPTY
                for _ in range(k):
                    out = t if isinstance(out, Empty) else Tensor(out, t)
                t = out
            else:
                return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of diagram", len(self.text))
        kind, value, pos = tok
        if kind == "op" and value == "(":
            self.i += 1
            t = self.seq()
            self.expect(")")
            return t
        if kind != "ident":
            raise ParseError(f"unexpected {value!r}", pos)
        self.i += 1
        handler = self.atoms.get(value)
        if handler is None:
            raise ParseError(f"unknown atom {value!r}", pos)
        return handler(self, value, pos)

    # shared helpers for handlers
    def admit(self, g, pos) -> Term:
        if not self.lang.admits(g):
            raise ParseError(f"generator {g.dsl()} is not admissible in {self.lang}", pos)
        return Gen(g)

    def polylist(self, pos) -> tuple[list[Polynomial], int | None]:
        self.expect("[")
        body, start = self.raw_until("]")
        arity = None
        if ":" in body:
            body, _, ar = body.rpartition(":")
            try:
                arity = int(ar)
            except ValueError as exc:
                raise ParseError("arity suffix must be an integer", pos) from exc
        pieces, offsets = _split_commas(body, start)
        if len(pieces) == 1 and not pieces[0].strip():
            pieces, offsets = [], []
        polys = parse_polynomials(pieces, self.lang.ring, arity, offsets=offsets) if pieces else []
        return polys, arity


def _split_commas(body: str, start: int) -> tuple[list[str], list[int]]:
    pieces, offsets = [], []
    depth = 0
    last = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append(body[last:i])
            offsets.append(start + last)
            last = i + 1
    pieces.append(body[last:])
    offsets.append(start + last)
    return pieces, offsets


def _simple(g: Generator) -> AtomHandler:
    return lambda p, name, pos: p.admit(g, pos)


def _sc_atom(p: DslParser, name: str, pos: int) -> Term:
    p.expect("(")
    body, start = p.raw_until(")")
    value = p.lang.ring.parse(body, start)
    return p.admit(Generator("sc", False, ring_scalar(value, p.lang.ring)), pos)


def _state_atom(p: DslParser, name: str, pos: int) -> Term:
    p.expect("(")
    body, start = p.raw_until(")")
    value = p.lang.ring.parse(body, start)
    return state(value, p.lang.ring)


def _poly_atom(p: DslParser, name: str, pos: int) -> Term:
    polys, arity = p.polylist(pos)
    n = arity if arity is not None else (polys[0].n if polys else 0)
    return poly_box(polys, n=n, ring=p.lang.ring)


def _ideal_atom(p: DslParser, name: str, pos: int) -> Term:
    polys, arity = p.polylist(pos)
    n = arity if arity is not None else (polys[0].n if polys else 0)
    if not p.lang.daggers:
        raise ParseError(f"ideal gadgets need daggers, not admissible in {p.lang}", pos)
    return ideal_gadget(IdealBasis(tuple(polys), n, p.lang.ring))


_BASE_ATOMS: dict[str, AtomHandler] = {
    "id": lambda p, name, pos: ID,
    "id0": lambda p, name, pos: EMPTY,
    "swap": lambda p, name, pos: SWAP,
    "copy": _simple(COPY),
    "del": _simple(DELETE),
    "add": _simple(ADD),
    "zero": _simple(ZERO),
    "mul": _simple(MULT),
    "one": _simple(ONE),
    "z1": _simple(FOURIER_STATE),
    "sdown": _simple(SCALAR_DOWN),
    "sc": _sc_atom,
    "state": _state_atom,
    "poly": _poly_atom,
    "ideal": _ideal_atom,
}


def parse(text: str, lang: Language | None = None, atoms: dict[str, AtomHandler] | None = None) -> Term:
    """Parse DSL text into an arity-checked term."""
    lang = lang or Language(LanguageTag.GAG_K, QQ)
    try:
        t = DslParser(text, lang, atoms).parse()
    except DiagramError as exc:
        raise ParseError(str(exc)) from exc
    return t


# ---------------------------------------------------------------------------
# sugar


def fold_tree(g: Generator, k: int, unit: Term) -> Term:
    """Left-folded binary tree of a 2->1 generator on ``k`` wires; ``unit`` if k = 0."""
    if k == 0:
        return unit
    t: Term = ID
    for i in range(1, k):
        t = compose(tensor(t, ID), Gen(g))
    return t


def cofold_tree(g: Generator, k: int, counit: Term) -> Term:
    """Mirror image of :func:`fold_tree` for a 1->2 generator."""
    if k == 0:
        return counit
    t: Term = ID
    for i in range(1, k):
        t = compose(Gen(g), tensor(t, ID))
    return t


def copy_tree(k: int) -> Term:
    return cofold_tree(COPY, k, Gen(DELETE))


def bus(t: Term, n: int) -> Term:
    return tensor(*([t] * n)) if n else EMPTY


def bus_copy(n: int) -> Term:
    """n -> 2n, output ``(x1..xn, x1..xn)``."""
    layer = bus(Gen(COPY), n)
    cur = [w for i in range(n) for w in (i, i + n)]
    return compose(layer, reorder(cur, list(range(2 * n))))


def bus_delete(n: int) -> Term:
    return bus(Gen(DELETE), n)


def bus_binary(g: Generator, n: int) -> Term:
    """2n -> n, applying ``g`` to wires ``i`` and ``n + i``."""
    cur = list(range(2 * n))
    target = [w for i in range(n) for w in (i, i + n)]
    return compose(reorder(cur, target), bus(Gen(g), n))


def cup() -> Term:
    return Comp(Gen(DELETE.dagger()), Gen(COPY))


def cap() -> Term:
    return Comp(Gen(COPY.dagger()), Gen(DELETE))


def bus_cup(n: int) -> Term:
    """0 -> 2n, pairing wire ``i`` with wire ``n + i``."""
    if n == 0:
        return EMPTY
    layer = bus(cup(), n)
    cur = [w for i in range(n) for w in (i, i + n)]
    return compose(layer, reorder(cur, list(range(2 * n))))


def bus_cap(n: int) -> Term:
    return dagger(bus_cup(n))


def _as_polys(f, n: int | None, ring) -> tuple[list[Polynomial], int, Any]:
    polys = list(f)
    if polys:
        n = polys[0].n if n is None else n
        ring = polys[0].ring if ring is None else ring
        for g in polys:
            if g.n != n:
                raise DiagramError(f"polynomial in {g.n} variables, expected {n}")
            if g.ring != ring:
                raise DiagramError("polynomials over different rings")
    if n is None:
        raise DiagramError("empty polynomial tuple needs an explicit arity")
    return polys, n, ring if ring is not None else QQ


def poly_box(f: Sequence[Polynomial], n: int | None = None, ring=None,
             order: MonomialOrder = GREVLEX) -> Term:
    """Sum-of-products realisation of an m-tuple of polynomials in n variables (n -> m)."""
    polys, n, ring = _as_polys(f, n, ring)
    # factor lists: one entry per variable occurrence, in term order
    slots: list[int] = []
    plans: list[list[tuple[int, object]]] = []
    for g in polys:
        plan = []
        for mono, c in g.sorted_terms(order):
            factors = [i for i, e in enumerate(mono) for _ in range(e)]
            plan.append((len(factors), c))
            slots.extend(factors)
        plans.append(plan)
    counts = [slots.count(i) for i in range(n)]
    # stage 1: copy every input once per occurrence
    stage1 = tensor(*(copy_tree(k) for k in counts)) if n else EMPTY
    labels = [(i, j) for i in range(n) for j in range(counts[i])]
    seen = [0] * n
    target = []
    for i in slots:
        target.append((i, seen[i]))
        seen[i] += 1
    stage2 = reorder(labels, target) if labels else EMPTY
    # stage 3: per polynomial, products then scalars then a sum
    outs = []
    for plan in plans:
        terms = []
        for k, c in plan:
            t = fold_tree(MULT, k, Gen(ONE))
            if c != ring.one:
                t = compose(t, Gen(scalar_gen(ring_scalar(c, ring))))
            terms.append(t)
        box = tensor(*terms) if terms else EMPTY
        outs.append(compose(box, fold_tree(ADD, len(terms), Gen(ZERO))))
    stage3 = tensor(*outs) if outs else EMPTY
    return compose(stage1, stage2, stage3)


def poly_box_dagger(f: Sequence[Polynomial], n: int | None = None, ring=None) -> Term:
    return dagger(poly_box(f, n, ring))


def state(value, ring) -> Term:
    """0 -> 1 point state with constant leg ``value`` (a raw ring value)."""
    return poly_box([Polynomial.const(ring, 0, value)], 0, ring)


def zero_effect_of(g: Polynomial) -> Term:
    return compose(poly_box([g]), Gen(ZERO.dagger()))


def ideal_gadget(I, n: int | None = None) -> Term:
    """n -> n gadget asserting that every generator of ``I`` vanishes on the bus."""
    if isinstance(I, IdealBasis):
        gens, n = list(I.generators), I.n
    else:
        gens = list(I)
        if n is None:
            if not gens:
                raise DiagramError("empty ideal needs an explicit arity")
            n = gens[0].n
    pieces = []
    for g in gens:
        if g.n != n:
            raise DiagramError(f"generator in {g.n} variables on {n} wires")
        pieces.append(compose(bus_copy(n), tensor(id_n(n), zero_effect_of(g))))
    return compose(id_n(n), *pieces)


def cospan_term(left, right, ideal, r: int, ring) -> Term:
    """Re-expand a cospan: ``poly_box(left)† ; ideal_gadget ; poly_box(right)``."""
    return compose(
        dagger(poly_box(list(left), r, ring)),
        ideal_gadget(ideal, r),
        poly_box(list(right), r, ring),
    )


def closure(t: Term) -> Term:
    """Close an n -> n term with ``del'`` on the inputs and ``del`` on the outputs."""
    return compose(bus(Gen(DELETE.dagger()), t.n_in), t, bus_delete(t.n_out))


# ---------------------------------------------------------------------------
# open graphs


@dataclass(frozen=True)
class Node:
    gen: Any
    ins: tuple[int, ...]
    outs: tuple[int, ...]


@dataclass(frozen=True)
class OpenGraph:
    """Monogamous acyclic hypergraph with ordered boundaries.

    Every wire has exactly one source (an input position or a node output
    port) and exactly one target (an output position or a node input port).
    """

    nodes: tuple[Node, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    n_wires: int

    def __post_init__(self):
        src = [None] * self.n_wires
        tgt = [None] * self.n_wires

        def put(arr, w, v, what):
            if not 0 <= w < self.n_wires:
                raise DiagramError(f"wire {w} out of range")
            if arr[w] is not None:
                raise DiagramError(f"wire {w} has two {what}s")
            arr[w] = v

        for k, w in enumerate(self.inputs):
            put(src, w, ("in", k), "source")
        for k, w in enumerate(self.outputs):
            put(tgt, w, ("out", k), "target")
        for i, nd in enumerate(self.nodes):
            if len(nd.ins) != nd.gen.n_in or len(nd.outs) != nd.gen.n_out:
                raise DiagramError(f"node {i} port count disagrees with {nd.gen}")
            for k, w in enumerate(nd.ins):
                put(tgt, w, ("node", i, k), "target")
            for k, w in enumerate(nd.outs):
                put(src, w, ("node", i, k), "source")
        for w in range(self.n_wires):
            if src[w] is None or tgt[w] is None:
                raise DiagramError(f"wire {w} is dangling")
        object.__setattr__(self, "_src", tuple(src))
        object.__setattr__(self, "_tgt", tuple(tgt))

    @property
    def n_in(self) -> int:
        return len(self.inputs)

    @property
    def n_out(self) -> int:
        return len(self.outputs)

    def source(self, w: int):
        return self._src[w]

    def target(self, w: int):
        return self._tgt[w]

    # canonical labelling --------------------------------------------------
    @cached_property
    def _canon(self):
        wlab: dict[int, int] = {}
        nlab: dict[int, int] = {}
        queue: deque[int] = deque()

        def see_wire(w):
            if w not in wlab:
                wlab[w] = len(wlab)
                queue.append(w)

        def see_node(i):
            if i not in nlab:
                nlab[i] = len(nlab)
                nd = self.nodes[i]
                for w in nd.ins:
                    see_wire(w)
                for w in nd.outs:
                    see_wire(w)

        def drain():
            while queue:
                w = queue.popleft()
                for ep in (self._src[w], self._tgt[w]):
                    if ep[0] == "node":
                        see_node(ep[1])

        for w in self.inputs:
            see_wire(w)
        for w in self.outputs:
            see_wire(w)
        drain()
        enc_main = tuple(
            (self.nodes[i].gen.key(), tuple(wlab[w] for w in self.nodes[i].ins),
             tuple(wlab[w] for w in self.nodes[i].outs))
            for i in sorted(nlab, key=nlab.get)
        )
        boundary = (tuple(wlab[w] for w in self.inputs), tuple(wlab[w] for w in self.outputs))
        # closed components: minimum encoding over start nodes
        rest = [i for i in range(len(self.nodes)) if i not in nlab]
        comps = []
        remaining = set(rest)
        while remaining:
            seed = min(remaining)
            comp = self._component(seed)
            remaining -= comp
            best = None
            for start in sorted(comp):
                enc, norder, worder = self._encode_component(start)
                if best is None or enc < best[0]:
                    best = (enc, norder, worder)
            comps.append(best)
        comps.sort(key=lambda c: c[0])
        node_order = sorted(nlab, key=nlab.get)
        wire_order = sorted(wlab, key=wlab.get)
        for enc, norder, worder in comps:
            node_order.extend(norder)
            wire_order.extend(worder)
        key = (boundary, enc_main, tuple(c[0] for c in comps))
        return key, node_order, wire_order

    def _component(self, seed: int) -> set[int]:
        comp = {seed}
        stack = [seed]
        while stack:
            i = stack.pop()
            nd = self.nodes[i]
            for w in nd.ins + nd.outs:
                for ep in (self._src[w], self._tgt[w]):
                    if ep[0] == "node" and ep[1] not in comp:
                        comp.add(ep[1])
                        stack.append(ep[1])
        return comp

    def _encode_component(self, start: int):
        wlab: dict[int, int] = {}
        nlab: dict[int, int] = {}
        queue: deque[int] = deque()

        def see_node(i):
            if i not in nlab:
                nlab[i] = len(nlab)
                nd = self.nodes[i]
                for w in nd.ins + nd.outs:
                    if w not in wlab:
                        wlab[w] = len(wlab)
                        queue.append(w)

        see_node(start)
        while queue:
            w = queue.popleft()
            for ep in (self._src[w], self._tgt[w]):
                if ep[0] == "node":
                    see_node(ep[1])
        norder = sorted(nlab, key=nlab.get)
        enc = tuple(
            (self.nodes[i].gen.key(), tuple(wlab[w] for w in self.nodes[i].ins),
             tuple(wlab[w] for w in self.nodes[i].outs))
            for i in norder
        )
        return enc, norder, sorted(wlab, key=wlab.get)

    def canonical_key(self) -> tuple:
        return self._canon[0]

    def canonical_node_rank(self) -> dict[int, int]:
        return {i: r for r, i in enumerate(self._canon[1])}

    def canonical(self) -> "OpenGraph":
        _, norder, worder = self._canon
        wmap = {w: k for k, w in enumerate(worder)}
        nodes = tuple(
            Node(self.nodes[i].gen, tuple(wmap[w] for w in self.nodes[i].ins),
                 tuple(wmap[w] for w in self.nodes[i].outs))
            for i in norder
        )
        return OpenGraph(nodes, tuple(wmap[w] for w in self.inputs),
                         tuple(wmap[w] for w in self.outputs), self.n_wires)

    def isomorphic(self, other: "OpenGraph") -> bool:
        return self.canonical_key() == other.canonical_key()

    # structure --------------------------------------------------------------
    def topological_order(self, key=None) -> list[int]:
        """Nodes in dependency order; among ready nodes the smallest ``key(i), i`` goes first."""
        key = key or (lambda i: 0)
        indeg = [0] * len(self.nodes)
        succ: list[list[int]] = [[] for _ in self.nodes]
        for i, nd in enumerate(self.nodes):
            for w in nd.ins:
                ep = self._src[w]
                if ep[0] == "node":
                    indeg[i] += 1
                    succ[ep[1]].append(i)
        ready = [(key(i), i) for i, d in enumerate(indeg) if d == 0]
        out = []
        heapq.heapify(ready)
        while ready:
            _, i = heapq.heappop(ready)
            out.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(ready, (key(j), j))
        if len(out) != len(self.nodes):
            raise DiagramError("graph has a directed cycle")
        return out

    def generators(self):
        return [nd.gen for nd in self.nodes]

    def to_json(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "wires": self.n_wires,
            "nodes": [{"gen": nd.gen.dsl(), "ins": list(nd.ins), "outs": list(nd.outs)} for nd in self.nodes],
        }

    def __str__(self):
        return to_dsl(to_term(self))


def to_open_graph(t: Term) -> OpenGraph:
    nodes: list[Node] = []
    counter = [t.n_in]

    def fresh(k):
        start = counter[0]
        counter[0] += k
        return list(range(start, start + k))

    def run(term: Term, wires: list[int]) -> list[int]:
        if isinstance(term, (Empty, Id)):
            return wires
        if isinstance(term, Swap):
            return [wires[1], wires[0]]
        if isinstance(term, Gen):
            outs = fresh(term.n_out)
            nodes.append(Node(term.gen, tuple(wires), tuple(outs)))
            return outs
        if isinstance(term, Comp):
            return run(term.right, run(term.left, wires))
        if isinstance(term, Tensor):
            k = term.left.n_in
            return run(term.left, wires[:k]) + run(term.right, wires[k:])
        raise TypeError(f"not a term: {term!r}")

    inputs = list(range(t.n_in))
    outputs = run(t, inputs)
    return OpenGraph(tuple(nodes), tuple(inputs), tuple(outputs), counter[0])


def as_graph(d) -> OpenGraph:
    return d if isinstance(d, OpenGraph) else to_open_graph(d)


def to_term(g: OpenGraph) -> Term:
    """Linearise a graph into a term (topological order plus swap networks)."""
    cur = list(g.inputs)
    layers: list[Term] = [id_n(len(cur))]
    for i in g.topological_order():
        nd = g.nodes[i]
        rest = [w for w in cur if w not in nd.ins]
        layers.append(reorder(cur, list(nd.ins) + rest))
        layers.append(tensor(Gen(nd.gen), id_n(len(rest))))
        cur = list(nd.outs) + rest
    layers.append(reorder(cur, list(g.outputs)))
    return compose(*layers)


def graph_compose(a: OpenGraph, b: OpenGraph) -> OpenGraph:
    if a.n_out != b.n_in:
        raise DiagramError("graph arity mismatch in composition")
    return to_open_graph(Comp(to_term(a), to_term(b)))


def graph_tensor(a: OpenGraph, b: OpenGraph) -> OpenGraph:
    return to_open_graph(Tensor(to_term(a), to_term(b)))


def isomorphic(a, b) -> bool:
    return as_graph(a).isomorphic(as_graph(b))


def expand_sugar(kind: str, *args, **kw) -> Term:
    """``poly_box``, ``poly_box_dagger`` or ``ideal_gadget`` by name."""
    table = {"poly_box": poly_box, "poly_box_dagger": poly_box_dagger, "ideal_gadget": ideal_gadget}
    if kind not in table:
        raise DiagramError(f"unknown sugar {kind!r}")
    return table[kind](*args, **kw)
