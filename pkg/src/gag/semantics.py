"""Denotational semantics: cospan forms, canonicalisation and counting matrices.

A diagram ``n -> m`` denotes a cospan of polynomial algebras, stored as a
:class:`CospanForm` ``(left, right, ideal)`` over ``r`` interior variables.
Over a finite field this is the span ``F^n <- V(ideal) -> F^m`` and its
counting matrix ``M[x][y] = #{v in V : left(v) = x, right(v) = y}``.
"""
from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .diagram import (
    Comp, DiagramError, Empty, FOURIER_KINDS, Gen, Generator, Id, Language, LanguageTag,
    OpenGraph, Swap, Tensor, Term, as_graph, coerce_scalar, to_term,
)
from .field import FieldSpec, QQ
from .poly import (
    GREVLEX, IdealBasis, MonomialOrder, Polynomial, buchberger, normal_form, q_saturate,
)

DEFAULT_MAX_ENUM = 1 << 24
MAX_ENUM_ENV = "GAG_MAX_ENUM"
_CHUNK = 1 << 16


class SemanticsError(ValueError):
    """Diagram outside the fragment a semantic function handles."""


class ResourceLimitError(RuntimeError):
    """Enumeration would exceed the configured budget."""


def max_enum_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(MAX_ENUM_ENV)
    return int(env) if env else DEFAULT_MAX_ENUM


def _ring_of(ctx):
    if isinstance(ctx, Language):
        return ctx.ring
    return QQ if ctx is None else ctx


# ---------------------------------------------------------------------------
# cospan forms


@dataclass(frozen=True)
class CospanForm:
    n_left: int
    n_right: int
    r: int
    left: tuple[Polynomial, ...]
    right: tuple[Polynomial, ...]
    ideal: tuple[Polynomial, ...]
    ring: Any
    order: MonomialOrder = GREVLEX
    canonical: bool = False

    def __post_init__(self):
        if len(self.left) != self.n_left or len(self.right) != self.n_right:
            raise SemanticsError("leg count disagrees with boundary arity")
        for p in self.left + self.right + self.ideal:
            if p.n != self.r:
                raise SemanticsError(f"polynomial in {p.n} variables, interior has {self.r}")

    @property
    def is_empty_span(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.ideal)

    def basis(self) -> IdealBasis:
        return IdealBasis(self.ideal, self.r, self.ring, self.order, self.canonical)

    def key(self) -> tuple:
        return (self.n_left, self.n_right, self.r, self.left, self.right, self.ideal)

    def to_json(self) -> dict:
        o = self.order
        return {
            "n_left": self.n_left,
            "n_right": self.n_right,
            "r": self.r,
            "field": self.ring.label(),
            "order": o.kind,
            "left": [p.to_json(o) for p in self.left],
            "right": [p.to_json(o) for p in self.right],
            "ideal": [p.to_json(o) for p in self.ideal],
        }

    def pretty(self) -> str:
        names = [f"v{i + 1}" for i in range(self.r)]
        o = self.order
        legs = lambda ps: "(" + ", ".join(p.to_str(o, names) for p in ps) + ")"
        ideal = "{" + ", ".join(p.to_str(o, names) for p in self.ideal) + "}"
        return (f"cospan {self.n_left} -> {self.n_right} over {self.r} interior variables\n"
                f"  left  = {legs(self.left)}\n  right = {legs(self.right)}\n  ideal = {ideal}")

    def __str__(self):
        return self.pretty()


def _vars(ring, r):
    return Polynomial.variables(ring, r)


def generator_cospan(g: Generator, ring) -> CospanForm:
    if g.kind in FOURIER_KINDS:
        raise SemanticsError(
            f"{g.dsl()} has no cospan semantics; evaluate Fourier diagrams with gag.zh"
        )
    k = g.kind
    if k in ("zero", "one"):
        r, left = 0, ()
        right = (Polynomial.const(ring, 0, ring.zero if k == "zero" else ring.one),)
    elif k in ("copy", "del", "sc"):
        r = 1
        (x,) = _vars(ring, 1)
        left = (x,)
        if k == "copy":
            right = (x, x)
        elif k == "del":
            right = ()
        else:
            right = (x.scale(coerce_scalar(g.scalar, ring)),)
    else:  # add, mul
        r = 2
        x1, x2 = _vars(ring, 2)
        left = (x1, x2)
        right = (x1 + x2,) if k == "add" else (x1 * x2,)
    if g.daggered:
        left, right = right, left
    return CospanForm(len(left), len(right), r, tuple(left), tuple(right), (), ring)


def identity_cospan(n: int, ring) -> CospanForm:
    xs = tuple(_vars(ring, n))
    return CospanForm(n, n, n, xs, xs, (), ring)


def swap_cospan(ring) -> CospanForm:
    x1, x2 = _vars(ring, 2)
    return CospanForm(2, 2, 2, (x1, x2), (x2, x1), (), ring)


def _inconsistent(n_left: int, n_right: int, ring, order=GREVLEX, canonical=False) -> CospanForm:
    z = Polynomial.zero(ring, 0)
    return CospanForm(n_left, n_right, 0, (z,) * n_left, (z,) * n_right,
                      (Polynomial.const(ring, 0, ring.one),), ring, order, canonical)


def compose_cospans(c1: CospanForm, c2: CospanForm, simplify: bool = True) -> CospanForm:
    """Pushout composition: ideal ``I1 + I2 + (right1_j - left2_j)``."""
    if c1.n_right != c2.n_left:
        raise SemanticsError("cospan arity mismatch in composition")
    r = c1.r + c2.r
    up1 = lambda p: p.extend(r, 0)
    up2 = lambda p: p.extend(r, c1.r)
    ideal = tuple(up1(g) for g in c1.ideal) + tuple(up2(g) for g in c2.ideal)
    glue = tuple(up1(a) - up2(b) for a, b in zip(c1.right, c2.left))
    out = CospanForm(c1.n_left, c2.n_right, r, tuple(up1(p) for p in c1.left),
                     tuple(up2(p) for p in c2.right), ideal + glue, c1.ring)
    return eliminate_linear(out) if simplify else out


def tensor_cospans(c1: CospanForm, c2: CospanForm) -> CospanForm:
    r = c1.r + c2.r
    up1 = lambda p: p.extend(r, 0)
    up2 = lambda p: p.extend(r, c1.r)
    return CospanForm(
        c1.n_left + c2.n_left, c1.n_right + c2.n_right, r,
        tuple(map(up1, c1.left)) + tuple(map(up2, c2.left)),
        tuple(map(up1, c1.right)) + tuple(map(up2, c2.right)),
        tuple(map(up1, c1.ideal)) + tuple(map(up2, c2.ideal)),
        c1.ring,
    )


def _eliminable(g: Polynomial) -> int | None:
    """Highest variable occurring in ``g`` only as a bare linear term."""
    linear, blocked = set(), set()
    for m in g.terms:
        support = [i for i, e in enumerate(m) if e]
        if len(support) == 1 and m[support[0]] == 1:
            linear.add(support[0])
        else:
            blocked.update(support)
    free = linear - blocked
    return max(free) if free else None


def _substitute_out(c: CospanForm, gens: list[Polynomial], idx: int, v: int) -> tuple:
    """Solve ``gens[idx]`` for variable ``v`` and substitute everywhere, dropping ``v``."""
    R = c.ring
    g = gens[idx]
    n = c.r
    unit = tuple(1 if i == v else 0 for i in range(n))
    coeff = g.terms[unit]
    rest = Polynomial(R, n, {m: a for m, a in g.terms.items() if m != unit}, _clean=True)
    solution = rest.scale(R.neg(R.inv(coeff)))
    mapping = [i if i < v else i - 1 for i in range(n)]
    mapping[v] = 0
    sol_small = solution.rename(mapping, n - 1)
    powers = {1: sol_small}

    def sub(p: Polynomial) -> Polynomial:
        # monomials free of v only lose a slot; the rest are expanded
        plain: dict = {}
        acc = None
        for m, a in p.terms.items():
            e = m[v]
            rest_m = m[:v] + m[v + 1:]
            if not e:
                plain[rest_m] = a
                continue
            if e not in powers:
                powers[e] = sol_small ** e
            t = powers[e].mul_term(rest_m, a)
            acc = t if acc is None else acc + t
        out = Polynomial(R, n - 1, plain, _clean=True)
        return out if acc is None else out + acc
    new_gens = [sub(h) for j, h in enumerate(gens) if j != idx]
    return tuple(map(sub, c.left)), tuple(map(sub, c.right)), new_gens


def eliminate_linear(c: CospanForm) -> CospanForm:
    """Remove interior variables fixed by an ideal generator ``a*v + h`` with ``h`` free of ``v``."""
    left, right, r = c.left, c.right, c.r
    gens = [g for g in c.ideal if not g.is_zero()]
    cur = c
    while True:
        if any(g.is_constant() for g in gens):
            return _inconsistent(c.n_left, c.n_right, c.ring, c.order)
        found = None
        for idx, g in enumerate(gens):
            v = _eliminable(g)
            if v is not None:
                found = (idx, v)
                break
        if found is None:
            break
        cur = CospanForm(c.n_left, c.n_right, r, left, right, tuple(gens), c.ring, c.order)
        left, right, gens = _substitute_out(cur, gens, *found)
        r -= 1
        gens = [g for g in gens if not g.is_zero()]
    seen, dedup = set(), []
    for g in gens:
        if g not in seen:
            seen.add(g)
            dedup.append(g)
    return CospanForm(c.n_left, c.n_right, r, tuple(left), tuple(right), tuple(dedup), c.ring, c.order)


def eval_cospan(d, ctx=None, simplify: bool = True) -> CospanForm:
    """Compositional cospan semantics of a term or graph.

    ``ctx`` is a :class:`Language` or a coefficient ring.  With ``simplify``
    each pushout eagerly eliminates linearly determined interior variables.
    """
    ring = _ring_of(ctx)
    t = to_term(d) if isinstance(d, OpenGraph) else d
    cache: dict = {}

    def ev(term: Term) -> CospanForm:
        if isinstance(term, Empty):
            return identity_cospan(0, ring)
        if isinstance(term, Id):
            return identity_cospan(1, ring)
        if isinstance(term, Swap):
            return swap_cospan(ring)
        if isinstance(term, Gen):
            g = term.gen
            if g not in cache:
                if not isinstance(g, Generator):
                    raise SemanticsError(f"{g} is not a commutative-algebra generator")
                cache[g] = generator_cospan(g, ring)
            return cache[g]
        if isinstance(term, Comp):
            return compose_cospans(ev(term.left), ev(term.right), simplify)
        if isinstance(term, Tensor):
            return tensor_cospans(ev(term.left), ev(term.right))
        raise TypeError(f"not a term: {term!r}")

    return ev(t)


def canonicalize(c: CospanForm, order: MonomialOrder = GREVLEX, q_reduce: bool = False,
                 spec: FieldSpec | None = None) -> CospanForm:
    """Reduced Gröbner ideal, normal-form legs and linear elimination, to a fixpoint."""
    if q_reduce:
        spec = spec or c.ring
        if not isinstance(spec, FieldSpec) or spec != c.ring:
            raise SemanticsError("q-reduction needs the cospan's finite field")
    ring = c.ring
    left, right, r = c.left, c.right, c.r
    gens = list(c.ideal)
    while True:
        basis = IdealBasis(tuple(gens), r, ring, order)
        if q_reduce:
            basis = q_saturate(basis, spec)
        G = buchberger(basis, order)
        if G.is_unit():
            return _inconsistent(c.n_left, c.n_right, ring, order, True)
        gens = list(G.generators)
        found = None
        for idx, g in enumerate(gens):
            v = _eliminable(g)
            if v is not None:
                found = (idx, v)
                break
        if found is None:
            break
        cur = CospanForm(c.n_left, c.n_right, r, left, right, tuple(gens), ring, order)
        left, right, gens = _substitute_out(cur, gens, *found)
        r -= 1
    left = tuple(normal_form(p, G, order) for p in left)
    right = tuple(normal_form(p, G, order) for p in right)
    return CospanForm(c.n_left, c.n_right, r, left, right, tuple(gens), ring, order, True)


def rename_cospan(c: CospanForm, perm: Sequence[int]) -> CospanForm:
    """Send interior variable ``i`` to ``perm[i]``."""
    ren = lambda p: p.rename(perm, c.r)
    return CospanForm(c.n_left, c.n_right, c.r, tuple(map(ren, c.left)), tuple(map(ren, c.right)),
                      tuple(map(ren, c.ideal)), c.ring, c.order)


def cospans_match_up_to_renaming(c1: CospanForm, c2: CospanForm, max_r: int = 6) -> bool | None:
    """Whether canonical forms agree after permuting interior variables; None if too large."""
    a = canonicalize(c1, c1.order)
    b = canonicalize(c2, c1.order)
    if (a.n_left, a.n_right, a.r, len(a.ideal)) != (b.n_left, b.n_right, b.r, len(b.ideal)):
        return False
    if a.key() == b.key():
        return True
    if a.r > max_r:
        return None
    degs = lambda c: sorted(p.degree() for p in c.left + c.right)
    if degs(a) != degs(b):
        return False
    for perm in itertools.permutations(range(a.r)):
        if canonicalize(rename_cospan(a, perm), a.order).key() == b.key():
            return True
    return False


# ---------------------------------------------------------------------------
# counting matrices


@dataclass(frozen=True, eq=False)
class NMatrix:
    """Natural-number matrix indexed by F_q^n x F_q^m (leftmost wire most significant)."""

    q: int
    n_left: int
    n_right: int
    data: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, NMatrix):
            return NotImplemented
        return (self.q, self.n_left, self.n_right) == (other.q, other.n_left, other.n_right) and bool(
            np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.q, self.n_left, self.n_right, self.data.tobytes()))

    def __matmul__(self, other: "NMatrix") -> "NMatrix":
        return NMatrix(self.q, self.n_left, other.n_right, self.data @ other.data)

    def kron(self, other: "NMatrix") -> "NMatrix":
        return NMatrix(self.q, self.n_left + other.n_left, self.n_right + other.n_right,
                       np.kron(self.data, other.data))

    def transpose(self) -> "NMatrix":
        return NMatrix(self.q, self.n_right, self.n_left, self.data.T.copy())

    @property
    def T(self):
        return self.transpose()

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def to_json(self) -> dict:
        rows, cols = self.data.shape
        return {"q": self.q, "n_left": self.n_left, "n_right": self.n_right,
                "rows": rows, "cols": cols, "entries": [int(v) for v in self.data.ravel()]}

    def __repr__(self):
        return f"NMatrix(q={self.q}, {self.n_left}->{self.n_right}, {self.tolist()})"


def _digits(idx: np.ndarray, q: int, r: int) -> list[np.ndarray]:
    cols = []
    for i in range(r):
        cols.append((idx // (q ** (r - 1 - i))) % q)
    return cols


def _index(values: Sequence[np.ndarray], q: int, size: int) -> np.ndarray:
    acc = np.zeros(size, dtype=np.int64)
    for v in values:
        acc = acc * q + v
    return acc


def enumerate_cospan(c: CospanForm, spec: FieldSpec, max_enum: int | None = None) -> NMatrix:
    """Count interior F_q-points of the cospan by boundary value (vectorised enumeration)."""
    if c.ring != spec:
        raise SemanticsError(f"cospan is over {c.ring}, not {spec}")
    q = spec.q
    budget = max_enum_budget(max_enum)
    total = q ** c.r
    if total > budget:
        raise ResourceLimitError(f"enumeration of {q}^{c.r} interior points exceeds the cap {budget}")
    rows, cols = q ** c.n_left, q ** c.n_right
    if rows * cols > budget:
        raise ResourceLimitError(f"a {rows}x{cols} matrix exceeds the cap {budget}")
    counts = np.zeros(rows * cols, dtype=np.int64)
    if c.is_empty_span:
        return NMatrix(q, c.n_left, c.n_right, counts.reshape(rows, cols))
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        size = len(idx)
        pts = _digits(idx, q, c.r)
        mask = np.ones(size, dtype=bool)
        for g in c.ideal:
            mask &= g.evaluate_batch(pts, size) == 0
            if not mask.any():
                break
        if not mask.any():
            continue
        pts = [p[mask] for p in pts]
        size = int(mask.sum())
        x = _index([p.evaluate_batch(pts, size) for p in c.left], q, size)
        y = _index([p.evaluate_batch(pts, size) for p in c.right], q, size)
        counts += np.bincount(x * cols + y, minlength=rows * cols)
    return NMatrix(q, c.n_left, c.n_right, counts.reshape(rows, cols))


def matrix_semantics(d, spec: FieldSpec, max_enum: int | None = None,
                     canonical: bool = False, order: MonomialOrder = GREVLEX) -> NMatrix:
    """The counting matrix M_q of a diagram without Fourier generators.

    The cospan is evaluated compositionally with linear elimination; with
    ``canonical`` it is additionally q-reduced and Gröbner-canonicalised
    before enumeration (same matrix, usually slower).
    """
    if not isinstance(spec, FieldSpec):
        raise SemanticsError("matrix semantics needs a finite field")
    c = eval_cospan(d, spec)
    if canonical:
        c = canonicalize(c, order, q_reduce=True, spec=spec)
    return enumerate_cospan(c, spec, max_enum)


def count_closed(d, spec: FieldSpec, max_enum: int | None = None) -> int:
    if d.n_in != 0 or d.n_out != 0:
        raise SemanticsError(f"count_closed needs a 0 -> 0 diagram, got {d.n_in} -> {d.n_out}")
    return int(matrix_semantics(d, spec, max_enum).data[0, 0])


def function_matrix(polys: Sequence[Polynomial], n: int, spec: FieldSpec) -> NMatrix:
    """0/1 matrix of the map F_q^n -> F_q^m given by ``polys`` (direct evaluation)."""
    q = spec.q
    rows, m = q ** n, len(polys)
    out = np.zeros((rows, q ** m), dtype=np.int64)
    for i, point in enumerate(itertools.product(range(q), repeat=n)):
        j = 0
        for p in polys:
            j = j * q + p.evaluate(point)
        out[i, j] = 1
    return NMatrix(q, n, m, out)


# ---------------------------------------------------------------------------
# independent oracle: tensor contraction of the open graph


def generator_tensor(g: Generator, spec: FieldSpec) -> np.ndarray:
    """0/1 relation tensor over (inputs..., outputs...) computed from field tables."""
    if not isinstance(g, Generator) or g.kind in FOURIER_KINDS:
        raise SemanticsError(f"{g} has no counting tensor")
    q = spec.q
    k = g.kind
    a = np.arange(q)
    if k == "copy":
        fn = np.zeros((q, q, q), dtype=np.int64)
        fn[a, a, a] = 1
    elif k == "del":
        fn = np.ones(q, dtype=np.int64)
    elif k in ("add", "mul"):
        tab = spec.add_table if k == "add" else spec.mul_table
        fn = np.zeros((q, q, q), dtype=np.int64)
        x, y = np.meshgrid(a, a, indexing="ij")
        fn[x, y, tab[x, y]] = 1
    elif k in ("zero", "one"):
        fn = np.zeros(q, dtype=np.int64)
        fn[0 if k == "zero" else 1] = 1
    elif k == "sc":
        c = coerce_scalar(g.scalar, spec)
        fn = np.zeros((q, q), dtype=np.int64)
        fn[a, spec.mul_table[c, a]] = 1
    else:
        raise SemanticsError(f"no tensor for {g}")
    base_in, base_out = (g.n_out, g.n_in) if g.daggered else (g.n_in, g.n_out)
    if g.daggered:
        # function tensor is (inputs, outputs) of the undaggered generator; move axes
        axes = list(range(base_in, base_in + base_out)) + list(range(base_in))
        fn = np.transpose(fn, axes) if fn.ndim else fn
    return fn


def graph_matrix(d, spec: FieldSpec, max_enum: int | None = None) -> NMatrix:
    """M_q by contracting generator relation tensors over all wire values.

    Nodes are absorbed in topological order into a frontier tensor indexed by
    the boundary inputs and the currently live wires; among ready nodes the one
    that grows the frontier least goes first.
    """
    g = as_graph(d)
    q = spec.q
    cap = max_enum_budget(max_enum)
    n_in = g.n_in
    # frontier axes: boundary input copies first, then live wires
    live = list(g.inputs)
    T = np.eye(q ** n_in, dtype=np.int64).reshape((q,) * (2 * n_in)) if n_in else np.ones((), dtype=np.int64)
    growth = lambda i: len(g.nodes[i].outs) - len(g.nodes[i].ins)
    for i in g.topological_order(growth):
        nd = g.nodes[i]
        ten = generator_tensor(nd.gen, spec)
        rest = [w for w in live if w not in nd.ins]
        if q ** (n_in + len(rest) + len(nd.outs)) > cap:
            raise ResourceLimitError("frontier of the contraction oracle exceeds the cap")
        labels = {w: k for k, w in enumerate(dict.fromkeys(live + list(nd.outs)))}
        base = len(labels)
        bnd = list(range(base, base + n_in))
        T = np.einsum(T, bnd + [labels[w] for w in live], ten, [labels[w] for w in nd.ins + nd.outs],
                      bnd + [labels[w] for w in rest + list(nd.outs)])
        live = rest + list(nd.outs)
    perm = list(range(n_in)) + [n_in + live.index(w) for w in g.outputs]
    T = np.transpose(T, perm) if T.ndim else T
    return NMatrix(q, g.n_in, g.n_out, np.ascontiguousarray(T).reshape(q ** g.n_in, q ** g.n_out))


# ---------------------------------------------------------------------------
# equivalence


class Equivalence(str, enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def _has_fourier(d) -> bool:
    gens = d.generators() if isinstance(d, (Term, OpenGraph)) else []
    return any(isinstance(g, Generator) and g.kind in FOURIER_KINDS for g in gens)


def equiv(d1, d2, lang: Language, max_enum: int | None = None) -> Equivalence:
    """Decide equality in GAG_q by matrices; lower layers answer Equal or Unknown.

    Over a finite field, differing counting matrices prove inequality for every
    layer, since every layer's rules are sound for M_q.
    """
    if (d1.n_in, d1.n_out) != (d2.n_in, d2.n_out):
        raise SemanticsError(f"arity mismatch: {d1.n_in}->{d1.n_out} vs {d2.n_in}->{d2.n_out}")
    ring = lang.ring
    if _has_fourier(d1) or _has_fourier(d2):
        from .zh import fourier_dense

        if not isinstance(ring, FieldSpec):
            raise SemanticsError("Fourier diagrams need a finite field")
        same = fourier_dense(d1, ring, max_enum) == fourier_dense(d2, ring, max_enum)
        return Equivalence.EQUAL if same else Equivalence.NOT_EQUAL
    if lang.tag >= LanguageTag.GAG_Q:
        same = matrix_semantics(d1, ring, max_enum) == matrix_semantics(d2, ring, max_enum)
        return Equivalence.EQUAL if same else Equivalence.NOT_EQUAL
    c1, c2 = eval_cospan(d1, ring), eval_cospan(d2, ring)
    if cospans_match_up_to_renaming(c1, c2):
        return Equivalence.EQUAL
    if isinstance(ring, FieldSpec):
        try:
            if matrix_semantics(d1, ring, max_enum) != matrix_semantics(d2, ring, max_enum):
                return Equivalence.NOT_EQUAL
        except ResourceLimitError:
            pass
    return Equivalence.UNKNOWN
