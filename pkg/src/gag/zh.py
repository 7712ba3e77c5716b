"""Qudit ZH layer: exact cyclotomic semantics, translation into Fourier GAG and amplitudes.

ZH matrices are indexed ``[outputs][inputs]`` (the transpose of the counting
matrices in :mod:`gag.semantics`) and take values ``q^(k/2) * A`` with ``A``
over ``Z[w]``, ``w`` a primitive p-th root of unity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, NamedTuple

import numpy as np

from ._expr import ParseError
from .diagram import (
    ADD, COPY, DELETE, EMPTY, FOURIER_STATE, ID, MULT, ONE, SCALAR_DOWN, ZERO, Comp, DiagramError,
    DslParser, Empty, Gen, Generator, Id, Language, LanguageTag, Node, OpenGraph, Swap, Tensor,
    Term, as_graph, bus, cap, cofold_tree, compose, copy_tree, cup, dagger, fold_tree, id_n,
    reorder, scalar_gen, state, tensor, to_open_graph, to_term,
)
from .field import FieldElement, FieldSpec
from .semantics import (
    ResourceLimitError, count_closed, generator_tensor, matrix_semantics, max_enum_budget,
)


class ZhError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic integers


def _normalize(a: np.ndarray) -> np.ndarray:
    """Reduce Z[x]/(x^p - 1) modulo 1 + x + ... + x^(p-1): make the last slot zero."""
    return a - a[..., -1:]


@dataclass(frozen=True)
class Cyclotomic:
    """Element of Z[w]; ``coeffs[i]`` multiplies ``w^i`` for i < p - 1."""

    p: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_full(cls, p: int, full) -> "Cyclotomic":
        full = np.asarray(full, dtype=object).reshape(p)
        red = [int(full[i] - full[p - 1]) for i in range(p - 1)]
        return cls(p, tuple(red))

    @classmethod
    def from_int(cls, p: int, n: int) -> "Cyclotomic":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def omega(cls, p: int, e: int = 1) -> "Cyclotomic":
        full = [0] * p
        full[e % p] = 1
        return cls.from_full(p, full)

    def full(self) -> list[int]:
        return list(self.coeffs) + [0]

    def _check(self, other):
        if isinstance(other, int):
            return Cyclotomic.from_int(self.p, other)
        if other.p != self.p:
            raise ZhError("cyclotomic elements of different orders")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Cyclotomic(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        p = self.p
        full = [0] * p
        for i, a in enumerate(self.full()):
            if a:
                for j, b in enumerate(other.full()):
                    full[(i + j) % p] += a * b
        return Cyclotomic.from_full(p, full)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Cyclotomic.from_int(self.p, 1)
        for _ in range(e):
            out = out * self
        return out

    def conj(self) -> "Cyclotomic":
        p = self.p
        full = [0] * p
        for i, a in enumerate(self.full()):
            full[(-i) % p] += a
        return Cyclotomic.from_full(p, full)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def gauss_sum(p: int) -> np.ndarray:
    """sum over a of (a/p) w^a as a full coefficient vector; its square is p when p = 1 mod 4."""
    g = np.zeros(p, dtype=np.int64)
    squares = {(a * a) % p for a in range(1, p)}
    for a in range(1, p):
        g[a] = 1 if a in squares else -1
    return g


# ---------------------------------------------------------------------------
# scaled cyclotomic matrices


def _cyc_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1], p), dtype=np.int64)
    live_a = [s for s in range(p) if a[..., s].any()]
    live_b = [t for t in range(p) if b[..., t].any()]
    for s in live_a:
        for t in live_b:
            out[..., (s + t) % p] += a[..., s] @ b[..., t]
    return _normalize(out)


def _cyc_kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], p), dtype=np.int64)
    for s in range(p):
        if not a[..., s].any():
            continue
        for t in range(p):
            if b[..., t].any():
                out[..., (s + t) % p] += np.kron(a[..., s], b[..., t])
    return _normalize(out)


def _cyc_scale(a: np.ndarray, c: np.ndarray, p: int) -> np.ndarray:
    """Multiply every entry by a full coefficient vector ``c``."""
    out = np.zeros_like(a)
    for t in range(p):
        if c[t]:
            out += c[t] * np.roll(a, t, axis=-1)
    return _normalize(out)


@dataclass(frozen=True, eq=False)
class ScaledCycMatrix:
    """``q^(k/2) * A``; ``data`` has shape (rows, cols, p), normalised."""

    spec: FieldSpec
    k: int
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _normalize(np.asarray(self.data, dtype=np.int64)))

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    @classmethod
    def real(cls, spec: FieldSpec, k: int, m: np.ndarray) -> "ScaledCycMatrix":
        m = np.asarray(m, dtype=np.int64)
        data = np.zeros(m.shape + (spec.p,), dtype=np.int64)
        data[..., 0] = m
        return cls(spec, k, data)

    def __matmul__(self, other: "ScaledCycMatrix") -> "ScaledCycMatrix":
        if self.shape[1] != other.shape[0]:
            raise ZhError("dimension mismatch in matrix product")
        return ScaledCycMatrix(self.spec, self.k + other.k, _cyc_matmul(self.data, other.data, self.p))

    def kron(self, other: "ScaledCycMatrix") -> "ScaledCycMatrix":
        return ScaledCycMatrix(self.spec, self.k + other.k, _cyc_kron(self.data, other.data, self.p))

    def dagger(self) -> "ScaledCycMatrix":
        p = self.p
        conj = np.zeros_like(self.data)
        for s in range(p):
            conj[..., (-s) % p] += self.data[..., s]
        return ScaledCycMatrix(self.spec, self.k, _normalize(np.transpose(conj, (1, 0, 2)).copy()))

    def transpose(self) -> "ScaledCycMatrix":
        return ScaledCycMatrix(self.spec, self.k, np.transpose(self.data, (1, 0, 2)).copy())

    def is_zero(self) -> bool:
        return not self.data.any()

    def _lift(self, half_steps: int) -> np.ndarray | None:
        """Entries of ``q^(half_steps/2) * A`` over Z[w], or None if irrational."""
        p, t = self.spec.p, self.spec.t
        e = half_steps * t  # q^(h/2) = p^(h t / 2)
        data = self.data.copy()
        if e % 2 == 0:
            return data * (p ** (e // 2))
        if p % 4 == 1:
            return _cyc_scale(data, gauss_sum(p), p) * (p ** ((e - 1) // 2))
        return None

    def __eq__(self, other):
        if not isinstance(other, ScaledCycMatrix):
            return NotImplemented
        if self.spec != other.spec or self.shape != other.shape:
            return False
        hi, lo = (self, other) if self.k >= other.k else (other, self)
        lifted = hi._lift(hi.k - lo.k)
        if lifted is None:
            return hi.is_zero() and lo.is_zero()
        return bool(np.array_equal(lifted, lo.data))

    __hash__ = None

    def entry(self, i: int, j: int) -> Cyclotomic:
        return Cyclotomic.from_full(self.p, self.data[i, j])

    def scalar(self) -> "ScaledCycScalar":
        if self.shape != (1, 1):
            raise ZhError("not a scalar")
        return ScaledCycScalar(self.spec, self.k, self.entry(0, 0))

    def entries(self) -> list[list[list[int]]]:
        return [[list(self.entry(i, j).coeffs) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def to_json(self) -> dict:
        rows, cols = self.shape
        return {"q": self.q, "p": self.p, "k": self.k, "rows": rows, "cols": cols, "entries": self.entries()}

    def __repr__(self):
        rows = [[str(self.entry(i, j)) for j in range(self.shape[1])] for i in range(self.shape[0])]
        return f"ScaledCycMatrix(q={self.q}, k={self.k}, {rows})"


@dataclass(frozen=True, eq=False)
class ScaledCycScalar:
    spec: FieldSpec
    k: int
    value: Cyclotomic

    def matrix(self) -> ScaledCycMatrix:
        data = np.zeros((1, 1, self.spec.p), dtype=np.int64)
        data[0, 0, :] = self.value.full()
        return ScaledCycMatrix(self.spec, self.k, data)

    def __eq__(self, other):
        if isinstance(other, ScaledCycScalar):
            return self.matrix() == other.matrix()
        if isinstance(other, ScaledCycMatrix):
            return self.matrix() == other
        return NotImplemented

    __hash__ = None

    def to_json(self) -> dict:
        return {"q": self.spec.q, "p": self.spec.p, "k": self.k, "value": list(self.value.coeffs)}

    def __str__(self):
        return f"q^({self.k}/2) * ({self.value})  [q={self.spec.q}, w=exp(2*pi*i/{self.spec.p})]"


# ---------------------------------------------------------------------------
# ZH generators and terms


@dataclass(frozen=True)
class ZhGen:
    """``Z(a,b)``, ``H(a,b)`` or ``X(j)``; ``daggered`` reverses the arity."""

    kind: str
    a: int = 0
    b: int = 0
    j: Any = None
    daggered: bool = False

    def __post_init__(self):
        if self.kind not in ("Z", "H", "X"):
            raise ZhError(f"unknown ZH generator {self.kind!r}")
        if self.kind == "X":
            if not isinstance(self.j, FieldElement):
                raise ZhError("X-basis states carry a field element")
            object.__setattr__(self, "a", 0)
            object.__setattr__(self, "b", 1)
        elif self.a < 0 or self.b < 0:
            raise ZhError("negative spider arity")

    @property
    def n_in(self) -> int:
        return self.b if self.daggered else self.a

    @property
    def n_out(self) -> int:
        return self.a if self.daggered else self.b

    def dagger(self) -> "ZhGen":
        return ZhGen(self.kind, self.a, self.b, self.j, not self.daggered)

    def key(self) -> str:
        base = f"X({self.j.spec.label()}:{self.j.value})" if self.kind == "X" else f"{self.kind}({self.a},{self.b})"
        return base + ("'" if self.daggered else "")

    def dsl(self) -> str:
        base = f"xstate({self.j})" if self.kind == "X" else f"{self.kind}({self.a},{self.b})"
        return base + ("'" if self.daggered else "")

    def __str__(self):
        return self.dsl()


def Z(n: int, m: int) -> Term:
    return Gen(ZhGen("Z", n, m))


def H(n: int, m: int) -> Term:
    return Gen(ZhGen("H", n, m))


def XState(j: FieldElement) -> Term:
    return Gen(ZhGen("X", j=j))


def _spider_args(p: DslParser) -> tuple[int, int]:
    p.expect("(")
    n = p.int_arg()
    p.expect(",")
    m = p.int_arg()
    p.expect(")")
    return n, m


def _zh_atoms(spec: FieldSpec):
    def spider(kind):
        return lambda p, name, pos: Gen(ZhGen(kind, *_spider_args(p)))

    def xstate(p, name, pos):
        p.expect("(")
        body, start = p.raw_until(")")
        return Gen(ZhGen("X", j=FieldElement(spec, spec.parse(body, start))))

    def reject(p, name, pos):
        raise ParseError(f"{name!r} is not a ZH generator", pos)

    atoms = {k: reject for k in ("copy", "del", "add", "zero", "mul", "one", "sc", "z1",
                                  "sdown", "state", "poly", "ideal")}
    atoms.update({"Z": spider("Z"), "H": spider("H"), "xstate": xstate})
    return atoms


def parse_zh(text: str, spec: FieldSpec) -> Term:
    """ZH circuit DSL: ``Z(n,m)``, ``H(n,m)``, ``xstate(j)``, ``id``, ``swap``, ``;``, ``*``, ``'``."""
    lang = Language(LanguageTag.GAG_Q_FOURIER, spec)
    try:
        return DslParser(text, lang, _zh_atoms(spec)).parse()
    except (DiagramError, ZhError) as exc:
        raise ParseError(str(exc)) from exc


def is_zh_term(t: Term) -> bool:
    return all(isinstance(g, ZhGen) for g in t.generators())


# ---------------------------------------------------------------------------
# dense evaluation


def _digits_of(idx: int, q: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, q)
        out.append(r)
    return out[::-1]


def _zh_gen_matrix(g: ZhGen, spec: FieldSpec) -> ScaledCycMatrix:
    q, p = spec.q, spec.p
    if g.kind == "X":
        col = np.zeros((q, 1), dtype=np.int64)
        col[g.j.value, 0] = 1
        m = ScaledCycMatrix.real(spec, 1, col)
    elif g.kind == "Z":
        rows, cols = q ** g.b, q ** g.a
        m = np.zeros((rows, cols), dtype=np.int64)
        for i in range(q):
            r = sum(i * q ** e for e in range(g.b))
            c = sum(i * q ** e for e in range(g.a))
            m[r, c] += 1
        m = ScaledCycMatrix.real(spec, 0, m)
    else:
        rows, cols = q ** g.b, q ** g.a
        data = np.zeros((rows, cols, p), dtype=np.int64)
        mul = spec.mul_table
        tr = spec.trace_table
        for r in range(rows):
            pr = 1
            for d in _digits_of(r, q, g.b):
                pr = int(mul[pr, d])
            for c in range(cols):
                pc = pr
                for d in _digits_of(c, q, g.a):
                    pc = int(mul[pc, d])
                data[r, c, int(tr[pc])] += 1
        m = ScaledCycMatrix(spec, -1, _normalize(data))
    return m.dagger() if g.daggered else m


def _gag_gen_matrix(g: Generator, spec: FieldSpec) -> ScaledCycMatrix:
    q, p = spec.q, spec.p
    if g.kind == "z1":
        data = np.zeros((q, 1, p), dtype=np.int64)
        for i in range(q):
            data[i, 0, int(spec.trace_table[i])] += 1
        return ScaledCycMatrix(spec, 0, _normalize(data))
    if g.kind == "sdown":
        return ScaledCycMatrix.real(spec, -1, np.ones((1, 1), dtype=np.int64))
    rel = generator_tensor(g, spec)
    m = rel.reshape(q ** g.n_in, q ** g.n_out)
    return ScaledCycMatrix.real(spec, 0, m.T)


def _check_budget(t: Term, spec: FieldSpec, max_enum: int | None):
    budget = max_enum_budget(max_enum)
    stack = [t]
    while stack:
        s = stack.pop()
        if spec.q ** (s.n_in + s.n_out) > budget:
            raise ResourceLimitError(f"dense {s.n_out}x{s.n_in}-wire matrix exceeds the cap {budget}")
        if isinstance(s, (Comp, Tensor)):
            stack.extend((s.left, s.right))


def dense_eval(t: Term, spec: FieldSpec, max_enum: int | None = None) -> ScaledCycMatrix:
    """Compositional dense semantics of ZH terms and of Fourier GAG terms."""
    t = to_term(t) if isinstance(t, OpenGraph) else t
    _check_budget(t, spec, max_enum)
    cache: dict = {}

    def ev(s: Term) -> ScaledCycMatrix:
        if isinstance(s, Empty):
            return ScaledCycMatrix.real(spec, 0, np.ones((1, 1), dtype=np.int64))
        if isinstance(s, Id):
            return ScaledCycMatrix.real(spec, 0, np.eye(spec.q, dtype=np.int64))
        if isinstance(s, Swap):
            q = spec.q
            m = np.zeros((q * q, q * q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    m[b * q + a, a * q + b] = 1
            return ScaledCycMatrix.real(spec, 0, m)
        if isinstance(s, Gen):
            g = s.gen
            if g not in cache:
                if isinstance(g, ZhGen):
                    cache[g] = _zh_gen_matrix(g, spec)
                elif isinstance(g, Generator):
                    cache[g] = _gag_gen_matrix(g, spec)
                else:
                    raise ZhError(f"no dense semantics for {g}")
            return cache[g]
        if isinstance(s, Comp):
            # diagram order left-to-right; matrices act on the left
            return ev(s.right) @ ev(s.left)
        if isinstance(s, Tensor):
            return ev(s.left).kron(ev(s.right))
        raise TypeError(f"not a term: {s!r}")

    return ev(t)


def zh_dense_eval(t: Term, spec: FieldSpec, max_enum: int | None = None) -> ScaledCycMatrix:
    if not is_zh_term(t):
        raise ZhError("zh_dense_eval expects a ZH term; use fourier_dense for GAG diagrams")
    return dense_eval(t, spec, max_enum)


def fourier_dense(d, spec: FieldSpec, max_enum: int | None = None) -> ScaledCycMatrix:
    """Dense semantics of a GAG diagram that may contain ``z1`` and ``sdown``."""
    t = to_term(d) if isinstance(d, OpenGraph) else d
    if any(isinstance(g, ZhGen) for g in t.generators()):
        raise ZhError("translate ZH generators before calling fourier_dense")
    return dense_eval(t, spec, max_enum)


# ---------------------------------------------------------------------------
# translation into Fourier GAG


def fourier_language(spec: FieldSpec) -> Language:
    return Language(LanguageTag.GAG_Q_FOURIER, spec)


def z_spider(n: int, m: int) -> Term:
    """n -> m white spider from copy/delete and their daggers."""
    return compose(dagger(copy_tree(n)), copy_tree(m))


def loop() -> Term:
    """Closed cup;cap, of value q."""
    return Comp(cup(), cap())


def h_box(n_in: int, n_out: int, conjugate: bool = False) -> Term:
    """H-spider body: cups for the outputs, one Mult tree, capped against ``z1``."""
    legs = [("e", k) for k in range(n_out)]
    tree_legs = [("t", k) for k in range(n_out)] + [("i", j) for j in range(n_in)]
    cur = [w for k in range(n_out) for w in (("e", k), ("t", k))] + [("i", j) for j in range(n_in)]
    stage1 = tensor(bus(cup(), n_out), id_n(n_in))
    stage2 = reorder(cur, legs + tree_legs)
    tree = fold_tree(MULT, len(tree_legs), Gen(ONE))
    if conjugate:
        tree = compose(tree, Gen(scalar_gen(-1)))
    cap_z1 = compose(tensor(ID, Gen(FOURIER_STATE)), Gen(COPY.dagger()), Gen(DELETE))
    stage3 = tensor(id_n(n_out), compose(tree, cap_z1))
    return tensor(Gen(SCALAR_DOWN), compose(stage1, stage2, stage3))


def translate_generator(g: ZhGen, spec: FieldSpec) -> Term:
    if g.kind == "Z":
        return z_spider(g.n_in, g.n_out)
    if g.kind == "H":
        body = h_box(g.n_in, g.n_out, conjugate=g.daggered)
        return _fix_scalars(body, spec)
    st = state(g.j.value, spec)
    if g.daggered:
        st = dagger(st)
    return tensor(Gen(SCALAR_DOWN), loop(), st)


def _fix_scalars(t: Term, spec: FieldSpec) -> Term:
    """Re-type rational scalar payloads as elements of ``spec``."""
    if isinstance(t, Gen):
        g = t.gen
        if isinstance(g, Generator) and g.kind == "sc" and not isinstance(g.scalar, FieldElement):
            v = g.scalar
            raw = spec.div(spec.from_int(v.numerator), spec.from_int(v.denominator))
            return Gen(Generator("sc", g.daggered, FieldElement(spec, raw)))
        return t
    if isinstance(t, Comp):
        return Comp(_fix_scalars(t.left, spec), _fix_scalars(t.right, spec))
    if isinstance(t, Tensor):
        return Tensor(_fix_scalars(t.left, spec), _fix_scalars(t.right, spec))
    return t


def translate_to_gag(t: Term, spec: FieldSpec) -> Term:
    """Structure-preserving image of a ZH term in Fourier GAG over ``spec``."""
    if isinstance(t, Gen):
        if not isinstance(t.gen, ZhGen):
            raise ZhError(f"{t.gen} is not a ZH generator")
        return translate_generator(t.gen, spec)
    if isinstance(t, Comp):
        return Comp(translate_to_gag(t.left, spec), translate_to_gag(t.right, spec))
    if isinstance(t, Tensor):
        return Tensor(translate_to_gag(t.left, spec), translate_to_gag(t.right, spec))
    return t


# ---------------------------------------------------------------------------
# pulling the Fourier states out


class FourierMerge(NamedTuple):
    k: int
    D_prime: Term
    n_states: int


def fourier_merge(d) -> FourierMerge:
    """Remove ``sdown`` (counted by k) and feed every ``z1`` slot from one new input wire.

    The new wire is input 0; it fans out through a tree of ``add'`` nodes, or
    is capped by ``zero'`` when there are no Fourier states.
    """
    g = as_graph(d)
    k = 0
    z1_wires: list[int] = []
    kept: list[Node] = []
    for nd in g.nodes:
        gen_ = nd.gen
        if isinstance(gen_, Generator) and gen_.kind == "sdown":
            k += 1
        elif isinstance(gen_, Generator) and gen_.kind == "z1":
            if gen_.daggered:
                raise ZhError("daggered Fourier states are not supported")
            z1_wires.append(nd.outs[0])
        elif isinstance(gen_, ZhGen):
            raise ZhError("translate ZH generators before merging")
        else:
            kept.append(nd)
    t = len(z1_wires)
    tree = to_open_graph(cofold_tree(ADD.dagger(), t, Gen(ZERO.dagger())))
    fresh = g.n_wires
    remap: dict[int, int] = dict(zip(tree.outputs, z1_wires))
    if tree.inputs[0] not in remap:  # a single state is fed directly
        remap[tree.inputs[0]] = fresh
        fresh += 1
    for nd in tree.nodes:
        for w in nd.ins + nd.outs:
            if w not in remap:
                remap[w] = fresh
                fresh += 1
    nodes = kept + [Node(nd.gen, tuple(remap[w] for w in nd.ins), tuple(remap[w] for w in nd.outs))
                    for nd in tree.nodes]
    merged = OpenGraph(tuple(nodes), (remap[tree.inputs[0]],) + g.inputs, g.outputs, fresh)
    return FourierMerge(k, to_term(merged), t)


class CountingOracle:
    """Wraps a closed-diagram evaluator and counts invocations."""

    def __init__(self, spec: FieldSpec, evaluate: Callable | None = None, max_enum: int | None = None):
        self.spec = spec
        self.calls = 0
        self._evaluate = evaluate or (lambda d: count_closed(d, spec, max_enum))

    def __call__(self, d: Term) -> int:
        self.calls += 1
        return self._evaluate(d)


def _phase_sum(spec: FieldSpec, k: int, blocks) -> ScaledCycMatrix:
    """q^(-k/2) * sum_j w^tr(j) * blocks[j]."""
    first = blocks[0]
    data = np.zeros(first.shape + (spec.p,), dtype=np.int64)
    for j, m in enumerate(blocks):
        data[..., int(spec.trace_table[j])] += m
    return ScaledCycMatrix(spec, -k, _normalize(data))


def sem_fourier(d, spec: FieldSpec, max_enum: int | None = None) -> ScaledCycMatrix:
    """Dense value of a Fourier GAG diagram via merging and q counting-matrix evaluations."""
    merged = fourier_merge(d)
    n_in = merged.D_prime.n_in - 1
    blocks = []
    for j in range(spec.q):
        plugged = compose(tensor(state(j, spec), id_n(n_in)), merged.D_prime)
        blocks.append(matrix_semantics(plugged, spec, max_enum).data.T)
    return _phase_sum(spec, merged.k, blocks)


def amplitude(t: Term, spec: FieldSpec, oracle: Callable[[Term], int] | None = None,
              max_enum: int | None = None) -> ScaledCycScalar:
    """Amplitude of a closed ZH term using exactly q closed-diagram counts."""
    if t.n_in or t.n_out:
        raise ZhError(f"amplitude needs a closed term, got {t.n_in} -> {t.n_out}")
    oracle = oracle or CountingOracle(spec, max_enum=max_enum)
    merged = fourier_merge(translate_to_gag(t, spec))
    counts = []
    for j in range(spec.q):
        counts.append(np.array([[oracle(compose(state(j, spec), merged.D_prime))]], dtype=np.int64))
    return _phase_sum(spec, merged.k, counts).scalar()
