"""Seeded random generators for diagrams, polynomials, ideals and ZH terms."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .diagram import (
    ADD, COPY, DELETE, EMPTY, MULT, ONE, SWAP, ZERO, Comp, Gen, Generator, Id, Language,
    LanguageTag, Swap, Tensor, Term, compose, id_n, permutation, scalar_gen, tensor, to_open_graph,
    to_term,
)
from .field import FieldElement, FieldSpec, QQ
from .poly import Polynomial
from .zh import ZhGen


@dataclass(frozen=True)
class TermConfig:
    max_gens: int = 8
    max_width: int = 3
    p_perm: float = 0.25


def ring_values(rng: random.Random, ring, k: int = 1) -> list:
    if isinstance(ring, FieldSpec):
        return [rng.randrange(ring.q) for _ in range(k)]
    from fractions import Fraction

    return [Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3))) for _ in range(k)]


def generator_atoms(lang: Language, rng: random.Random) -> list[Term]:
    """Generator atoms admissible in ``lang``; scalars are drawn fresh."""
    base = [COPY, DELETE, ADD, ZERO, MULT, ONE]
    gens: list[Generator] = list(base)
    gens.append(scalar_gen(ring_values(rng, lang.ring)[0]))
    if lang.daggers:
        gens += [g.dagger() for g in base]
    return [Gen(g) for g in gens]


def random_layered(rng: random.Random, atoms: Sequence[Term], n_gens: int, n_in: int,
                   max_width: int, p_perm: float = 0.25) -> Term:
    """Stack ``n_gens`` random atoms in layers on a bus of bounded width."""
    w = n_in
    layers = [id_n(n_in)]
    for _ in range(n_gens):
        fits = [a for a in atoms if a.n_in <= w and w - a.n_in + a.n_out <= max_width]
        if not fits:
            break
        a = rng.choice(fits)
        off = rng.randint(0, w - a.n_in)
        if w >= 2 and rng.random() < p_perm:
            perm = list(range(w))
            rng.shuffle(perm)
            layers.append(permutation(perm))
        layers.append(tensor(id_n(off), a, id_n(w - off - a.n_in)))
        w = w - a.n_in + a.n_out
    return compose(*layers)


def random_term(rng: random.Random, lang: Language, cfg: TermConfig = TermConfig(),
                n_in: int | None = None) -> Term:
    if n_in is None:
        n_in = rng.randint(0, min(2, cfg.max_width))
    n_gens = rng.randint(1, cfg.max_gens)
    return random_layered(rng, generator_atoms(lang, rng), n_gens, n_in, cfg.max_width, cfg.p_perm)


def random_term_of_arity(rng: random.Random, lang: Language, n_in: int, n_out: int,
                         cfg: TermConfig = TermConfig()) -> Term:
    """Random term with a prescribed arity, padded with deletions or point states."""
    t = random_term(rng, lang, cfg, n_in)
    if t.n_out > n_out:
        return compose(t, tensor(id_n(n_out), *[Gen(DELETE)] * (t.n_out - n_out)))
    if t.n_out < n_out:
        return tensor(t, *[Gen(ZERO if rng.random() < 0.5 else ONE) for _ in range(n_out - t.n_out)])
    return t


# ---------------------------------------------------------------------------
# coherence moves: syntactically different terms for the same graph


def _move(rng: random.Random, t: Term) -> Term:
    if isinstance(t, Comp):
        a, b = t.left, t.right
        r = rng.random()
        if r < 0.3 and isinstance(a, Tensor) and isinstance(b, Tensor) and a.left.n_out == b.left.n_in:
            return Tensor(Comp(a.left, b.left), Comp(a.right, b.right))
        return Comp(_move(rng, a), _move(rng, b))
    if isinstance(t, Tensor):
        a, b = t.left, t.right
        r = rng.random()
        if r < 0.25 and isinstance(a, Comp) and isinstance(b, Comp):
            return Comp(Tensor(a.left, b.left), Tensor(a.right, b.right))
        if r < 0.5:
            # naturality of the symmetry, sliding b past a
            sw_in = _block_swap(a.n_in, b.n_in)
            sw_out = _block_swap(b.n_out, a.n_out)
            return compose(sw_in, Tensor(b, a), sw_out)
        return Tensor(_move(rng, a), _move(rng, b))
    if isinstance(t, Gen) and rng.random() < 0.2:
        return compose(t, id_n(t.n_out))
    return t


def _block_swap(m: int, n: int) -> Term:
    """Permutation taking an (m, n) split bus to (n, m)."""
    return permutation(list(range(m, m + n)) + list(range(m)))


def coherence_variant(rng: random.Random, t: Term, rounds: int = 3) -> Term:
    out = t
    for _ in range(rounds):
        out = _move(rng, out)
    if rng.random() < 0.3:
        out = to_term(to_open_graph(out))
    return out


# ---------------------------------------------------------------------------
# polynomials and ideals


def random_polynomial(rng: random.Random, ring, n: int, max_deg: int = 3, max_terms: int = 4) -> Polynomial:
    terms: dict = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_deg)
        mono = [0] * n
        for _ in range(deg):
            if n:
                mono[rng.randrange(n)] += 1
        c = ring_values(rng, ring)[0]
        terms[tuple(mono)] = ring.add(terms.get(tuple(mono), ring.zero), c)
    return Polynomial(ring, n, terms)


def random_polys(rng: random.Random, ring, n: int, k: int, max_deg: int = 3, max_terms: int = 4) -> list[Polynomial]:
    return [random_polynomial(rng, ring, n, max_deg, max_terms) for _ in range(k)]


def random_ideal(rng: random.Random, ring, n: int, max_gens: int = 3, max_deg: int = 3,
                 max_terms: int = 3) -> list[Polynomial]:
    return random_polys(rng, ring, n, rng.randint(1, max_gens), max_deg, max_terms)


# ---------------------------------------------------------------------------
# ZH terms


def zh_atoms(spec: FieldSpec, rng: random.Random, max_arity: int = 2) -> list[Term]:
    atoms: list[Term] = []
    for a in range(max_arity + 1):
        for b in range(max_arity + 1):
            atoms.append(Gen(ZhGen("Z", a, b)))
            atoms.append(Gen(ZhGen("H", a, b)))
            if rng.random() < 0.5:
                atoms.append(Gen(ZhGen("H", a, b, daggered=True)))
    for j in range(spec.q):
        atoms.append(Gen(ZhGen("X", j=FieldElement(spec, j))))
        atoms.append(Gen(ZhGen("X", j=FieldElement(spec, j), daggered=True)))
    return atoms


def random_zh_term(rng: random.Random, spec: FieldSpec, max_gens: int = 4, max_width: int = 2,
                   n_in: int | None = None, max_arity: int = 2) -> Term:
    if n_in is None:
        n_in = rng.randint(0, max_width)
    atoms = zh_atoms(spec, rng, max_arity)
    return random_layered(rng, atoms, rng.randint(1, max_gens), n_in, max_width)


def random_closed_zh_term(rng: random.Random, spec: FieldSpec, max_gens: int = 4,
                          max_width: int = 2, max_arity: int = 2) -> Term:
    """A 0 -> 0 ZH term: a random state followed by effects that close every wire."""
    t = random_zh_term(rng, spec, max_gens, max_width, 0, max_arity)
    atoms = [a for a in zh_atoms(spec, rng, max_arity) if a.n_out == 0 and a.n_in >= 1]
    w = t.n_out
    layers = [t]
    while w > 0:
        a = rng.choice([x for x in atoms if x.n_in <= w])
        layers.append(tensor(a, id_n(w - a.n_in)))
        w -= a.n_in
    return compose(*layers)


def embed_in_context(rng: random.Random, lang: Language, t: Term, cfg: TermConfig = TermConfig(3, 3)) -> Term:
    """Random ``pre ; (t * side) ; post`` containing ``t`` as a subdiagram."""
    side = random_term(rng, lang, TermConfig(2, 2, 0.0), n_in=rng.randint(0, 1))
    mid = tensor(t, side) if rng.random() < 0.5 else tensor(side, t)
    wide = TermConfig(cfg.max_gens, max(cfg.max_width, mid.n_in, mid.n_out), cfg.p_perm)
    pre = random_term_of_arity(rng, lang, rng.randint(0, 2), mid.n_in, wide)
    post = random_term_of_arity(rng, lang, mid.n_out, rng.randint(0, 2), wide)
    return compose(pre, mid, post)
