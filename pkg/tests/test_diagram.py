import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gag._expr import ParseError
from gag.diagram import (
    ADD, COPY, DELETE, ID, SWAP, ZERO, Comp, DiagramError, Gen, Language, LanguageTag, Tensor,
    dagger, expand_sugar, id_n, ideal_gadget, isomorphic, parse, poly_box, tensor, to_dsl,
    to_open_graph, to_term,
)
from gag.field import GF, QQ
from gag.poly import parse_polynomial, parse_polynomials
from gag.randgen import TermConfig, coherence_variant, random_polys, random_term
from gag.semantics import function_matrix, matrix_semantics

GCA = Language(LanguageTag.GCA, QQ)
LCALG = Language(LanguageTag.LCALG, QQ)


def test_parse_arities():
    t = parse("copy ; (id * del)", LCALG)
    assert (t.n_in, t.n_out) == (1, 1)
    t = parse("add'", GCA)
    assert t == Gen(ADD.dagger()) and (t.n_in, t.n_out) == (1, 2)
    t = parse("poly[x1+x2, x1*x3]", LCALG)
    assert (t.n_in, t.n_out) == (3, 2)


def test_parse_precedence_and_powers():
    # '*' binds tighter than ';'
    a = parse("copy * id ; add * id ; mul", LCALG)
    b = parse("(copy * id) ; (add * id) ; mul", LCALG)
    assert a == b and (a.n_in, a.n_out) == (2, 1)
    with pytest.raises(ParseError):
        parse("copy ; add * id", LCALG)  # 1->2 then 3->2
    t = parse("copy^2", LCALG)
    assert (t.n_in, t.n_out) == (2, 4)
    t = parse("# comment\ncopy ; del * id  # trailing", LCALG)
    assert (t.n_in, t.n_out) == (1, 1)


def test_parse_layer_checks():
    with pytest.raises(ParseError):
        parse("add'", LCALG)
    with pytest.raises(ParseError):
        parse("z1", GCA)
    with pytest.raises(ParseError):
        parse("copy ;;", LCALG)
    with pytest.raises(ParseError):
        parse("copy ; frob", LCALG)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("copy ; @", LCALG)
    assert info.value.pos == 7


def test_scalars_and_states():
    F = GF(4)
    L = Language(LanguageTag.GAG_K, F)
    t = parse("sc(a+1)", L)
    assert (t.n_in, t.n_out) == (1, 1)
    assert (parse("state(a)", L).n_in, parse("state(a)", L).n_out) == (0, 1)
    assert (parse("ideal[x1*x2 + 1 : 2]", L).n_in, parse("ideal[x1*x2 + 1 : 2]", L).n_out) == (2, 2)


def test_graph_of_identity():
    g = to_open_graph(ID)
    assert g.nodes == () and g.n_wires == 1 and g.inputs == g.outputs


def test_swap_swap_is_two_wires():
    assert isomorphic(Comp(SWAP, SWAP), Tensor(ID, ID))
    assert not isomorphic(SWAP, Tensor(ID, ID))


def test_interchange_reassociation():
    a = parse("copy * id ; id * add", LCALG)
    b = parse("(copy ; id * id) * id ; (id * add)", LCALG)
    c = parse("copy * (id ; id) ; id * add", LCALG)
    assert isomorphic(a, b) and isomorphic(a, c)
    assert to_open_graph(a).canonical_key() == to_open_graph(b).canonical_key()
    assert not isomorphic(a, parse("copy * id ; add * id", LCALG))


def test_poly_box_identity_and_zero():
    x = parse_polynomial("x1", QQ)
    assert expand_sugar("poly_box", [x]) == ID
    zero = parse_polynomial("0", QQ, 1)
    assert expand_sugar("poly_box", [zero], 1, QQ) == Comp(Gen(DELETE), Gen(ZERO))


def test_ideal_gadget_principal():
    F = GF(3)
    g = expand_sugar("ideal_gadget", [parse_polynomial("x1", F)])
    assert isomorphic(g, Comp(Gen(COPY), Tensor(ID, Gen(ZERO.dagger()))))
    m = matrix_semantics(g, F)
    assert m.tolist() == np.diag([1, 0, 0]).tolist()


def test_dagger_examples():
    z = dagger(Gen(ZERO))
    assert z == Gen(ZERO.dagger()) and (z.n_in, z.n_out) == (1, 0)
    t = parse("copy ; add", GCA)
    assert dagger(dagger(t)) == t
    d = dagger(t)
    assert (d.n_in, d.n_out) == (1, 1)
    assert d == Comp(Gen(ADD.dagger()), Gen(COPY.dagger()))
    with pytest.raises(DiagramError):
        dagger(t, LCALG)


def test_graph_json_and_roundtrip():
    t = parse("copy ; swap ; mul", LCALG)
    g = to_open_graph(t)
    js = g.to_json()
    assert js["wires"] == g.n_wires and len(js["nodes"]) == 2
    assert isomorphic(to_term(g), t)


def test_dsl_roundtrip_random(rng):
    for _ in range(200):
        t = random_term(rng, GCA)
        assert isomorphic(parse(to_dsl(t), GCA), t)


@given(st.integers(0, 10**6), st.sampled_from(list(LanguageTag)[:3]))
def test_arity_bookkeeping(seed, tag):
    rng = random.Random(seed)
    t = random_term(rng, Language(tag, QQ))
    g = to_open_graph(t)
    assert (g.n_in, g.n_out) == (t.n_in, t.n_out)
    assert len(g.nodes) == t.size()


def test_coherence_absorption():
    rng = random.Random(2024)
    for _ in range(1000):
        t = random_term(rng, GCA, TermConfig(6, 3))
        v = coherence_variant(rng, t)
        assert isomorphic(t, v), (to_dsl(t), to_dsl(v))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_poly_box_is_function_matrix(q):
    rng = random.Random(q)
    F = GF(q)
    for _ in range(40):
        n, m = rng.randint(0, 3), rng.randint(1, 2)
        f = random_polys(rng, F, n, m, 3, 3)
        box = poly_box(f, n, F)
        assert matrix_semantics(box, F) == function_matrix(f, n, F)
