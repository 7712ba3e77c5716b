import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gag.diagram import (
    ID, EMPTY, Language, LanguageTag, closure, compose, cospan_term, cup, cap, dagger, ideal_gadget,
    parse, poly_box, tensor,
)
from gag.field import GF, QQ
from gag.poly import GREVLEX, IdealBasis, Polynomial, buchberger, parse_polynomial, parse_polynomials
from gag.randgen import TermConfig, random_polys, random_term, random_term_of_arity
from gag.semantics import (
    CospanForm, Equivalence, NMatrix, ResourceLimitError, canonicalize, count_closed, equiv,
    eval_cospan, function_matrix, graph_matrix, matrix_semantics,
)


def polys(texts, ring, n):
    return tuple(parse_polynomials(texts, ring, n))


def gca(ring):
    return Language(LanguageTag.GCA, ring)


# -- cospan forms --------------------------------------------------------------

def test_ideal_gadget_cospan_has_projections():
    F = GF(3)
    g = parse_polynomials(["x1^2*x2 + x2^3 + 1", "x1^3 - x2^2"], F, 2)
    c = eval_cospan(ideal_gadget(g, 2), F)
    x = polys(["x1", "x2"], F, 2)
    assert (c.r, c.left, c.right) == (2, x, x)
    assert set(c.ideal) == set(g)
    assert canonicalize(c).ideal == buchberger(g).generators


def test_identity_cospan():
    c = eval_cospan(ID, QQ)
    x = polys(["x1"], QQ, 1)
    assert (c.r, c.left, c.right, c.ideal) == (1, x, x, ())


@pytest.mark.parametrize("ring,right", [(QQ, "2*x1"), (GF(3), "2*x1"), (GF(2), "0")], ids=str)
def test_copy_add_is_doubling(ring, right):
    c = canonicalize(eval_cospan(parse("copy ; add", gca(ring)), ring))
    assert c.left == polys(["x1"], ring, 1)
    assert c.right == polys([right], ring, 1)
    assert c.ideal == ()
    two = canonicalize(eval_cospan(parse("sc(2)", gca(ring)), ring))
    assert two.key() == c.key()


def test_canonicalize_eliminates_redundant_variable():
    F = GF(3)
    x = polys(["x1"], F, 1)
    c = CospanForm(1, 1, 1, x, x, polys(["x1", "x1^2"], F, 1), F)
    out = canonicalize(c)
    zero = Polynomial.zero(F, 0)
    assert (out.r, out.left, out.right, out.ideal) == (0, (zero,), (zero,), ())


def test_canonicalize_q_reduce():
    F = GF(2)
    x = polys(["x1"], F, 1)
    out = canonicalize(CospanForm(1, 1, 1, x, x, (), F), q_reduce=True)
    assert out.ideal == polys(["x1^2 + x1"], F, 1)
    assert (out.left, out.right) == (x, x)


def test_canonicalize_idempotent(rng):
    for q in (2, 3, 4):
        F = GF(q)
        for _ in range(30):
            c = canonicalize(eval_cospan(random_term(rng, gca(F)), F))
            assert canonicalize(c).key() == c.key()


def test_inconsistent_gadget():
    c = canonicalize(eval_cospan(ideal_gadget(polys(["x1^2 + 1", "x1"], QQ, 1), 1), QQ))
    assert c.r == 0 and c.basis().is_unit()
    assert matrix_semantics(ideal_gadget(polys(["x1^2 + 1", "x1"], GF(5), 1), 1), GF(5)).tolist() == [[0] * 5] * 5


def test_cospan_json_roundtrip_fields():
    F = GF(3)
    js = canonicalize(eval_cospan(parse("copy ; add", gca(F)), F)).to_json()
    assert js == {"n_left": 1, "n_right": 1, "r": 1, "field": "3", "order": "grevlex",
                  "left": [[[1, [1]]]], "right": [[[2, [1]]]], "ideal": []}


# -- counting matrices -----------------------------------------------------------

def test_identity_matrix():
    assert matrix_semantics(ID, GF(2)).tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_loop_counts_q(q):
    assert matrix_semantics(compose(cup(), cap()), GF(q)).tolist() == [[q]]


def test_mult_over_f2():
    m = matrix_semantics(parse("mul", gca(GF(2))), GF(2)).tolist()
    assert m == [[1, 0], [1, 0], [1, 0], [0, 1]]
    assert sum(row[0] for row in m) == 3


def test_count_closed_examples():
    assert count_closed(EMPTY, GF(2)) == 1
    F3 = GF(3)
    assert count_closed(closure(ideal_gadget(polys(["x1"], F3, 1), 1)), F3) == 1
    assert count_closed(closure(ideal_gadget(polys(["x1^2 - x1"], F3, 1), 1)), F3) == 2


def test_enumeration_cap():
    F = GF(2)
    t = tensor(*[ID] * 13)
    with pytest.raises(ResourceLimitError):
        matrix_semantics(t, F, max_enum=2 ** 20)


# -- equivalence --------------------------------------------------------------------

def test_equiv_examples():
    F = GF(3)
    for tag in (LanguageTag.GCA, LanguageTag.GAG_Q):
        L = Language(tag, F)
        a = ideal_gadget(polys(["x1"], F, 1), 1)
        b = ideal_gadget(polys(["x1", "x1^2"], F, 1), 1)
        assert equiv(a, b, L) == Equivalence.EQUAL
        assert equiv(parse("copy ; add", L), parse("sc(2)", L), L) == Equivalence.EQUAL
    F2 = GF(2)
    L = Language(LanguageTag.GAG_Q, F2)
    assert equiv(parse("zero", L), parse("one", L), L) == Equivalence.NOT_EQUAL


def test_equiv_lower_layer_unknown_and_notequal():
    L = Language(LanguageTag.GCA, QQ)
    a = parse("ideal[x1 : 1]", L)
    b = parse("ideal[x1^2 : 1]", L)
    assert equiv(a, b, L) == Equivalence.UNKNOWN
    F = GF(3)
    L3 = Language(LanguageTag.GCA, F)
    assert equiv(parse("zero", L3), parse("one", L3), L3) == Equivalence.NOT_EQUAL
    # over F_3 the two gadgets have the same counting matrix but different ideals
    assert equiv(parse("ideal[x1 : 1]", L3), parse("ideal[x1^2 : 1]", L3), L3) == Equivalence.UNKNOWN
    assert equiv(parse("ideal[x1 : 1]", Language(LanguageTag.GAG_Q, F)),
                 parse("ideal[x1^2 : 1]", Language(LanguageTag.GAG_Q, F)),
                 Language(LanguageTag.GAG_Q, F)) == Equivalence.EQUAL


# -- properties ------------------------------------------------------------------------

@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_functoriality(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    L = gca(F)
    d1 = random_term(rng, L, TermConfig(4, 3))
    d2 = random_term(rng, L, TermConfig(4, 3), n_in=d1.n_out)
    m1, m2 = matrix_semantics(d1, F), matrix_semantics(d2, F)
    assert matrix_semantics(compose(d1, d2), F) == m1 @ m2
    assert matrix_semantics(tensor(d1, d2), F) == m1.kron(m2)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4, 5]))
def test_cospan_route_matches_contraction(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    d = random_term(rng, gca(F))
    assert matrix_semantics(d, F) == graph_matrix(d, F)
    assert matrix_semantics(d, F, canonical=True) == graph_matrix(d, F)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_canonicalize_preserves_matrix(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    d = random_term(rng, gca(F))
    c = canonicalize(eval_cospan(d, F))
    assert graph_matrix(cospan_term(c.left, c.right, c.ideal, c.r, F), F) == graph_matrix(d, F)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_dagger_is_transpose(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    d = random_term(rng, gca(F))
    assert matrix_semantics(dagger(d), F) == matrix_semantics(d, F).transpose()


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_poly_box_rows_sum_to_one(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    n, m = rng.randint(0, 3), rng.randint(1, 2)
    f = random_polys(rng, F, n, m)
    M = matrix_semantics(poly_box(f, n, F), F)
    assert M == function_matrix(f, n, F)
    assert (M.data.sum(axis=1) == 1).all()


def test_nmatrix_algebra():
    a = NMatrix(2, 1, 1, np.array([[1, 2], [0, 1]]))
    b = NMatrix(2, 1, 1, np.array([[0, 1], [1, 0]]))
    assert (a @ b).tolist() == [[2, 1], [1, 0]]
    assert a.kron(b).data.shape == (4, 4)
    assert a.transpose().tolist() == [[1, 0], [2, 1]]
