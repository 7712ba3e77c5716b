import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gag.diagram import Gen, Language, LanguageTag, parse, to_open_graph
from gag.field import GF, FieldElement
from gag.randgen import random_closed_zh_term, random_zh_term
from gag.rewrite import Ruleset, builtin_rules
from gag.semantics import matrix_semantics
from gag.zh import (
    H, Z, CountingOracle, Cyclotomic, ScaledCycMatrix, XState, ZhError, amplitude, fourier_dense,
    fourier_merge, gauss_sum, parse_zh, sem_fourier, translate_to_gag, zh_dense_eval,
)


def cyc(p, coeffs):
    return Cyclotomic.from_full(p, coeffs)


def test_hadamard_over_f2():
    F = GF(2)
    m = zh_dense_eval(H(1, 1), F)
    assert m.k == -1
    assert [[int(str(m.entry(i, j))) for j in range(2)] for i in range(2)] == [[1, 1], [1, -1]]


def test_xstate_is_scaled_basis_vector():
    F = GF(3)
    m = zh_dense_eval(XState(FieldElement(F, 2)), F)
    assert m.k == 1 and m.shape == (3, 1)
    assert [str(m.entry(i, 0)) for i in range(3)] == ["0", "0", "1"]


def test_hadamard_squared_is_identity():
    F = GF(2)
    m = zh_dense_eval(parse_zh("H(1,1) ; H(1,1)", F), F)
    ident = zh_dense_eval(Z(1, 1), F)
    assert m.k == -2 and m == ident


def test_translated_z_spider_is_identity():
    for q in (2, 3, 4):
        F = GF(q)
        assert fourier_dense(translate_to_gag(Z(1, 1), F), F) == zh_dense_eval(Z(1, 1), F)
        assert matrix_semantics(translate_to_gag(Z(1, 1), F), F).tolist() == np.eye(q, dtype=int).tolist()


def test_translated_xstate():
    F = GF(2)
    t = translate_to_gag(XState(FieldElement(F, 1)), F)
    kinds = sorted(g.kind for g in to_open_graph(t).generators())
    assert "sdown" in kinds
    v = fourier_dense(t, F)
    assert v == zh_dense_eval(XState(FieldElement(F, 1)), F)
    e1 = ScaledCycMatrix.real(F, 1, np.array([[0], [1]]))
    assert v == e1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_h00_routes_agree(q):
    F = GF(q)
    dense = zh_dense_eval(H(0, 0), F)
    assert sem_fourier(translate_to_gag(H(0, 0), F), F) == dense
    assert fourier_dense(translate_to_gag(H(0, 0), F), F) == dense
    assert amplitude(H(0, 0), F) == dense.scalar()


def test_fourier_merge_shapes():
    F = GF(3)
    L = Language(LanguageTag.GAG_Q_FOURIER, F)
    merged = fourier_merge(parse("z1 * z1", L))
    assert merged.k == 0 and merged.n_states == 2
    assert (merged.D_prime.n_in, merged.D_prime.n_out) == (1, 2)
    kinds = [g.kind for g in to_open_graph(merged.D_prime).generators()]
    assert "add" in kinds and all(k not in ("z1", "sdown") for k in kinds)
    plain = parse("copy", L)
    m0 = fourier_merge(plain)
    assert m0.k == 0 and m0.n_states == 0 and (m0.D_prime.n_in, m0.D_prime.n_out) == (2, 2)
    again = fourier_merge(parse("z1 ; copy", L))
    assert again.n_states == 1


def test_dagger_of_fourier_state_rejected():
    F = GF(3)
    with pytest.raises(Exception):
        parse("z1'", Language(LanguageTag.GAG_Q_FOURIER, F))


@pytest.mark.parametrize("q", [2, 3])
def test_amplitude_examples(q):
    F = GF(q)
    r = amplitude(Z(0, 0), F)
    assert r.k == 0 and r == zh_dense_eval(Z(0, 0), F).scalar()
    assert str(r.value) == str(q)
    t = parse_zh("xstate(0) ; xstate(0)'", F)
    assert amplitude(t, F) == zh_dense_eval(t, F).scalar()
    assert zh_dense_eval(t, F).scalar() == zh_dense_eval(Z(0, 0), F).scalar()
    t = parse_zh("H(0,1) ; xstate(0)'", F)
    oracle = CountingOracle(F)
    assert amplitude(t, F, oracle) == zh_dense_eval(t, F).scalar()
    assert oracle.calls == q


def test_amplitude_needs_closed_term():
    with pytest.raises(ZhError):
        amplitude(H(1, 1), GF(2))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_z1_rules_dense(q):
    F = GF(q)
    rules = [r for r in builtin_rules(Language(LanguageTag.GAG_Q_FOURIER, F)) if r.ruleset == Ruleset.ZH_EXT]
    assert {r.name for r in rules} == {"Z1-copy", "Z1-del"}
    for r in rules:
        assert fourier_dense(r.lhs_term, F) == fourier_dense(r.rhs_term, F)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cyclotomic_identities(p):
    w = Cyclotomic.omega(p)
    one = Cyclotomic.from_int(p, 1)
    acc = one
    total = Cyclotomic.from_int(p, 0)
    for _ in range(p):
        total = total + acc
        acc = acc * w
    assert acc == one
    assert total == Cyclotomic.from_int(p, 0)


@given(st.sampled_from([2, 3, 5]), st.data())
def test_cyclotomic_ring_laws(p, data):
    vec = st.lists(st.integers(-5, 5), min_size=p, max_size=p)
    a, b, c = (cyc(p, data.draw(vec)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a.conj().conj() == a


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_gauss_sum_squares(p):
    g = Cyclotomic(p, tuple(gauss_sum(p)))
    sign = 1 if p % 4 == 1 else -1
    assert g * g == Cyclotomic.from_int(p, sign * p)


def test_half_power_alignment():
    F = GF(2)
    a = ScaledCycMatrix(F, 0, np.array([[[2, 0]]]))
    b = ScaledCycMatrix(F, 2, np.array([[[1, 0]]]))
    assert a == b
    F5 = GF(5)
    g = gauss_sum(5).reshape(1, 1, 5)
    # q^(1/2) equals the quadratic Gauss sum for q = 5
    assert ScaledCycMatrix(F5, 1, np.array([[[1, 0, 0, 0, 0]]])) == ScaledCycMatrix(F5, 0, g)
    F3 = GF(3)
    assert ScaledCycMatrix(F3, 1, np.array([[[1, 0, 0]]])) != ScaledCycMatrix(F3, 0, np.array([[[1, 0, 0]]]))
    assert ScaledCycMatrix(F3, 1, np.zeros((1, 1, 3), dtype=int)) == ScaledCycMatrix(F3, 0, np.zeros((1, 1, 3), dtype=int))


def test_parse_zh_rejects_gag_atoms():
    from gag._expr import ParseError

    with pytest.raises(ParseError):
        parse_zh("copy", GF(2))
    t = parse_zh("Z(1,2) ; H(2,1)", GF(3))
    assert (t.n_in, t.n_out) == (1, 1)


def test_translation_random():
    rng = random.Random(8)
    for q in (2, 3, 4):
        F = GF(q)
        for _ in range(30):
            t = random_zh_term(rng, F, 5, 3)
            assert sem_fourier(translate_to_gag(t, F), F) == zh_dense_eval(t, F)


def test_amplitude_random():
    rng = random.Random(9)
    for q in (2, 3):
        F = GF(q)
        for _ in range(20):
            t = random_closed_zh_term(rng, F)
            oracle = CountingOracle(F)
            assert amplitude(t, F, oracle) == zh_dense_eval(t, F).scalar()
            assert oracle.calls == q
