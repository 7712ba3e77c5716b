import pytest
from hypothesis import given, strategies as st

from gag.field import (
    GF, QQ, FieldElement, FieldError, FieldSpec, enumerate_field, field_arith, parse_field, trace,
)

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27]


def el(spec, text):
    return FieldElement(spec, spec.parse(text))


def test_char2_addition():
    F = GF(2)
    assert field_arith(el(F, "1"), el(F, "1"), "add") == el(F, "0")


def test_gf4_a_squared():
    F = GF(4)
    assert F.irreducible == (1, 1, 1)
    a = el(F, "a")
    assert field_arith(a, a, "mul") == el(F, "a+1")


def test_gf5_division():
    F = GF(5)
    assert field_arith(el(F, "3"), el(F, "2"), "div") == el(F, "4")
    # brute-force inverse of 2
    assert [x for x in range(5) if (2 * x) % 5 == 1] == [3]


def test_sub_and_unknown_op():
    F = GF(7)
    assert field_arith(el(F, "2"), el(F, "5"), "sub") == el(F, "4")
    with pytest.raises(ValueError):
        field_arith(el(F, "2"), el(F, "5"), "pow")


@pytest.mark.parametrize("text,expected", [("0", "0"), ("a", "1")])
def test_gf4_trace(text, expected):
    F = GF(4)
    assert trace(el(F, text)) == el(F, expected)


def test_prime_trace_is_identity():
    F = GF(2)
    assert trace(el(F, "1")) == el(F, "1")


def test_enumeration_order():
    assert [str(x) for x in enumerate_field(GF(2))] == ["0", "1"]
    assert [str(x) for x in enumerate_field(GF(3))] == ["0", "1", "2"]
    assert [str(x) for x in enumerate_field(GF(4))] == ["0", "1", "a", "a+1"]


def test_division_by_zero():
    F = GF(3)
    with pytest.raises(FieldError):
        el(F, "1") / el(F, "0")


def test_mismatched_fields():
    with pytest.raises(FieldError):
        field_arith(el(GF(3), "1"), el(GF(5), "1"), "add")


def test_bad_fields():
    with pytest.raises(FieldError):
        GF(6)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(FieldError):
        FieldSpec(4)


def test_parse_field_forms():
    assert parse_field("2^2") == GF(4)
    assert parse_field("9") == GF(3, 2)
    assert parse_field("Q") is QQ
    assert parse_field("4", "1,1,1") == GF(4)


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_frobenius_fixes_everything(q):
    F = GF(q)
    for x in enumerate_field(F):
        assert x ** q == x


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_trace_linear_and_surjective(q):
    F = GF(q)
    els = enumerate_field(F)
    tr = {x.value: trace(x) for x in els}
    prime = {FieldElement(F, F.from_int(c)) for c in range(F.p)}
    assert set(tr.values()) == prime
    for x in els:
        for y in els:
            assert tr[(x + y).value] == tr[x.value] + tr[y.value]
        for c in range(F.p):
            assert tr[(x * c).value] == tr[x.value] * c


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_enumeration_distinct_and_stable(q):
    a = enumerate_field(GF(q))
    b = enumerate_field(GF(q))
    assert len({x.value for x in a}) == q == len(a)
    assert a == b


@pytest.mark.parametrize("q", [4, 8, 9])
def test_tables_against_elementwise(q):
    F = GF(q)
    for x in range(q):
        for y in range(q):
            assert F.add_table[x, y] == F.add(x, y)
            assert F.mul_table[x, y] == F.mul(x, y)


@given(st.sampled_from([4, 8, 9, 25]), st.data())
def test_field_axioms(q, data):
    F = GF(q)
    x, y, z = (FieldElement(F, data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == FieldElement(F, 0)
    if x:
        assert x * x.inverse() == FieldElement(F, 1)


def test_rationals():
    from fractions import Fraction

    assert QQ.div(Fraction(1), Fraction(3)) == Fraction(1, 3)
    assert QQ.parse("-2/4") == Fraction(-1, 2)
    assert not QQ.is_finite
