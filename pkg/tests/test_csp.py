import itertools
import random

import pytest
from hypothesis import given, strategies as st

from gag.csp import (
    Cnf, ConstraintSystem, CspError, brute_force_count, brute_force_sat, cnf_to_system, count,
    parse_csp, parse_dimacs, system_to_diagram,
)
from gag.field import GF
from gag.poly import parse_polynomial, parse_polynomials
from gag.randgen import random_polys


def random_cnf(rng, max_vars=10, max_clauses=15):
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(0, max_clauses)):
        size = rng.randint(0, 3)
        clauses.append(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(size)))
    return Cnf(n, tuple(clauses))


def test_or_clause_polynomial():
    s = cnf_to_system(Cnf(2, ((1, 2),)))
    F = GF(2)
    assert s.constraints == (parse_polynomial("1 + x1 + x2 + x1*x2", F, 2),)


def test_negative_literal_and_empty_clause():
    F = GF(2)
    assert cnf_to_system(Cnf(1, ((-1,),))).constraints == (parse_polynomial("x1", F, 1),)
    s = cnf_to_system(Cnf(1, ((),)))
    assert s.constraints == (parse_polynomial("1", F, 1),)
    assert count(s) == 0


def test_system_examples():
    F3, F2 = GF(3), GF(2)
    s = ConstraintSystem(F3, ("x1", "x2"))
    d = system_to_diagram(s)
    assert (d.n_in, d.n_out) == (0, 0) and count(s) == 9
    assert count(ConstraintSystem(F2, ("x1",), (parse_polynomial("x1", F2, 1),))) == 1
    s = ConstraintSystem(F2, ("x1", "x2"), (parse_polynomial("x1*x2 + x1 + x2", F2, 2),))
    assert count(s) == brute_force_count(s) == 1


def test_count_examples():
    assert count(cnf_to_system(Cnf(2, ((1, 2),)))) == 3
    F3 = GF(3)
    assert count(ConstraintSystem(F3, ("x",), (parse_polynomial("x^2 - x", F3, 1, ["x"]),))) == 2
    assert count(ConstraintSystem(F3, ("x",), (parse_polynomial("1", F3, 1),))) == 0


def test_dimacs_parser():
    c = parse_dimacs("c example\np cnf 3 2\n1 -2 0\n2\n3 0\n")
    assert c == Cnf(3, ((1, -2), (2, 3)))
    with pytest.raises(CspError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(CspError):
        Cnf(2, ((3,),))
    with pytest.raises(CspError):
        Cnf(2, ((0,),))


def test_csp_text_format():
    s = parse_csp("# demo\nfield 2^2\nvars x, y\nx*y + a\nx + y + 1\n")
    assert s.spec == GF(4) and s.variables == ("x", "y") and len(s.constraints) == 2
    assert count(s) == brute_force_count(s)
    with pytest.raises(CspError):
        parse_csp("vars x\nx\n")
    with pytest.raises(CspError):
        parse_csp("field 3\nvars x\nx\n", GF(5))


def test_cnf_encoding_exhaustive():
    rng = random.Random(3)
    for _ in range(40):
        c = random_cnf(rng, 12, 10)
        s = cnf_to_system(c)
        F = s.spec
        for bits in itertools.product((0, 1), repeat=c.n_vars):
            sat = all(F.is_zero(g.evaluate(bits)) for g in s.constraints)
            assert sat == c.satisfied_by(bits)


def test_cnf_counts():
    rng = random.Random(4)
    for _ in range(100):
        c = random_cnf(rng)
        assert count(cnf_to_system(c)) == brute_force_sat(c)


def test_random_systems():
    rng = random.Random(5)
    for _ in range(200):
        F = GF(rng.choice([2, 3, 4]))
        n = rng.randint(0, 6 if F.q == 2 else 4)
        gens = random_polys(rng, F, n, rng.randint(0, 4), 3, 3)
        s = ConstraintSystem(F, tuple(f"x{i+1}" for i in range(n)), tuple(gens))
        assert count(s) == brute_force_count(s)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_monotone(seed, q):
    rng = random.Random(seed)
    F = GF(q)
    n = rng.randint(1, 3)
    s = ConstraintSystem(F, tuple(f"x{i+1}" for i in range(n)), tuple(random_polys(rng, F, n, 2)))
    s2 = s.with_constraint(random_polys(rng, F, n, 1)[0])
    assert count(s2) <= count(s)
