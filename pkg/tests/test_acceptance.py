"""Acceptance gate: nine exact, oracle-backed checks.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
Each check prints one PASS/FAIL line.  Nothing here uses tolerances: matrices
are integer arrays and ZH values are exact cyclotomic integers.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from derived import DERIVED  # noqa: E402
from gag.csp import (  # noqa: E402
    Cnf, ConstraintSystem, brute_force_count, brute_force_sat, cnf_to_system, count,
)
from gag.diagram import Language, LanguageTag, cospan_term, to_open_graph, to_term  # noqa: E402
from gag.field import GF  # noqa: E402
from gag.poly import GREVLEX, GRLEX, LEX, buchberger, normal_form, q_saturate  # noqa: E402
from gag.randgen import (  # noqa: E402
    TermConfig, coherence_variant, embed_in_context, random_closed_zh_term, random_ideal,
    random_polynomial, random_polys, random_term, random_term_of_arity, random_zh_term,
)
from gag.rewrite import Direction, apply, builtin_rules, check_soundness, find_matches  # noqa: E402
from gag.semantics import (  # noqa: E402
    Equivalence, canonicalize, equiv, eval_cospan, graph_matrix, matrix_semantics,
)
from gag.zh import CountingOracle, amplitude, sem_fourier, translate_to_gag, zh_dense_eval  # noqa: E402


def _timed(limit: float | None):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if limit is not None and dt >= limit:
                ok, detail = False, f"{detail}; took {dt:.1f}s, limit {limit:.0f}s"
            return ok, f"{detail} [{dt:.1f}s]"
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_timed(30)
def rule_soundness():
    """every shipped rule: LHS and RHS semantics agree over q = 2, 3, 4, 5"""
    checked, failures = check_soundness((2, 3, 4, 5))
    names = sorted({f"{f.rule}@{f.q}" for f in failures})
    return not failures and checked > 0, f"{checked} rule instances, {len(failures)} failures {names[:5]}"


@_timed(60)
def derived_rules():
    """derived equations hold on >= 50 random instances each, q <= 4"""
    rng = random.Random(2024)
    per, bad = {}, []
    for name in sorted(DERIVED):
        per[name] = 0
        for i in range(51):
            F = GF((2, 3, 4)[i % 3])
            lhs, rhs = DERIVED[name](rng, F)
            if matrix_semantics(lhs, F) != matrix_semantics(rhs, F):
                bad.append(f"{name}@{F.q}")
            per[name] += 1
    ok = not bad and min(per.values()) >= 50
    return ok, f"{len(per)} equations x {min(per.values())} instances, {len(bad)} failures {bad[:5]}"


@_timed(60)
def normal_form_reexpansion():
    """500 random diagrams: the re-expanded cospan has the same counting matrix"""
    rng = random.Random(31)
    bad = 0
    for _ in range(500):
        F = GF(rng.choice([2, 3, 4]))
        L = Language(rng.choice([LanguageTag.LCALG, LanguageTag.GCA]), F)
        d = random_term(rng, L, TermConfig(max_gens=8, max_width=3))
        c = canonicalize(eval_cospan(d, F))
        back = cospan_term(c.left, c.right, c.ideal, c.r, F)
        reference = graph_matrix(d, F)
        if graph_matrix(back, F) != reference or matrix_semantics(d, F) != reference:
            bad += 1
    return bad == 0, f"500 diagrams, {bad} mismatches"


def _equal_pair(rng, L):
    """Two terms equal by construction: a coherence variant or a single rule application."""
    if rng.random() < 0.5:
        a = random_term(rng, L, TermConfig(6, 3))
        return a, coherence_variant(rng, a)
    return _rule_pair(rng, L)


def _rule_pair(rng, L):
    while True:
        r = rng.choice(builtin_rules(L))
        d = rng.choice(list(Direction))
        pattern, _ = r.side(d)
        host = to_open_graph(embed_in_context(rng, L, to_term(pattern)))
        ms = find_matches(r, host, d)
        if ms:
            return to_term(host), to_term(apply(r, host, rng.choice(ms), d))


def full_faithfulness():
    """200 random pairs: Equal iff matrices agree; 50 rule-built pairs: Equal"""
    rng = random.Random(47)
    bad, n_equal = [], 0
    for i in range(200):
        F = GF(rng.choice([2, 3]))
        L = Language(LanguageTag.GAG_Q, F)
        if i % 4 == 0:
            a, b = _equal_pair(rng, L)
        else:
            n_in, n_out = rng.randint(0, 2), rng.randint(0, 2)
            cfg = TermConfig(rng.randint(1, 6), 3)
            a = random_term_of_arity(rng, L, n_in, n_out, cfg)
            b = random_term_of_arity(rng, L, n_in, n_out, cfg)
        same = graph_matrix(a, F) == graph_matrix(b, F)
        n_equal += same
        res = equiv(a, b, L)
        if res != (Equivalence.EQUAL if same else Equivalence.NOT_EQUAL):
            bad.append((i, str(res), same))
    rule_bad = 0
    for _ in range(50):
        F = GF(rng.choice([2, 3]))
        L = Language(LanguageTag.GAG_Q, F)
        a, b = _rule_pair(rng, L)
        rule_bad += equiv(a, b, L) != Equivalence.EQUAL
    ok = not bad and rule_bad == 0
    return ok, (f"200 pairs ({n_equal} equal by matrix), {len(bad)} disagreements; "
                f"50 rule pairs, {rule_bad} not Equal")


def _random_cnf(rng, max_vars=10, max_clauses=15):
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(0, max_clauses)):
        clauses.append(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, 3))))
    return Cnf(n, tuple(clauses))


@_timed(120)
def counting():
    """200 polynomial systems and 100 CNFs: pipeline count equals brute force"""
    rng = random.Random(59)
    bad_sys = 0
    for _ in range(200):
        F = GF(rng.choice([2, 3, 4]))
        n = rng.randint(0, 6)
        gens = random_polys(rng, F, n, rng.randint(0, 4), 3, 3)
        s = ConstraintSystem(F, tuple(f"x{i + 1}" for i in range(n)), tuple(gens))
        bad_sys += count(s) != brute_force_count(s)
    bad_cnf = 0
    for _ in range(100):
        c = _random_cnf(rng)
        bad_cnf += count(cnf_to_system(c)) != brute_force_sat(c)
    return bad_sys == 0 and bad_cnf == 0, f"200 systems ({bad_sys} wrong), 100 CNFs ({bad_cnf} wrong)"


def nullstellensatz():
    """membership in the q-saturated ideal iff vanishing on every F_q-root"""
    rng = random.Random(67)
    bad, members = 0, 0
    for i in range(300):
        F = GF((2, 3, 4)[i % 3])
        n = rng.randint(1, 3)
        J = random_ideal(rng, F, n)
        f = random_polynomial(rng, F, n)
        if rng.random() < 0.5:
            f = f * rng.choice(J) + random_polynomial(rng, F, n) * J[0]
        G = buchberger(q_saturate(J, F))
        member = normal_form(f, G).is_zero()
        members += member
        roots = [pt for pt in itertools.product(range(F.q), repeat=n)
                 if all(F.is_zero(g.evaluate(pt)) for g in J)]
        vanishes = all(F.is_zero(f.evaluate(pt)) for pt in roots)
        bad += member != vanishes
    return bad == 0, f"300 ideal/polynomial pairs ({members} members), {bad} disagreements"


def zh_translation():
    """300 random ZH terms: dense value equals the translated diagram's value"""
    rng = random.Random(71)
    bad = 0
    for i in range(300):
        F = GF((2, 3, 4)[i % 3])
        t = random_zh_term(rng, F, max_gens=6, max_width=4)
        bad += sem_fourier(translate_to_gag(t, F), F) != zh_dense_eval(t, F)
    return bad == 0, f"300 terms, {bad} mismatches"


def amplitude_queries():
    """100 closed ZH terms: amplitude is exact and uses exactly q oracle calls"""
    rng = random.Random(73)
    wrong, calls = 0, 0
    for i in range(100):
        F = GF((2, 3)[i % 2])
        t = random_closed_zh_term(rng, F)
        oracle = CountingOracle(F)
        wrong += amplitude(t, F, oracle) != zh_dense_eval(t, F).scalar()
        calls += oracle.calls != F.q
    return wrong == 0 and calls == 0, f"100 terms, {wrong} wrong values, {calls} wrong call counts"


def groebner_determinism():
    """100 random ideals: reduced basis unchanged by permuting or duplicating generators"""
    rng = random.Random(79)
    bad = 0
    rings = [GF(2), GF(3), GF(4), GF(5)]
    for i in range(100):
        F = rings[i % len(rings)]
        order = (GREVLEX, GRLEX, LEX)[i % 3]
        gens = random_ideal(rng, F, rng.randint(1, 3))
        G = buchberger(gens, order)
        shuffled = list(gens) + [rng.choice(gens) for _ in range(rng.randint(1, 2))]
        rng.shuffle(shuffled)
        bad += buchberger(shuffled, order).generators != G.generators
    return bad == 0, f"100 ideals, {bad} differing bases"


CRITERIA = [
    rule_soundness, derived_rules, normal_form_reexpansion, full_faithfulness, counting,
    nullstellensatz, zh_translation, amplitude_queries, groebner_determinism,
]


def _line(k: int, fn, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {k}. {fn.__name__}: {fn.__doc__.strip()} -- {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, capsys):
    fn = CRITERIA[k - 1]
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(k, fn, ok, detail))
    assert ok, detail


def main() -> int:
    failed = 0
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failed += not ok
        print(_line(k, fn, ok, detail), flush=True)
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
