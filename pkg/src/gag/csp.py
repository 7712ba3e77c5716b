"""Counting solutions of polynomial constraint systems and CNF formulas.

A system over GF(q) compiles to a closed diagram whose semantics is its
number of solutions.  A direct enumerator serves as an independent oracle.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .diagram import Term, closure, id_n, ideal_gadget
from .field import FieldSpec, GF, parse_field
from .poly import Polynomial, parse_polynomials
from .semantics import ResourceLimitError, count_closed, max_enum_budget


class CspError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    spec: FieldSpec
    variables: tuple[str, ...]
    constraints: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        n = len(self.variables)
        for g in self.constraints:
            if g.n != n or g.ring != self.spec:
                raise CspError("constraints must share the field and the variable count")

    @property
    def n(self) -> int:
        return len(self.variables)

    def with_constraint(self, g: Polynomial) -> "ConstraintSystem":
        return ConstraintSystem(self.spec, self.variables, self.constraints + (g,))


@dataclass(frozen=True)
class Cnf:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        for cl in self.clauses:
            for lit in cl:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise CspError(f"literal {lit} out of range for {self.n_vars} variables")

    def satisfied_by(self, bits: Sequence[int]) -> bool:
        return all(any((bits[abs(l) - 1] == 1) == (l > 0) for l in cl) for cl in self.clauses)


def _default_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def cnf_to_system(c: Cnf) -> ConstraintSystem:
    """One polynomial per clause; it equals 1 exactly on the falsifying pattern."""
    spec = GF(2)
    gens = []
    one = Polynomial.const(spec, c.n_vars, 1)
    for cl in c.clauses:
        g = one
        for lit in cl:
            v = Polynomial.var(spec, c.n_vars, abs(lit) - 1)
            g = g * (one + v if lit > 0 else v)
        gens.append(g)
    return ConstraintSystem(spec, _default_names(c.n_vars), tuple(gens))


def system_to_diagram(s: ConstraintSystem) -> Term:
    """Closed diagram counting the common zeros of the constraints."""
    gadget = ideal_gadget(list(s.constraints), s.n) if s.constraints else id_n(s.n)
    return closure(gadget)


def count(s: ConstraintSystem, max_enum: int | None = None) -> int:
    return count_closed(system_to_diagram(s), s.spec, max_enum)


def brute_force_count(s: ConstraintSystem, max_enum: int | None = None) -> int:
    """Enumerate GF(q)^n directly, independent of the diagram machinery."""
    q, n = s.spec.q, s.n
    cap = max_enum_budget(max_enum)
    if q ** n > cap:
        raise ResourceLimitError(f"{q}^{n} assignments exceed the cap {cap}")
    size = q ** n
    idx = np.arange(size, dtype=np.int64)
    columns = []
    for i in range(n):
        columns.append((idx // q ** (n - 1 - i)) % q)
    ok = np.ones(size, dtype=bool)
    for g in s.constraints:
        ok &= g.evaluate_batch(columns, size) == s.spec.zero
    return int(ok.sum())


def brute_force_sat(c: Cnf) -> int:
    """Exhaustive #SAT straight from the clauses."""
    return sum(c.satisfied_by(bits) for bits in itertools.product((0, 1), repeat=c.n_vars))


# ---------------------------------------------------------------------------
# text formats


def parse_dimacs(text: str) -> Cnf:
    n_vars = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CspError(f"line {lineno}: bad header {line!r}")
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise CspError(f"line {lineno}: clause before the 'p cnf' header")
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise CspError(f"line {lineno}: {exc}") from exc
        for lit in lits:
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if n_vars is None:
        raise CspError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    return Cnf(n_vars, tuple(clauses))


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse_csp(text: str, spec: FieldSpec | None = None) -> ConstraintSystem:
    """Read ``field p^t`` / ``vars x,y`` headers followed by one polynomial per line."""
    fld, names, body = None, None, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "field" and fld is None and not body:
            fld = parse_field(rest.strip())
        elif head == "vars" and names is None and not body:
            names = tuple(v.strip() for v in rest.split(",") if v.strip())
            for v in names:
                if not _NAME.match(v) or v == "a":
                    raise CspError(f"line {lineno}: bad variable name {v!r}")
        else:
            body.append(line)
    if fld is None:
        fld = spec
    if fld is None or not isinstance(fld, FieldSpec):
        raise CspError("a finite field is required (header 'field p^t' or --field)")
    if spec is not None and spec != fld:
        raise CspError(f"file declares {fld.label()} but {spec.label()} was requested")
    if names is None:
        raise CspError("missing 'vars' header")
    polys = parse_polynomials(body, fld, len(names), names=list(names)) if body else []
    return ConstraintSystem(fld, names, tuple(polys))


def load_problem(path: str | Path, spec: FieldSpec | None = None) -> ConstraintSystem:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".cnf" or text.lstrip().startswith(("p cnf", "c")):
        if spec is not None and spec.q != 2:
            raise CspError("CNF input needs --field 2")
        return cnf_to_system(parse_dimacs(text))
    return parse_csp(text, spec)


def result_json(s: ConstraintSystem, value: int, method: str) -> dict:
    return {"count": value, "n": s.n, "q": s.spec.q, "method": method}
