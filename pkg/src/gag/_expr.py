"""Tiny arithmetic-expression parser shared by field elements, polynomials and the DSL.

Grammar (whitespace-insensitive)::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("+" | "-") unary | power
    power := atom ("^" INT)?
    atom  := INT | IDENT | "(" expr ")"

Evaluation is delegated to an algebra object so the same grammar serves
GF(p^t) elements (identifier ``a``), polynomials (``x1`` ... ``xn``) and
rational scalars.
"""
from __future__ import annotations

import re
from typing import Any, Protocol


class ParseError(ValueError):
    """Syntax error carrying the offending character offset."""

    def __init__(self, message: str, pos: int = -1):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})" if pos >= 0 else message)


class Algebra(Protocol):
    def const(self, n: int) -> Any: ...
    def var(self, name: str, pos: int) -> Any: ...
    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...
    def div(self, a: Any, b: Any, pos: int) -> Any: ...
    def neg(self, a: Any) -> Any: ...
    def pow(self, a: Any, e: int) -> Any: ...


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text: str, offset: int = 0) -> list[tuple[str, str, int]]:
    """Split into ``(kind, value, pos)`` with kind in {"int", "ident", "op"}."""
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), offset + m.start(1)))
        elif m.group(2) is not None:
            out.append(("ident", m.group(2), offset + m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), offset + m.start(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, algebra: Algebra, end: int):
        self.toks = tokens
        self.i = 0
        self.alg = algebra
        self.end = end

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", self.end)
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            rhs = self.term()
            val = self.alg.add(val, rhs) if tok[1] == "+" else self.alg.sub(val, rhs)
        return val

    def term(self):
        val = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "*/":
            self.i += 1
            rhs = self.unary()
            val = self.alg.mul(val, rhs) if tok[1] == "*" else self.alg.div(val, rhs, tok[2])
        return val

    def unary(self):
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            val = self.unary()
            return self.alg.neg(val) if tok[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            kind, value, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", pos)
            return self.alg.pow(base, int(value))
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            return self.alg.const(int(value))
        if kind == "ident":
            return self.alg.var(value, pos)
        if value == "(":
            val = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ParseError("expected ')'", p2)
            return val
        raise ParseError(f"unexpected token {value!r}", pos)


def parse_expression(text: str, algebra: Algebra, offset: int = 0) -> Any:
    toks = tokenize(text, offset)
    if not toks:
        raise ParseError("empty expression", offset)
    p = _Parser(toks, algebra, offset + len(text))
    val = p.expr()
    if p.peek() is not None:
        raise ParseError(f"unexpected token {p.peek()[1]!r}", p.peek()[2])
    return val
