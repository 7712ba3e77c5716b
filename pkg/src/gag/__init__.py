"""Diagrammatic commutative algebra over fields.

Modules: ``field`` (GF(p^t) and Q), ``poly`` (polynomials, Gröbner bases),
``diagram`` (terms, DSL, open graphs), ``rewrite`` (rule catalog, matching),
``semantics`` (cospan normal forms, counting matrices), ``csp`` (model
counting), ``zh`` (qudit ZH calculus) and ``cli``.
"""
from .field import GF, QQ, FieldElement, FieldSpec, parse_field
from .poly import GREVLEX, GRLEX, LEX, IdealBasis, Polynomial, buchberger, normal_form, parse_polynomial, q_saturate
from .diagram import Language, LanguageTag, OpenGraph, Term, parse, to_dsl, to_open_graph
from .semantics import (
    CospanForm, Equivalence, NMatrix, canonicalize, count_closed, equiv, eval_cospan, matrix_semantics,
)

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "FieldElement", "FieldSpec", "parse_field",
    "GREVLEX", "GRLEX", "LEX", "IdealBasis", "Polynomial", "buchberger", "normal_form", "parse_polynomial",
    "q_saturate", "Language", "LanguageTag", "OpenGraph", "Term", "parse", "to_dsl", "to_open_graph",
    "CospanForm", "Equivalence", "NMatrix", "canonicalize", "count_closed", "equiv", "eval_cospan",
    "matrix_semantics",
]
