"""Command-line interface: ``gag <command> [options] FILE...``.

Exit codes: 0 success (and Equal), 1 usage, 2 parse, 3 semantic, 4 resource,
5 NotEqual, 6 Unknown.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from ._expr import ParseError
from .csp import CspError, brute_force_count, count, load_problem, result_json
from .diagram import DiagramError, Language, LanguageTag, parse, to_dsl, to_open_graph
from .field import FieldError, FieldSpec, parse_field
from .poly import PolyError, order_from_name
from .rewrite import RewriteError, builtin_rules, check_soundness
from .semantics import (
    Equivalence, ResourceLimitError, SemanticsError, canonicalize, equiv, eval_cospan, matrix_semantics,
)
from .zh import CountingOracle, ZhError, amplitude, parse_zh

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_RESOURCE = 0, 1, 2, 3, 4
EQUIV_EXIT = {Equivalence.EQUAL: 0, Equivalence.NOT_EQUAL: 5, Equivalence.UNKNOWN: 6}


def load_schema(name: str) -> dict:
    """JSON schema shipped for a command's ``--format json`` output."""
    return json.loads(resources.files("gag").joinpath("schemas", f"{name}.json").read_text())


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    field: Any
    order: Any
    max_enum: int | None
    fmt: str
    language: Language | None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, field_required: bool = True) -> None:
    p.add_argument("--field", required=field_required, help="q, p^t, or Q for the rationals")
    p.add_argument("--irreducible", help="comma-separated coefficients c0,...,ct of the modulus")
    p.add_argument("--order", default="grevlex", choices=["grevlex", "grlex", "lex"])
    p.add_argument("--max-enum", type=int, default=None, help="enumeration cap (default from GAG_MAX_ENUM)")
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--language", default=None,
                   help="lcalg, gca, gag_k, gag_q or gag_q_fourier (default: widest for the field)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gag", description="Diagrams for commutative algebra and finite-field counting.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse a diagram and echo it")
    _add_common(p, field_required=False)
    p.add_argument("file")

    p = sub.add_parser("normalize", help="canonical cospan form")
    _add_common(p)
    p.add_argument("--q-reduce", action="store_true", help="add x^q - x for every interior variable")
    p.add_argument("--matrix", action="store_true", help="also print the counting matrix")
    p.add_argument("file")

    p = sub.add_parser("matrix", help="counting matrix over a finite field")
    _add_common(p)
    p.add_argument("file")

    p = sub.add_parser("equiv", help="decide equality of two diagrams")
    _add_common(p)
    p.add_argument("file1")
    p.add_argument("file2")

    p = sub.add_parser("count", help="count solutions of a .csp or DIMACS .cnf problem")
    _add_common(p)
    p.add_argument("--method", default="diagram", choices=["diagram", "brute", "both"])
    p.add_argument("file")

    p = sub.add_parser("zh-amp", help="amplitude of a closed ZH term")
    _add_common(p)
    p.add_argument("file")

    p = sub.add_parser("rules", help="rule catalog")
    rsub = p.add_subparsers(dest="rules_command", required=True, parser_class=_Parser)
    r = rsub.add_parser("list")
    _add_common(r, field_required=False)
    for name in ("check", "check-soundness"):
        r = rsub.add_parser(name)
        r.add_argument("--q", default="2,3,4,5", help="comma-separated field sizes")
        r.add_argument("--format", default="text", choices=["text", "json"])
    return ap


def _config(args) -> CliConfig:
    fld = None
    if getattr(args, "field", None) is not None:
        fld = parse_field(args.field, args.irreducible)
    lang = None
    if fld is not None or getattr(args, "language", None):
        ring = fld if fld is not None else parse_field("Q")
        if args.language:
            try:
                tag = LanguageTag[args.language.upper()]
            except KeyError as exc:
                raise UsageError(f"unknown language {args.language!r}") from exc
        else:
            tag = LanguageTag.GAG_Q_FOURIER if isinstance(ring, FieldSpec) else LanguageTag.GAG_K
        lang = Language(tag, ring)
    return CliConfig(fld, order_from_name(args.order), args.max_enum, args.format, lang)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _finite(cfg: CliConfig) -> FieldSpec:
    if not isinstance(cfg.field, FieldSpec):
        raise SemanticsError("this command needs a finite field")
    return cfg.field


def _emit(cfg: CliConfig, text: str, data: Any, out) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _matrix_text(m) -> str:
    rows = m.tolist()
    width = max((len(str(v)) for row in rows for v in row), default=1)
    lines = [" ".join(str(v).rjust(width) for v in row) for row in rows]
    return f"M_{m.q}: {m.n_left} -> {m.n_right} ({len(rows)}x{len(rows[0]) if rows else 0})\n" + "\n".join(lines)


def cmd_parse(args, cfg: CliConfig, out) -> int:
    lang = cfg.language or Language(LanguageTag.GAG_K, parse_field("Q"))
    t = parse(_read(args.file), lang)
    g = to_open_graph(t)
    data = {"dsl": to_dsl(t), "n_in": t.n_in, "n_out": t.n_out, "graph": g.to_json()}
    _emit(cfg, f"{to_dsl(t)}\n{t.n_in} -> {t.n_out}, {len(g.nodes)} generators", data, out)
    return EXIT_OK


def cmd_normalize(args, cfg: CliConfig, out) -> int:
    t = parse(_read(args.file), cfg.language)
    spec = cfg.field if args.q_reduce else None
    if args.q_reduce:
        _finite(cfg)
    c = canonicalize(eval_cospan(t, cfg.field), cfg.order, args.q_reduce, spec)
    data = {"cospan": c.to_json()}
    text = c.pretty()
    if args.matrix:
        m = matrix_semantics(t, _finite(cfg), cfg.max_enum)
        data["matrix"] = m.to_json()
        text += "\n" + _matrix_text(m)
    _emit(cfg, text, data, out)
    return EXIT_OK


def cmd_matrix(args, cfg: CliConfig, out) -> int:
    t = parse(_read(args.file), cfg.language)
    m = matrix_semantics(t, _finite(cfg), cfg.max_enum)
    _emit(cfg, _matrix_text(m), m.to_json(), out)
    return EXIT_OK


def cmd_equiv(args, cfg: CliConfig, out) -> int:
    a = parse(_read(args.file1), cfg.language)
    b = parse(_read(args.file2), cfg.language)
    res = equiv(a, b, cfg.language, cfg.max_enum)
    _emit(cfg, str(res), {"result": str(res), "language": cfg.language.tag.name}, out)
    return EQUIV_EXIT[res]


def cmd_count(args, cfg: CliConfig, out) -> int:
    spec = _finite(cfg)
    try:
        s = load_problem(args.file, spec)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    if args.method == "brute":
        value = brute_force_count(s, cfg.max_enum)
    else:
        value = count(s, cfg.max_enum)
        if args.method == "both" and brute_force_count(s, cfg.max_enum) != value:
            raise SemanticsError("diagram count disagrees with brute force")
    _emit(cfg, str(value), result_json(s, value, args.method), out)
    return EXIT_OK


def cmd_zh_amp(args, cfg: CliConfig, out) -> int:
    spec = _finite(cfg)
    t = parse_zh(_read(args.file), spec)
    oracle = CountingOracle(spec, max_enum=cfg.max_enum)
    amp = amplitude(t, spec, oracle, cfg.max_enum)
    data = {"amplitude": amp.to_json(), "oracle_calls": oracle.calls}
    _emit(cfg, f"{amp}\noracle calls: {oracle.calls}", data, out)
    return EXIT_OK


def cmd_rules(args, cfg: CliConfig | None, out) -> int:
    if args.rules_command == "list":
        lang = cfg.language or Language(LanguageTag.GAG_Q_FOURIER if isinstance(cfg.field, FieldSpec)
                                        else LanguageTag.GAG_K, cfg.field or parse_field("Q"))
        rules = builtin_rules(lang)
        text = "\n".join(f"{r.ruleset.value:8} {r.name}: {to_dsl(r.lhs_term)} = {to_dsl(r.rhs_term)}"
                         for r in rules)
        _emit(cfg, text, [r.to_json() for r in rules], out)
        return EXIT_OK
    try:
        qs = [int(x) for x in args.q.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --q list {args.q!r}") from exc
    checked, failures = check_soundness(qs)
    data = {"checked": checked, "q": qs, "failures": [{"rule": f.rule, "q": f.q} for f in failures]}
    text = "\n".join([f"FAIL {f.rule} over GF({f.q})" for f in failures]
                     + [f"{checked} rule instances checked over q in {qs}: {len(failures)} failures"])
    if args.format == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return EXIT_SEMANTIC if failures else EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "normalize": cmd_normalize,
    "matrix": cmd_matrix,
    "equiv": cmd_equiv,
    "count": cmd_count,
    "zh-amp": cmd_zh_amp,
    "rules": cmd_rules,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = None
        if not (args.command == "rules" and args.rules_command != "list"):
            cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        err.write(f"gag: usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"gag: parse error: {exc}\n")
        return EXIT_PARSE
    except ResourceLimitError as exc:
        err.write(f"gag: resource limit: {exc}\n")
        return EXIT_RESOURCE
    except (SemanticsError, DiagramError, ZhError, FieldError, CspError, PolyError, RewriteError) as exc:
        err.write(f"gag: error: {exc}\n")
        return EXIT_SEMANTIC


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
