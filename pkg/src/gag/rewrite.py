"""Rule catalog and a matching/rewriting engine over open graphs.

Rules are written in the diagram DSL and instantiated per coefficient ring
(scalar rules range over every element of a small finite field, or over a
sample of rationals).  Every shipped rule is gated by exact semantic equality
of both sides; see :func:`check_soundness`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .diagram import (
    ADD, MULT, DiagramError, Generator, Language, LanguageTag, Node, OpenGraph, Term, bus_binary,
    bus_copy, bus_delete, compose, parse, poly_box, tensor, to_dsl, to_open_graph,
)
from .field import FieldSpec, QQ
from .poly import Polynomial, parse_polynomials, substitute_into

Q_SAMPLES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2))


class RewriteError(ValueError):
    pass


class StaleMatchError(RewriteError):
    """The match no longer describes a subgraph of the host."""


class Ruleset(str, enum.Enum):
    LCALG = "LCALG"
    SCALABLE = "SCALABLE"
    GCA = "GCA"
    RED = "RED"
    QRED = "QRED"
    ZH_EXT = "ZH_EXT"


class Direction(str, enum.Enum):
    LtoR = "LtoR"
    RtoL = "RtoL"


@dataclass(frozen=True)
class RewriteRule:
    name: str
    ruleset: Ruleset
    lhs_term: Term
    rhs_term: Term
    bidirectional: bool = True

    def __post_init__(self):
        if (self.lhs_term.n_in, self.lhs_term.n_out) != (self.rhs_term.n_in, self.rhs_term.n_out):
            raise RewriteError(f"rule {self.name}: sides have different arities")

    @property
    def lhs(self) -> OpenGraph:
        return to_open_graph(self.lhs_term)

    @property
    def rhs(self) -> OpenGraph:
        return to_open_graph(self.rhs_term)

    def side(self, direction: Direction) -> tuple[OpenGraph, OpenGraph]:
        return (self.lhs, self.rhs) if Direction(direction) == Direction.LtoR else (self.rhs, self.lhs)

    def to_json(self) -> dict:
        return {"name": self.name, "ruleset": self.ruleset.value,
                "lhs": to_dsl(self.lhs_term), "rhs": to_dsl(self.rhs_term)}


# ---------------------------------------------------------------------------
# catalog

_LCALG_FIXED = [
    ("z-assoc", "copy ; copy * id", "copy ; id * copy"),
    ("z-symm", "copy ; swap", "copy"),
    ("z-unit", "copy ; id * del", "id"),
    ("x-assoc", "add * id ; add", "id * add ; add"),
    ("x-symm", "swap ; add", "add"),
    ("x-unit", "zero * id ; add", "id"),
    ("m-assoc", "mul * id ; mul", "id * mul ; mul"),
    ("m-symm", "swap ; mul", "mul"),
    ("m-unit", "one * id ; mul", "id"),
    ("zx-bialg", "add ; copy", "copy * copy ; id * swap * id ; add * add"),
    ("add-cp", "add ; copy", "copy * copy ; id * swap * id ; add * add"),
    ("zero-cp", "zero ; copy", "zero * zero"),
    ("mult-cp", "mul ; copy", "copy * copy ; id * swap * id ; mul * mul"),
    ("one-cp", "one ; copy", "one * one"),
    ("add-del", "add ; del", "del * del"),
    ("zero-del", "zero ; del", "id0"),
    ("mult-del", "mul ; del", "del * del"),
    ("one-del", "one ; del", "id0"),
    ("distr", "add * id ; mul", "id * id * copy ; id * swap * id ; mul * mul ; add"),
    ("zero-mult", "zero * id ; mul", "del ; zero"),
]

_GCA_FIXED = [
    ("x-bone", "zero ; zero'", "id0"),
    ("z-frob", "copy * id ; id * copy'", "copy' ; copy"),
    ("z-frob-mirror", "id * copy ; copy' * id", "copy' ; copy"),
    ("x-frob", "add' * id ; id * add", "add ; add'"),
    ("x-frob-mirror", "id * add' ; add * id", "add ; add'"),
    ("cup", "zero ; add' ; id * sc(-1)", "del' ; copy"),
    ("cap", "id * sc(-1) ; add ; zero'", "copy' ; del"),
    ("mult-trp",
     "(del' ; copy) * (del' ; copy) * id ; id * mul * id * id ; id * id * swap ; id * (copy' ; del) * id",
     "mul'"),
    ("one-trp", "id * one ; copy' ; del", "one'"),
    ("z-fusion", "(copy' ; copy) * id ; id * (copy' ; copy)", "copy' * id ; copy' ; copy ; copy * id"),
]


def ring_samples(ring) -> list:
    """Raw ring values over which scalar rules are instantiated."""
    if isinstance(ring, FieldSpec):
        return list(range(ring.q))
    return list(Q_SAMPLES)


def _sc(ring, c) -> str:
    return f"sc({ring.format(c)})"


def _scalar_rules(ring) -> list[tuple[str, Ruleset, str, str]]:
    out = []
    R = ring
    ks = ring_samples(ring)
    for k in ks:
        tag = R.format(k)
        out.append((f"k-copy[k={tag}]", Ruleset.LCALG, f"{_sc(R, k)} ; copy", f"copy ; {_sc(R, k)} * {_sc(R, k)}"))
        out.append((f"k-del[k={tag}]", Ruleset.LCALG, f"{_sc(R, k)} ; del", "del"))
        out.append((f"k-lin[k={tag}]", Ruleset.LCALG, f"add ; {_sc(R, k)}", f"{_sc(R, k)} * {_sc(R, k)} ; add"))
        out.append((f"k-zero[k={tag}]", Ruleset.LCALG, f"zero ; {_sc(R, k)}", "zero"))
        out.append((f"k-mult[k={tag}]", Ruleset.LCALG, f"{_sc(R, k)} * id ; mul", f"mul ; {_sc(R, k)}"))
        out.append((f"k-trp[k={tag}]", Ruleset.GCA,
                    f"(del' ; copy) * id ; id * {_sc(R, k)} * id ; id * (copy' ; del)", f"{_sc(R, k)}'"))
        if not R.is_zero(k):
            out.append((f"k-inv[k={tag}]", Ruleset.GCA, f"{_sc(R, k)}'", _sc(R, R.inv(k))))
    for k in ks:
        for l in ks:
            tag = f"k={R.format(k)},l={R.format(l)}"
            out.append((f"k-add[{tag}]", Ruleset.LCALG, f"copy ; {_sc(R, k)} * {_sc(R, l)} ; add",
                        _sc(R, R.add(k, l))))
            out.append((f"k-assoc[{tag}]", Ruleset.LCALG, f"{_sc(R, k)} ; {_sc(R, l)}",
                        _sc(R, R.mul(k, l))))
    out.append(("zero-in-k", Ruleset.LCALG, _sc(R, R.zero), "del ; zero"))
    out.append(("one-in-k", Ruleset.LCALG, _sc(R, R.one), "id"))
    return out


_SCALABLE_SAMPLES = ("x1*x2 + x1", "x1^2 + 2*x2 + 1")
_SCALABLE_OTHER = ("x1*x2 + x2^2", "x2 + 3")


def _scalable_rules(ring) -> list[tuple[str, Ruleset, Term, Term]]:
    f = parse_polynomials(_SCALABLE_SAMPLES, ring, 2)
    g = parse_polynomials(_SCALABLE_OTHER, ring, 2)
    n, m = 2, 2
    pf, pg = poly_box(f, n, ring), poly_box(g, n, ring)
    out = [
        ("poly-copy", Ruleset.SCALABLE, compose(pf, bus_copy(m)), compose(bus_copy(n), tensor(pf, pf))),
        ("poly-del", Ruleset.SCALABLE, compose(pf, bus_delete(m)), bus_delete(n)),
        ("poly-add", Ruleset.SCALABLE, compose(bus_copy(n), tensor(pf, pg), bus_binary(ADD, m)),
         poly_box([a + b for a, b in zip(f, g)], n, ring)),
        ("poly-mult", Ruleset.SCALABLE, compose(bus_copy(n), tensor(pf, pg), bus_binary(MULT, m)),
         poly_box([a * b for a, b in zip(f, g)], n, ring)),
        ("poly-comp", Ruleset.SCALABLE, compose(pf, pg),
         poly_box([substitute_into(h, f, n) for h in g], n, ring)),
    ]
    return out


def _parse_lang(ring) -> Language:
    if isinstance(ring, FieldSpec):
        return Language(LanguageTag.GAG_Q_FOURIER, ring)
    return Language(LanguageTag.GAG_K, ring)


def all_rules(ring) -> list[RewriteRule]:
    """Every rule instance over ``ring``, regardless of language layer."""
    L = _parse_lang(ring)
    texts: list[tuple[str, Ruleset, str, str]] = []
    texts += [(n, Ruleset.LCALG, a, b) for n, a, b in _LCALG_FIXED]
    texts += _scalar_rules(ring)
    texts += [(n, Ruleset.GCA, a, b) for n, a, b in _GCA_FIXED]
    texts.append(("red", Ruleset.RED, "poly[x1^2] ; zero'", "zero'"))
    if isinstance(ring, FieldSpec):
        texts.append((f"qred[q={ring.q}]", Ruleset.QRED, f"poly[x1^{ring.q}]", "id"))
        texts.append(("Z1-copy", Ruleset.ZH_EXT, "z1 ; add'", "z1 * z1"))
        texts.append(("Z1-del", Ruleset.ZH_EXT, "z1 ; zero'", "id0"))
    rules = [RewriteRule(n, rs, parse(a, L), parse(b, L)) for n, rs, a, b in texts]
    rules += [RewriteRule(n, rs, a, b) for n, rs, a, b in _scalable_rules(ring)]
    order = list(Ruleset)
    rules.sort(key=lambda r: order.index(r.ruleset))
    return rules


def admissible_rulesets(lang: Language) -> set[Ruleset]:
    sets = {Ruleset.LCALG, Ruleset.SCALABLE}
    if lang.tag >= LanguageTag.GCA:
        sets.add(Ruleset.GCA)
    if lang.tag >= LanguageTag.GAG_K:
        sets.add(Ruleset.RED)
    if lang.tag >= LanguageTag.GAG_Q:
        sets.add(Ruleset.QRED)
    if lang.tag == LanguageTag.GAG_Q_FOURIER:
        sets.add(Ruleset.ZH_EXT)
    return sets


def builtin_rules(lang: Language) -> list[RewriteRule]:
    allowed = admissible_rulesets(lang)
    return [r for r in all_rules(lang.ring) if r.ruleset in allowed]


def get_rule(lang: Language, name: str) -> RewriteRule:
    for r in builtin_rules(lang):
        if r.name == name:
            return r
    raise RewriteError(f"no rule named {name!r} in {lang}")


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True)
class Match:
    node_map: tuple[tuple[int, int], ...]
    wire_map: tuple[tuple[int, int], ...]
    direction: Direction
    host_fingerprint: int

    def nodes(self) -> dict[int, int]:
        return dict(self.node_map)

    def wires(self) -> dict[int, int]:
        return dict(self.wire_map)


def _components(P: OpenGraph) -> tuple[list[list[int]], list[int]]:
    seen: set[int] = set()
    comps = []
    for i in range(len(P.nodes)):
        if i in seen:
            continue
        comp = sorted(P._component(i))
        seen.update(comp)
        comps.append(comp)
    bare = [w for w in P.inputs if P.target(w)[0] == "out"]
    return comps, bare


def _grow(P: OpenGraph, H: OpenGraph, seed_p: int, seed_h: int):
    if P.nodes[seed_p].gen != H.nodes[seed_h].gen:
        return None
    nmap = {seed_p: seed_h}
    used_h = {seed_h}
    wmap: dict[int, int] = {}
    used_w: set[int] = set()
    stack = [seed_p]
    while stack:
        pn = stack.pop()
        hn = nmap[pn]
        pnode, hnode = P.nodes[pn], H.nodes[hn]
        for pw, hw in list(zip(pnode.ins, hnode.ins)) + list(zip(pnode.outs, hnode.outs)):
            if pw in wmap:
                if wmap[pw] != hw:
                    return None
                continue
            if hw in used_w:
                return None
            wmap[pw] = hw
            used_w.add(hw)
            for ep_p, ep_h in ((P.source(pw), H.source(hw)), (P.target(pw), H.target(hw))):
                if ep_p[0] != "node":
                    continue
                if ep_h[0] != "node" or ep_h[2] != ep_p[2]:
                    return None
                qn, qh = ep_p[1], ep_h[1]
                if qn in nmap:
                    if nmap[qn] != qh:
                        return None
                    continue
                if qh in used_h or P.nodes[qn].gen != H.nodes[qh].gen:
                    return None
                nmap[qn] = qh
                used_h.add(qh)
                stack.append(qn)
    return nmap, wmap


def _convex(P: OpenGraph, H: OpenGraph, nmap: dict, wmap: dict) -> bool:
    matched = set(nmap.values())
    in_images = {wmap[w] for w in P.inputs}
    stack = []
    for w in P.outputs:
        stack.append(wmap[w])
    seen: set[int] = set()
    first = True
    while stack:
        hw = stack.pop()
        if not first and hw in in_images:
            return False
        tgt = H.target(hw)
        if tgt[0] == "node":
            if tgt[1] in matched:
                if hw not in (wmap[w] for w in P.outputs):
                    return False
                continue
            for ow in H.nodes[tgt[1]].outs:
                if ow not in seen:
                    seen.add(ow)
                    if ow in in_images:
                        return False
                    stack.append(ow)
    return True


def find_matches(rule: RewriteRule, host: OpenGraph, direction: Direction = Direction.LtoR) -> list[Match]:
    """All convex, wire-injective embeddings of one side of ``rule`` into ``host``."""
    direction = Direction(direction)
    P, _ = rule.side(direction)
    return match_pattern(P, host, direction)


def match_pattern(P: OpenGraph, host: OpenGraph, direction: Direction = Direction.LtoR) -> list[Match]:
    comps, bare = _components(P)
    per_comp = []
    for comp in comps:
        seed = comp[0]
        found = []
        for h in range(len(host.nodes)):
            res = _grow(P, host, seed, h)
            if res is not None:
                found.append(res)
        per_comp.append(found)
    bare_choices = [list(range(host.n_wires))] * len(bare)
    rank = host.canonical_node_rank()
    fp = hash(host)
    out = []
    for combo in itertools.product(*per_comp):
        nmap: dict[int, int] = {}
        wmap: dict[int, int] = {}
        ok = True
        for cn, cw in combo:
            if set(cn.values()) & set(nmap.values()) or set(cw.values()) & set(wmap.values()):
                ok = False
                break
            nmap.update(cn)
            wmap.update(cw)
        if not ok:
            continue
        for wires in itertools.product(*bare_choices):
            if len(set(wires)) != len(wires) or set(wires) & set(wmap.values()):
                continue
            full_w = dict(wmap)
            full_w.update(zip(bare, wires))
            if not _convex(P, host, nmap, full_w):
                continue
            out.append(Match(tuple(sorted(nmap.items())), tuple(sorted(full_w.items())), direction, fp))
    out.sort(key=lambda m: (tuple(rank[h] for _, h in m.node_map), tuple(h for _, h in m.wire_map)))
    return out


def _validate(P: OpenGraph, host: OpenGraph, m: Match) -> None:
    nmap, wmap = m.nodes(), m.wires()
    if m.host_fingerprint != hash(host):
        raise StaleMatchError("match was computed for a different host graph")
    try:
        for pn, hn in nmap.items():
            pnode, hnode = P.nodes[pn], host.nodes[hn]
            if pnode.gen != hnode.gen:
                raise StaleMatchError(f"node {hn} no longer carries {pnode.gen}")
            for pw, hw in zip(pnode.ins + pnode.outs, hnode.ins + hnode.outs):
                if wmap.get(pw) != hw:
                    raise StaleMatchError("wire map disagrees with host ports")
    except IndexError as exc:
        raise StaleMatchError("match refers to nodes missing from the host") from exc
    if set(wmap) != set(range(P.n_wires)):
        raise StaleMatchError("match does not cover the pattern")


def apply(rule: RewriteRule, host: OpenGraph, m: Match, direction: Direction | None = None) -> OpenGraph:
    """Replace the matched occurrence of one side by the other side."""
    direction = Direction(direction or m.direction)
    if direction != m.direction:
        raise RewriteError("match was computed for the other direction")
    P, R = rule.side(direction)
    _validate(P, host, m)
    return replace(P, R, host, m)


def replace(P: OpenGraph, R: OpenGraph, host: OpenGraph, m: Match) -> OpenGraph:
    nmap, wmap = m.nodes(), m.wires()
    matched = set(nmap.values())
    used_wires = set(wmap.values())
    keep = [i for i in range(len(host.nodes)) if i not in matched]
    new_idx = {h: k for k, h in enumerate(keep)}
    base = len(keep)

    def host_ep(ep):
        if ep[0] == "node":
            return ("node", new_idx[ep[1]], ep[2])
        return ep

    S = [host_ep(host.source(wmap[w])) for w in P.inputs]
    T = [host_ep(host.target(wmap[w])) for w in P.outputs]
    conns = []
    for w in range(host.n_wires):
        if w not in used_wires:
            conns.append((host_ep(host.source(w)), host_ep(host.target(w))))
    for w in range(R.n_wires):
        s, t = R.source(w), R.target(w)
        s = S[s[1]] if s[0] == "in" else ("node", base + s[1], s[2])
        t = T[t[1]] if t[0] == "out" else ("node", base + t[1], t[2])
        conns.append((s, t))
    gens = [host.nodes[i].gen for i in keep] + [nd.gen for nd in R.nodes]
    ins = [[None] * g.n_in for g in gens]
    outs = [[None] * g.n_out for g in gens]
    inputs = [None] * host.n_in
    outputs = [None] * host.n_out
    for wid, (s, t) in enumerate(conns):
        if s[0] == "in":
            inputs[s[1]] = wid
        else:
            outs[s[1]][s[2]] = wid
        if t[0] == "out":
            outputs[t[1]] = wid
        else:
            ins[t[1]][t[2]] = wid
    nodes = tuple(Node(g, tuple(i), tuple(o)) for g, i, o in zip(gens, ins, outs))
    return OpenGraph(nodes, tuple(inputs), tuple(outputs), len(conns))


def rewrite_once(rule: RewriteRule, host: OpenGraph, direction: Direction = Direction.LtoR,
                 index: int = 0) -> OpenGraph | None:
    ms = find_matches(rule, host, direction)
    if index >= len(ms):
        return None
    return apply(rule, host, ms[index], direction)


# ---------------------------------------------------------------------------
# soundness


@dataclass(frozen=True)
class SoundnessFailure:
    rule: str
    q: int
    detail: str


def rule_is_sound(rule: RewriteRule, spec: FieldSpec) -> bool:
    from .semantics import matrix_semantics
    from .zh import fourier_dense

    if rule.ruleset == Ruleset.ZH_EXT:
        return fourier_dense(rule.lhs_term, spec) == fourier_dense(rule.rhs_term, spec)
    return matrix_semantics(rule.lhs_term, spec) == matrix_semantics(rule.rhs_term, spec)


def check_soundness(qs: Iterable[int] = (2, 3, 4, 5)) -> tuple[int, list[SoundnessFailure]]:
    """Check every rule of the Fourier layer over each GF(q); returns (checked, failures)."""
    from .field import GF

    checked = 0
    failures = []
    for q in qs:
        spec = GF(q)
        for rule in builtin_rules(Language(LanguageTag.GAG_Q_FOURIER, spec)):
            checked += 1
            if not rule_is_sound(rule, spec):
                failures.append(SoundnessFailure(rule.name, q, "semantics of the two sides differ"))
    return checked, failures
