"""Sequent proof terms and their elaboration into proof-nets.

One constructor per sequent rule.  Premises are addressed positionally,
1-based and left to right; the documented order conventions are:

  * ax F            proves F |- F (one premise)
  * cut P Q i       splices P's premises in place of Q's premise i
  * weak P F        appends a premise !F
  * contr P i j     contracts premises i < j, result sits at position i
  * rlolli P i      discharges premise i
  * llolli P Q k    premises: P's, then Q's minus k, then the new arrow
  * rtensor P Q     premises: P's then Q's
  * ltensor P i j   pairs premises i and j, result at min(i, j)
  * promote P       boxes P; doors in premise order
  * derelict P i / dig P i     in place at i
  * rforall P a     binder a must not occur free in the premises
  * lforall P i Q B premise i must read Q's body with B for its binder
  * mux P i j ...   SLL multiplexer over the listed premises (mux P F: arity 0)
  * spromote P i... LLL sec-box; listed premises get !-doors, the rest sec

Binders introduced by rforall are renamed to globally fresh atoms so the
forall rewrite step can substitute globally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import net as N
from .formulas import (
    Atom,
    Bang,
    Forall,
    Formula,
    Lolli,
    Sec,
    Tensor,
    feq,
    free_atoms,
    parse_formula,
    rename_free_atom,
    substitute,
)


class ParseError(ValueError):
    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at offset {pos})")
        self.pos = pos


class ElaborationError(ValueError):
    pass


# --- proof term AST -------------------------------------------------------


@dataclass(frozen=True)
class ProofTerm:
    pass


@dataclass(frozen=True)
class Ax(ProofTerm):
    formula: Formula


@dataclass(frozen=True)
class Cut(ProofTerm):
    left: ProofTerm
    right: ProofTerm
    premise: int


@dataclass(frozen=True)
class Weak(ProofTerm):
    sub: ProofTerm
    formula: Formula


@dataclass(frozen=True)
class Contr(ProofTerm):
    sub: ProofTerm
    i: int
    j: int


@dataclass(frozen=True)
class RLolli(ProofTerm):
    sub: ProofTerm
    i: int


@dataclass(frozen=True)
class LLolli(ProofTerm):
    left: ProofTerm
    right: ProofTerm
    hook: int


@dataclass(frozen=True)
class RTensor(ProofTerm):
    left: ProofTerm
    right: ProofTerm


@dataclass(frozen=True)
class LTensor(ProofTerm):
    sub: ProofTerm
    i: int
    j: int


@dataclass(frozen=True)
class Promote(ProofTerm):
    sub: ProofTerm


@dataclass(frozen=True)
class Derelict(ProofTerm):
    sub: ProofTerm
    i: int


@dataclass(frozen=True)
class Dig(ProofTerm):
    sub: ProofTerm
    i: int


@dataclass(frozen=True)
class RForall(ProofTerm):
    sub: ProofTerm
    binder: str


@dataclass(frozen=True)
class LForall(ProofTerm):
    sub: ProofTerm
    i: int
    quantified: Formula
    witness: Formula


@dataclass(frozen=True)
class Mux(ProofTerm):
    sub: ProofTerm
    indices: tuple[int, ...]
    formula: Formula | None = None  # arity-0 case


@dataclass(frozen=True)
class SPromote(ProofTerm):
    sub: ProofTerm
    bang_indices: tuple[int, ...]


# --- s-expression parser --------------------------------------------------

_SEXP_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad input {text[pos:20]!r}", pos)
            break
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    return toks


def _read(toks, i):
    if i >= len(toks):
        raise ParseError("unexpected end of input")
    tok, pos = toks[i]
    if tok == "(":
        items = []
        i += 1
        while True:
            if i >= len(toks):
                raise ParseError("missing )", pos)
            if toks[i][0] == ")":
                return (items, pos), i + 1
            node, i = _read(toks, i)
            items.append(node)
    if tok == ")":
        raise ParseError("unexpected )", pos)
    return (tok, pos), i + 1


def _render_formula(node) -> str:
    val = node[0]
    if isinstance(val, str):
        return val
    return "(" + " ".join(_render_formula(x) for x in val) + ")"


def _formula_at(node) -> Formula:
    try:
        return parse_formula(_render_formula(node))
    except ValueError as exc:
        raise ParseError(f"bad formula: {exc}", node[1]) from exc


def _int_at(node) -> int:
    val, pos = node
    if not isinstance(val, str) or not val.isdigit():
        raise ParseError(f"expected a premise index, found {val!r}", pos)
    return int(val)


def _name_at(node) -> str:
    val, pos = node
    if not isinstance(val, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", val):
        raise ParseError(f"expected a name, found {val!r}", pos)
    return val


_ARITIES = {
    "ax": (1, 1), "cut": (3, 3), "weak": (2, 2), "contr": (3, 3),
    "rlolli": (2, 2), "llolli": (3, 3), "rtensor": (2, 2), "ltensor": (3, 3),
    "promote": (1, 1), "derelict": (2, 2), "dig": (2, 2),
    "rforall": (2, 2), "lforall": (4, 4), "mux": (1, None), "spromote": (1, None),
}


def _term_at(node) -> ProofTerm:
    val, pos = node
    if isinstance(val, str):
        raise ParseError(f"expected a proof term, found {val!r}", pos)
    if not val or not isinstance(val[0][0], str):
        raise ParseError("expected a rule name", pos)
    head, hpos = val[0]
    args = val[1:]
    if head not in _ARITIES:
        raise ParseError(f"unknown rule name {head!r}", hpos)
    lo, hi = _ARITIES[head]
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise ParseError(f"rule {head} takes {lo} argument(s), got {len(args)}", hpos)
    if head == "ax":
        return Ax(_formula_at(args[0]))
    if head == "cut":
        return Cut(_term_at(args[0]), _term_at(args[1]), _int_at(args[2]))
    if head == "weak":
        return Weak(_term_at(args[0]), _formula_at(args[1]))
    if head == "contr":
        return Contr(_term_at(args[0]), _int_at(args[1]), _int_at(args[2]))
    if head == "rlolli":
        return RLolli(_term_at(args[0]), _int_at(args[1]))
    if head == "llolli":
        return LLolli(_term_at(args[0]), _term_at(args[1]), _int_at(args[2]))
    if head == "rtensor":
        return RTensor(_term_at(args[0]), _term_at(args[1]))
    if head == "ltensor":
        return LTensor(_term_at(args[0]), _int_at(args[1]), _int_at(args[2]))
    if head == "promote":
        return Promote(_term_at(args[0]))
    if head == "derelict":
        return Derelict(_term_at(args[0]), _int_at(args[1]))
    if head == "dig":
        return Dig(_term_at(args[0]), _int_at(args[1]))
    if head == "rforall":
        return RForall(_term_at(args[0]), _name_at(args[1]))
    if head == "lforall":
        return LForall(_term_at(args[0]), _int_at(args[1]),
                       _formula_at(args[2]), _formula_at(args[3]))
    if head == "mux":
        sub = _term_at(args[0])
        rest = args[1:]
        if len(rest) == 1 and isinstance(rest[0][0], str) and not rest[0][0].isdigit():
            return Mux(sub, (), _formula_at(rest[0]))
        return Mux(sub, tuple(_int_at(a) for a in rest))
    if head == "spromote":
        return SPromote(_term_at(args[0]), tuple(_int_at(a) for a in args[1:]))
    raise ParseError(f"unknown rule {head!r}", hpos)


def parse_proof_term(text: str) -> ProofTerm:
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty input")
    node, i = _read(toks, 0)
    if i != len(toks):
        raise ParseError("trailing input", toks[i][1])
    return _term_at(node)


# --- elaboration ----------------------------------------------------------


@dataclass
class _MEdge:
    src: tuple[str, str] | None
    tgt: tuple[str, str] | None
    formula: Formula


@dataclass
class Builder:
    vertices: dict[str, N.Vertex] = field(default_factory=dict)
    edges: dict[str, _MEdge] = field(default_factory=dict)
    boxes: dict[str, tuple[tuple[str, ...], set[str]]] = field(default_factory=dict)
    vn: int = 0
    en: int = 0
    fresh_n: int = 0

    def vtx(self, label: str, arity: int = 0) -> str:
        self.vn += 1
        vid = f"v{self.vn}"
        self.vertices[vid] = N.Vertex(vid, label, arity)
        return vid

    def edge(self, src, tgt, formula: Formula) -> str:
        self.en += 1
        eid = f"e{self.en}"
        self.edges[eid] = _MEdge(src, tgt, formula)
        return eid

    def fresh_atom(self, base: str) -> str:
        self.fresh_n += 1
        return f"{base}_{self.fresh_n}"

    def freeze(self, system: str) -> N.ProofNet:
        edges = {}
        for eid, e in self.edges.items():
            if e.src is None or e.tgt is None:
                raise ElaborationError(f"internal: dangling edge {eid}")
            edges[eid] = N.Edge(eid, e.src, e.tgt, e.formula)
        boxes = {pid: N.Box(pid, doors, frozenset(contents))
                 for pid, (doors, contents) in self.boxes.items()}
        return N.ProofNet(dict(self.vertices), edges, boxes, system)


@dataclass
class Judgement:
    premises: list[str]  # edge ids, dangling at src
    concl: str  # edge id, dangling at tgt
    own_vertices: set[str]
    own_edges: set[str]


def _prem(b: Builder, j: Judgement, i: int, rule: str) -> str:
    if not 1 <= i <= len(j.premises):
        raise ElaborationError(
            f"{rule}: premise index {i} out of range 1..{len(j.premises)}")
    return j.premises[i - 1]


def _elab(term: ProofTerm, b: Builder) -> Judgement:
    if isinstance(term, Ax):
        e = b.edge(None, None, term.formula)
        return Judgement([e], e, set(), {e})

    if isinstance(term, Cut):
        p = _elab(term.left, b)
        q = _elab(term.right, b)
        pe = _prem(b, q, term.premise, "cut")
        pf = b.edges[pe].formula
        cf = b.edges[p.concl].formula
        if not feq(cf, pf):
            raise ElaborationError(
                f"cut: conclusion {cf} does not match premise {term.premise} ({pf})")
        # merge p's conclusion edge with q's premise edge
        b.edges[p.concl].tgt = b.edges[pe].tgt
        del b.edges[pe]
        q.own_edges.discard(pe)
        concl = p.concl if q.concl == pe else q.concl
        idx = term.premise - 1
        premises = q.premises[:idx] + p.premises + q.premises[idx + 1:]
        return Judgement(premises, concl,
                         p.own_vertices | q.own_vertices,
                         p.own_edges | q.own_edges)

    if isinstance(term, Weak):
        p = _elab(term.sub, b)
        w = b.vtx(N.WEAK)
        e = b.edge(None, (w, "edge"), Bang(term.formula))
        return Judgement(p.premises + [e], p.concl,
                         p.own_vertices | {w}, p.own_edges | {e})

    if isinstance(term, Contr):
        p = _elab(term.sub, b)
        if term.i >= term.j:
            raise ElaborationError("contr: indices must satisfy i < j")
        ei = _prem(b, p, term.i, "contr")
        ej = _prem(b, p, term.j, "contr")
        fi, fj = b.edges[ei].formula, b.edges[ej].formula
        if not feq(fi, fj) or not isinstance(fi, Bang):
            raise ElaborationError(
                f"contr: premises {term.i} and {term.j} must be equal banged formulas")
        x = b.vtx(N.CONTR)
        b.edges[ei].src = (x, "left")
        b.edges[ej].src = (x, "right")
        e = b.edge(None, (x, "merged"), fi)
        premises = [pe for k, pe in enumerate(p.premises) if k != term.j - 1]
        premises[term.i - 1] = e
        return Judgement(premises, p.concl,
                         p.own_vertices | {x}, p.own_edges | {e})

    if isinstance(term, RLolli):
        p = _elab(term.sub, b)
        ei = _prem(b, p, term.i, "rlolli")
        v = b.vtx(N.RLOLLI)
        fi = b.edges[ei].formula
        cf = b.edges[p.concl].formula
        b.edges[ei].src = (v, "bound")
        b.edges[p.concl].tgt = (v, "body")
        e = b.edge((v, "concl"), None, Lolli(fi, cf))
        premises = [pe for k, pe in enumerate(p.premises) if k != term.i - 1]
        return Judgement(premises, e, p.own_vertices | {v}, p.own_edges | {e})

    if isinstance(term, LLolli):
        p = _elab(term.left, b)
        q = _elab(term.right, b)
        eh = _prem(b, q, term.hook, "llolli")
        w = b.vtx(N.LLOLLI)
        af = b.edges[p.concl].formula
        bf = b.edges[eh].formula
        b.edges[p.concl].tgt = (w, "arg")
        b.edges[eh].src = (w, "res")
        e = b.edge(None, (w, "fun"), Lolli(af, bf))
        premises = (p.premises
                    + [pe for k, pe in enumerate(q.premises) if k != term.hook - 1]
                    + [e])
        return Judgement(premises, q.concl,
                         p.own_vertices | q.own_vertices | {w},
                         p.own_edges | q.own_edges | {e})

    if isinstance(term, RTensor):
        p = _elab(term.left, b)
        q = _elab(term.right, b)
        v = b.vtx(N.RTENSOR)
        lf = b.edges[p.concl].formula
        rf = b.edges[q.concl].formula
        b.edges[p.concl].tgt = (v, "left")
        b.edges[q.concl].tgt = (v, "right")
        e = b.edge((v, "concl"), None, Tensor(lf, rf))
        return Judgement(p.premises + q.premises, e,
                         p.own_vertices | q.own_vertices | {v},
                         p.own_edges | q.own_edges | {e})

    if isinstance(term, LTensor):
        p = _elab(term.sub, b)
        if term.i == term.j:
            raise ElaborationError("ltensor: indices must differ")
        ei = _prem(b, p, term.i, "ltensor")
        ej = _prem(b, p, term.j, "ltensor")
        v = b.vtx(N.LTENSOR)
        fi, fj = b.edges[ei].formula, b.edges[ej].formula
        b.edges[ei].src = (v, "left")
        b.edges[ej].src = (v, "right")
        e = b.edge(None, (v, "pair"), Tensor(fi, fj))
        lo, hi = min(term.i, term.j), max(term.i, term.j)
        premises = [pe for k, pe in enumerate(p.premises) if k != hi - 1]
        premises[lo - 1] = e
        return Judgement(premises, p.concl,
                         p.own_vertices | {v}, p.own_edges | {e})

    if isinstance(term, (Promote, SPromote)):
        p = _elab(term.sub, b)
        sec = isinstance(term, SPromote)
        if sec:
            bad = [i for i in term.bang_indices if not 1 <= i <= len(p.premises)]
            if bad:
                raise ElaborationError(f"spromote: premise index {bad[0]} out of range")
        r = b.vtx(N.RSEC if sec else N.RBANG)
        cf = b.edges[p.concl].formula
        b.edges[p.concl].tgt = (r, "inner")
        wrap = Sec if sec else Bang
        e = b.edge((r, "principal"), None, wrap(cf))
        doors = []
        new_premises = []
        new_edges = {e}
        for k, pe in enumerate(p.premises):
            door = b.vtx(N.LSEC if sec else N.LBANG)
            doors.append(door)
            fk = b.edges[pe].formula
            b.edges[pe].src = (door, "inner")
            outer = Bang(fk) if (not sec or (k + 1) in term.bang_indices) else Sec(fk)
            oe = b.edge(None, (door, "outer"), outer)
            new_premises.append(oe)
            new_edges.add(oe)
        b.boxes[r] = (tuple(doors), set(p.own_vertices))
        return Judgement(new_premises, e,
                         p.own_vertices | {r, *doors}, p.own_edges | new_edges)

    if isinstance(term, Derelict):
        p = _elab(term.sub, b)
        ei = _prem(b, p, term.i, "derelict")
        d = b.vtx(N.DER)
        fi = b.edges[ei].formula
        b.edges[ei].src = (d, "plain")
        e = b.edge(None, (d, "bang"), Bang(fi))
        premises = list(p.premises)
        premises[term.i - 1] = e
        return Judgement(premises, p.concl,
                         p.own_vertices | {d}, p.own_edges | {e})

    if isinstance(term, Dig):
        p = _elab(term.sub, b)
        ei = _prem(b, p, term.i, "dig")
        fi = b.edges[ei].formula
        if not (isinstance(fi, Bang) and isinstance(fi.body, Bang)):
            raise ElaborationError(f"dig: premise {term.i} must be doubly banged, got {fi}")
        n = b.vtx(N.DIG)
        b.edges[ei].src = (n, "dbang")
        e = b.edge(None, (n, "bang"), fi.body)
        premises = list(p.premises)
        premises[term.i - 1] = e
        return Judgement(premises, p.concl,
                         p.own_vertices | {n}, p.own_edges | {e})

    if isinstance(term, RForall):
        p = _elab(term.sub, b)
        for k, pe in enumerate(p.premises):
            if term.binder in free_atoms(b.edges[pe].formula):
                raise ElaborationError(
                    f"rforall: binder {term.binder} occurs free in premise {k + 1}")
        fresh = b.fresh_atom(term.binder)
        for eid in p.own_edges:
            if eid in b.edges:
                b.edges[eid].formula = rename_free_atom(
                    b.edges[eid].formula, term.binder, fresh)
        v = b.vtx(N.RFORALL)
        cf = b.edges[p.concl].formula
        b.edges[p.concl].tgt = (v, "prem")
        e = b.edge((v, "concl"), None, Forall(fresh, cf))
        return Judgement(list(p.premises), e,
                         p.own_vertices | {v}, p.own_edges | {e})

    if isinstance(term, LForall):
        p = _elab(term.sub, b)
        ei = _prem(b, p, term.i, "lforall")
        q = term.quantified
        if not isinstance(q, Forall):
            raise ElaborationError(f"lforall: {q} is not a quantified formula")
        want = substitute(q.body, q.binder, term.witness)
        fi = b.edges[ei].formula
        if not feq(want, fi):
            raise ElaborationError(
                f"lforall: premise {term.i} is {fi}, expected {want}")
        v = b.vtx(N.LFORALL)
        b.edges[ei].src = (v, "inst")
        e = b.edge(None, (v, "fa"), q)
        premises = list(p.premises)
        premises[term.i - 1] = e
        return Judgement(premises, p.concl,
                         p.own_vertices | {v}, p.own_edges | {e})

    if isinstance(term, Mux):
        p = _elab(term.sub, b)
        if not term.indices:
            if term.formula is None:
                raise ElaborationError("mux: arity 0 needs an explicit formula")
            m = b.vtx(N.MUX, 0)
            e = b.edge(None, (m, "merged"), Bang(term.formula))
            return Judgement(p.premises + [e], p.concl,
                             p.own_vertices | {m}, p.own_edges | {e})
        if len(set(term.indices)) != len(term.indices):
            raise ElaborationError("mux: duplicate premise indices")
        es = [_prem(b, p, i, "mux") for i in term.indices]
        fs = [b.edges[x].formula for x in es]
        if any(not feq(f, fs[0]) for f in fs):
            raise ElaborationError("mux: contracted premises must share a formula")
        m = b.vtx(N.MUX, len(es))
        for rank, eid in enumerate(es, start=1):
            b.edges[eid].src = (m, f"split{rank}")
        e = b.edge(None, (m, "merged"), Bang(fs[0]))
        drop = {i - 1 for i in term.indices}
        lo = min(term.indices) - 1
        premises = []
        for k, pe in enumerate(p.premises):
            if k == lo:
                premises.append(e)
            elif k not in drop:
                premises.append(pe)
        return Judgement(premises, p.concl,
                         p.own_vertices | {m}, p.own_edges | {e})

    raise ElaborationError(f"unknown proof term {term!r}")


def elaborate(term: ProofTerm, system: str = "MELL") -> N.ProofNet:
    b = Builder()
    j = _elab(term, b)
    for pe in j.premises:
        pv = b.vtx(N.PREM)
        b.edges[pe].src = (pv, "edge")
    cv = b.vtx(N.CONCL)
    b.edges[j.concl].tgt = (cv, "edge")
    return b.freeze(system)


def sequent_of(term: ProofTerm) -> tuple[list[Formula], Formula]:
    """Premise formulas and conclusion formula, without building P/C wrappers."""
    b = Builder()
    j = _elab(term, b)
    return ([b.edges[pe].formula for pe in j.premises],
            b.edges[j.concl].formula)
