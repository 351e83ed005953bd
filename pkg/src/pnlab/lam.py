"""Simply-typed lambda terms and the call-by-name embedding into proof-nets.

Types translate as (A -> B)* = !A* -o B*.  The translation is uniform:
every variable occurrence derelicts its premise, every application argument
is boxed (with a digging on each premise the box captures), multiple uses
of a variable are contracted into one premise at its binder, unused binders
weaken.  Binders carry type annotations; free variables take their types
from an explicit signature, since type inference is out of scope.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formulas import Atom, Bang, Formula, Lolli
from .net import ProofNet
from .terms import (
    Ax,
    Contr,
    Cut,
    Derelict,
    Dig,
    LLolli,
    ProofTerm,
    Promote,
    RLolli,
    Weak,
    elaborate,
)


class LambdaError(ValueError):
    pass


# --- simple types -----------------------------------------------------------


@dataclass(frozen=True)
class SType:
    pass


@dataclass(frozen=True)
class TAtom(SType):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TArrow(SType):
    left: SType
    right: SType

    def __str__(self):
        l = f"({self.left})" if isinstance(self.left, TArrow) else str(self.left)
        return f"{l} -> {self.right}"


def parse_type(text: str) -> SType:
    toks = re.findall(r"->|\(|\)|[A-Za-z_][A-Za-z0-9_]*", text)
    if "".join(toks).replace("->", "").replace("(", "").replace(")", "") != \
            re.sub(r"[\s()>-]|->", "", text).replace(">", ""):
        pass  # tokenizer covers the grammar; junk shows up as parse failure below
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def eat(t=None):
        cur = peek()
        if cur is None or (t is not None and cur != t):
            raise LambdaError(f"bad type {text!r}: expected {t or 'token'}, got {cur!r}")
        pos[0] += 1
        return cur

    def ty() -> SType:
        left = atom()
        if peek() == "->":
            eat()
            return TArrow(left, ty())
        return left

    def atom() -> SType:
        if peek() == "(":
            eat()
            t = ty()
            eat(")")
            return t
        name = eat()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise LambdaError(f"bad type token {name!r}")
        return TAtom(name)

    t = ty()
    if peek() is not None:
        raise LambdaError(f"trailing type input in {text!r}")
    return t


def type_formula(t: SType) -> Formula:
    if isinstance(t, TAtom):
        return Atom(t.name)
    return Lolli(Bang(type_formula(t.left)), type_formula(t.right))


# --- lambda terms -----------------------------------------------------------


@dataclass(frozen=True)
class LTerm:
    pass


@dataclass(frozen=True)
class Var(LTerm):
    name: str


@dataclass(frozen=True)
class Lam(LTerm):
    var: str
    ty: SType
    body: LTerm


@dataclass(frozen=True)
class App(LTerm):
    fun: LTerm
    arg: LTerm


_LAM_TOKEN = re.compile(r"\s*(\\|λ|\.|:|\(|\)|->|[A-Za-z_][A-Za-z0-9_]*)")


def parse_lambda(text: str) -> LTerm:
    toks = []
    p = 0
    while p < len(text):
        m = _LAM_TOKEN.match(text, p)
        if not m:
            if text[p:].strip():
                raise LambdaError(f"bad lambda syntax at {text[p:]!r}")
            break
        toks.append(m.group(1))
        p = m.end()
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def eat(t=None):
        cur = peek()
        if cur is None or (t is not None and cur != t):
            raise LambdaError(f"expected {t or 'a token'}, found {cur!r}")
        pos[0] += 1
        return cur

    def term() -> LTerm:
        if peek() in ("\\", "λ"):
            eat()
            name = eat()
            eat(":")
            tytoks = []
            depth = 0
            while peek() is not None and not (peek() == "." and depth == 0):
                tok = eat()
                depth += tok == "("
                depth -= tok == ")"
                tytoks.append(tok)
            eat(".")
            return Lam(name, parse_type(" ".join(tytoks)), term())
        return app()

    def app() -> LTerm:
        t = atom()
        while peek() is not None and peek() not in (")", "."):
            t = App(t, atom())
        return t

    def atom() -> LTerm:
        if peek() == "(":
            eat()
            t = term()
            eat(")")
            return t
        name = eat()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise LambdaError(f"unexpected token {name!r}")
        return Var(name)

    t = term()
    if peek() is not None:
        raise LambdaError(f"trailing input {toks[pos[0]:]!r}")
    return t


def typecheck(term: LTerm, sig: dict[str, SType]) -> SType:
    if isinstance(term, Var):
        if term.name not in sig:
            raise LambdaError(f"variable {term.name} has no declared type")
        return sig[term.name]
    if isinstance(term, Lam):
        inner = dict(sig)
        inner[term.var] = term.ty
        return TArrow(term.ty, typecheck(term.body, inner))
    if isinstance(term, App):
        ft = typecheck(term.fun, sig)
        at = typecheck(term.arg, sig)
        if not isinstance(ft, TArrow):
            raise LambdaError(f"applying a non-function of type {ft}")
        if ft.left != at:
            raise LambdaError(f"argument type {at} does not match {ft.left}")
        return ft.right
    raise LambdaError(f"unknown term {term!r}")


# --- translation ------------------------------------------------------------


def _translate(term: LTerm, sig: dict[str, SType]) -> tuple[ProofTerm, list[str]]:
    """Returns a proof term plus, per premise position, the owning variable."""
    if isinstance(term, Var):
        a = type_formula(sig[term.name])
        return Derelict(Ax(a), 1), [term.name]
    if isinstance(term, Lam):
        inner = dict(sig)
        inner[term.var] = term.ty
        sub, owners = _translate(term.body, inner)
        positions = [i + 1 for i, v in enumerate(owners) if v == term.var]
        if not positions:
            sub = Weak(sub, type_formula(term.ty))
            owners = owners + [term.var]
            positions = [len(owners)]
        while len(positions) > 1:
            i, j = positions[0], positions[1]
            sub = Contr(sub, i, j)
            owners = [v for k, v in enumerate(owners) if k != j - 1]
            positions = [i] + [p - 1 if p > j else p for p in positions[2:]]
        at = positions[0]
        owners = [v for k, v in enumerate(owners) if k != at - 1]
        return RLolli(sub, at), owners
    if isinstance(term, App):
        ft, fowners = _translate(term.fun, sig)
        ut, uowners = _translate(term.arg, sig)
        fty = typecheck(term.fun, sig)
        boxed = Promote(ut)
        for i in range(1, len(uowners) + 1):
            boxed = Dig(boxed, i)
        applied = LLolli(boxed, Ax(type_formula(fty.right)), 1)
        hook = len(uowners) + 1
        out = Cut(ft, applied, hook)
        return out, uowners + fowners
    raise LambdaError(f"unknown term {term!r}")


def from_lambda(term: LTerm, sig: dict[str, SType] | None = None) -> ProofNet:
    sig = sig or {}
    typecheck(term, sig)
    pt, owners = _translate(term, sig)
    # contract repeated free variables so each ends up as one premise
    firsts: dict[str, int] = {}
    pos = 0
    while pos < len(owners):
        name = owners[pos]
        if name in firsts:
            i, j = firsts[name] + 1, pos + 1
            pt = Contr(pt, i, j)
            del owners[pos]
            continue
        firsts[name] = pos
        pos += 1
    return elaborate(pt)
