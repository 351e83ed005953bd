"""Formula trees for intuitionistic MELL (atoms, -o, *, !, forall; sec in LLL mode).

Formulas are immutable; substitution is capture-avoiding with respect to
forall binders.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Lolli(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} -o {self.right})"


@dataclass(frozen=True)
class Tensor(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Bang(Formula):
    body: Formula

    def __str__(self):
        return f"!{self.body}"


@dataclass(frozen=True)
class Forall(Formula):
    binder: str
    body: Formula

    def __str__(self):
        return f"(all {self.binder}. {self.body})"


@dataclass(frozen=True)
class Sec(Formula):
    """The LLL paragraph modality."""

    body: Formula

    def __str__(self):
        return f"sec {self.body}"


def free_atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, (Lolli, Tensor)):
        return free_atoms(f.left) | free_atoms(f.right)
    if isinstance(f, (Bang, Sec)):
        return free_atoms(f.body)
    if isinstance(f, Forall):
        return free_atoms(f.body) - {f.binder}
    raise FormulaError(f"unknown formula {f!r}")


_FRESH = re.compile(r"^(.*?)(\d*)$")


def _fresh(name: str, avoid: frozenset[str]) -> str:
    base, num = _FRESH.match(name).groups()
    i = int(num) if num else 0
    while True:
        i += 1
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand


def substitute(f: Formula, atom: str, b: Formula) -> Formula:
    """Capture-avoiding substitution of b for free occurrences of atom in f."""
    if isinstance(f, Atom):
        return b if f.name == atom else f
    if isinstance(f, Lolli):
        return Lolli(substitute(f.left, atom, b), substitute(f.right, atom, b))
    if isinstance(f, Tensor):
        return Tensor(substitute(f.left, atom, b), substitute(f.right, atom, b))
    if isinstance(f, Bang):
        return Bang(substitute(f.body, atom, b))
    if isinstance(f, Sec):
        return Sec(substitute(f.body, atom, b))
    if isinstance(f, Forall):
        if f.binder == atom:
            return f
        if f.binder in free_atoms(b) and atom in free_atoms(f.body):
            fresh = _fresh(f.binder, free_atoms(b) | free_atoms(f.body) | {atom})
            renamed = substitute(f.body, f.binder, Atom(fresh))
            return Forall(fresh, substitute(renamed, atom, b))
        return Forall(f.binder, substitute(f.body, atom, b))
    raise FormulaError(f"unknown formula {f!r}")


def rename_free_atom(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of an atom; bound occurrences are untouched."""
    return substitute(f, old, Atom(new))


def alpha_canon(f: Formula, env=None, depth=0) -> tuple:
    """Canonical nameless form; equal iff the formulas are alpha-equivalent."""
    env = env or {}
    if isinstance(f, Atom):
        return ("atom", env.get(f.name, f.name))
    if isinstance(f, Lolli):
        return ("lolli", alpha_canon(f.left, env, depth), alpha_canon(f.right, env, depth))
    if isinstance(f, Tensor):
        return ("tensor", alpha_canon(f.left, env, depth), alpha_canon(f.right, env, depth))
    if isinstance(f, Bang):
        return ("bang", alpha_canon(f.body, env, depth))
    if isinstance(f, Sec):
        return ("sec", alpha_canon(f.body, env, depth))
    if isinstance(f, Forall):
        inner = dict(env)
        inner[f.binder] = depth
        return ("forall", alpha_canon(f.body, inner, depth + 1))
    raise FormulaError(f"unknown formula {f!r}")


def feq(f: Formula, g: Formula) -> bool:
    """Equality up to renaming of bound atoms."""
    return f == g or alpha_canon(f) == alpha_canon(g)


def match_instance(pattern: Formula, inst: Formula, atom: str):
    """Find B with pattern{B/atom} == inst, or None.

    Returns (True, B) on success; B is None when atom does not occur
    (any instantiation works).
    """
    found: list[Formula] = []

    def go(p: Formula, q: Formula) -> bool:
        if isinstance(p, Atom) and p.name == atom:
            found.append(q)
            return True
        if type(p) is not type(q):
            return False
        if isinstance(p, Atom):
            return p.name == q.name
        if isinstance(p, (Lolli, Tensor)):
            return go(p.left, q.left) and go(p.right, q.right)
        if isinstance(p, (Bang, Sec)):
            return go(p.body, q.body)
        if isinstance(p, Forall):
            if p.binder == atom:
                return p == q
            if p.binder != q.binder:
                return False
            return go(p.body, q.body)
        return False

    if not go(pattern, inst):
        return None
    if not found:
        return (True, None)
    first = found[0]
    if any(x != first for x in found[1:]):
        return None
    return (True, first)


# --- concrete syntax ------------------------------------------------------
#
#   formula := lolli
#   lolli   := tensor ('-o' lolli)?          (right associative)
#   tensor  := unary ('*' unary)*            (left associative)
#   unary   := '!' unary | 'sec' unary | 'all' NAME '.' formula
#            | NAME | '(' formula ')'

_TOKEN = re.compile(r"\s*(-o|\*|!|\(|\)|\.|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise FormulaError(f"bad formula syntax at {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def eat(self, tok=None):
        cur = self.peek()
        if cur is None or (tok is not None and cur != tok):
            raise FormulaError(f"expected {tok or 'token'}, found {cur!r}")
        self.i += 1
        return cur

    def formula(self) -> Formula:
        left = self.tensor()
        if self.peek() == "-o":
            self.eat()
            return Lolli(left, self.formula())
        return left

    def tensor(self) -> Formula:
        f = self.unary()
        while self.peek() == "*":
            self.eat()
            f = Tensor(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.eat()
            return Bang(self.unary())
        if tok == "sec":
            self.eat()
            return Sec(self.unary())
        if tok == "all":
            self.eat()
            name = self.eat()
            self.eat(".")
            return Forall(name, self.formula())
        if tok == "(":
            self.eat()
            f = self.formula()
            self.eat(")")
            return f
        if tok is not None and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            self.eat()
            return Atom(tok)
        raise FormulaError(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.formula()
    if p.peek() is not None:
        raise FormulaError(f"trailing input {p.toks[p.i:]!r}")
    return f


def format_formula(f: Formula) -> str:
    """Parenthesis-light printer; parse_formula(format_formula(f)) == f."""
    return _fmt(f, 0)


def _fmt(f: Formula, prec: int) -> str:
    # precedence: 0 lolli (right assoc), 1 tensor, 2 unary
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bang):
        return "!" + _fmt(f.body, 2)
    if isinstance(f, Sec):
        return "sec " + _fmt(f.body, 2)
    if isinstance(f, Forall):
        s = f"all {f.binder}. {_fmt(f.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Lolli):
        s = f"{_fmt(f.left, 1)} -o {_fmt(f.right, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Tensor):
        s = f"{_fmt(f.left, 1)} * {_fmt(f.right, 2)}"
        return f"({s})" if prec > 1 else s
    raise FormulaError(f"unknown formula {f!r}")
