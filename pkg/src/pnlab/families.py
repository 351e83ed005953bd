"""Built-in example families.

dr-ladder n builds the left-associated chain of linear identities
I1 I2 ... In: each identity is one right-arrow vertex whose premise ports
are joined by an axiom edge, each application one left-arrow vertex.  The
net has 2n vertices, normalizes in n-1 arrow steps and has null weight,
yet its conclusion-to-conclusion token path has exponential length.

copy-example is the one-box net whose cut corresponds to the beta redex of
(\\x. y x x) z; its box is contracted and both copies derelicted.

jump-example chains a second box in front of the copy-example box, so the
outer box's copies are discovered only through the box-premise jump rule.
"""

from __future__ import annotations

from .formulas import Atom, Formula, Lolli
from .net import ProofNet
from .terms import (
    Ax,
    Contr,
    Cut,
    Derelict,
    LLolli,
    ProofTerm,
    Promote,
    RLolli,
    elaborate,
)

FAMILIES = ("dr-ladder", "copy-example", "jump-example")


class FamilyError(ValueError):
    pass


def dr_ladder_term(n: int, base: Formula) -> ProofTerm:
    if n < 1:
        raise FamilyError("dr-ladder needs n >= 1")
    # identity types telescope: T_n = base -o base, T_k = T_{k+1} -o T_{k+1}
    ts = {n: Lolli(base, base)}
    for k in range(n - 1, 0, -1):
        ts[k] = Lolli(ts[k + 1], ts[k + 1])

    def identity(k: int) -> ProofTerm:
        loop = ts[k + 1] if k < n else base
        return RLolli(Ax(loop), 1)

    term = identity(1)
    for k in range(2, n + 1):
        term = Cut(term, LLolli(identity(k), Ax(ts[k]), 1), 1)
    return term


def _body_yxx(a: Formula, b: Formula) -> ProofTerm:
    """y x x with y : a -o a -o b, both x uses derelicted; premise 1 is !a."""
    app1 = LLolli(Derelict(Ax(a), 1), Ax(Lolli(a, b)), 1)
    app2 = Cut(app1, LLolli(Derelict(Ax(a), 1), Ax(b), 1), 2)
    return Contr(app2, 1, 2)


def copy_example_term() -> ProofTerm:
    a, b = Atom("a"), Atom("b")
    return Cut(Promote(Ax(a)), _body_yxx(a, b), 1)


def jump_example_term() -> ProofTerm:
    a, b = Atom("a"), Atom("b")
    return Cut(Promote(Ax(a)), Cut(Promote(Ax(a)), _body_yxx(a, b), 1), 1)


def gen_family(name: str, n: int = 1, base: Formula | None = None) -> ProofNet:
    base = base or Atom("a")
    if name == "dr-ladder":
        return elaborate(dr_ladder_term(n, base))
    if name == "copy-example":
        return elaborate(copy_example_term())
    if name == "jump-example":
        return elaborate(jump_example_term())
    raise FamilyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
