"""Graphviz export: boxes render as nested clusters, cut edges in red."""

from __future__ import annotations

from . import net as N
from .formulas import format_formula
from .rewrite import classify_edge

_SHOW = {
    N.RLOLLI: "R-o", N.LLOLLI: "L-o", N.RTENSOR: "R*", N.LTENSOR: "L*",
    N.RFORALL: "Rall", N.LFORALL: "Lall", N.RBANG: "R!", N.LBANG: "L!",
    N.RSEC: "Rsec", N.LSEC: "Lsec", N.WEAK: "W", N.CONTR: "X",
    N.DER: "D", N.DIG: "N", N.PREM: "P", N.CONCL: "C", N.MUX: "M",
}


def export_dot(net: N.ProofNet) -> str:
    lines = ["digraph proofnet {", "  rankdir=BT;", "  node [shape=circle];"]

    children: dict[str | None, list[str]] = {}
    parent_of_box: dict[str, str | None] = {}
    for pid in net.boxes:
        parent = net.theta(pid)
        parent_of_box[pid] = parent
        children.setdefault(parent, []).append(pid)

    placed: set[str] = set()

    def vertex_line(vid: str, indent: str) -> str:
        v = net.vertices[vid]
        label = _SHOW.get(v.label, v.label)
        if v.label == N.MUX:
            label = f"M{v.arity}"
        return f'{indent}{vid} [label="{label}"];'

    def emit_box(pid: str, indent: str):
        b = net.boxes[pid]
        lines.append(f"{indent}subgraph cluster_{pid} {{")
        lines.append(f'{indent}  label="box {pid}"; style=rounded;')
        for vid in sorted([pid, *b.doors], key=N._numkey):
            lines.append(vertex_line(vid, indent + "  "))
            placed.add(vid)
        direct = set(b.contents)
        for q in children.get(pid, []):
            inner = net.boxes[q]
            direct -= inner.contents | {q, *inner.doors}
        for vid in sorted(direct, key=N._numkey):
            lines.append(vertex_line(vid, indent + "  "))
            placed.add(vid)
        for q in sorted(children.get(pid, []), key=N._numkey):
            emit_box(q, indent + "  ")
        lines.append(f"{indent}}}")

    for pid in sorted(children.get(None, []), key=N._numkey):
        emit_box(pid, "  ")
    for v in net.vertices_sorted():
        if v.id not in placed:
            lines.append(vertex_line(v.id, "  "))

    for e in net.edges_sorted():
        attrs = [f'label="{format_formula(e.formula)}"']
        if classify_edge(net, e.id):
            attrs.append("color=red")
        lines.append(
            f"  {e.src[0]} -> {e.tgt[0]} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
