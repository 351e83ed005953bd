import pytest

from pnlab.families import gen_family
from pnlab.formulas import Atom, Bang, Forall, Lolli
from pnlab.net import DER, WEAK, validate
from pnlab.rewrite import (
    ARROW,
    DOUBLE,
    TRIANGLE,
    Cut as CutRecord,
    MetricsBudget,
    RewriteError,
    canonical_key,
    find_cuts,
    fire,
    normalize,
    reduction_metrics,
)
from pnlab.terms import (
    Ax,
    Contr,
    Cut,
    Derelict,
    Dig,
    LForall,
    LLolli,
    Promote,
    RForall,
    RLolli,
    Weak,
    elaborate,
)

A = Atom("a")


def test_axiom_has_no_cuts():
    assert find_cuts(elaborate(Ax(A))) == []


def test_ladder2_has_one_arrow_cut():
    g = gen_family("dr-ladder", 2)
    cuts = find_cuts(g)
    assert len(cuts) == 1
    assert cuts[0].kind == "-o" and cuts[0].level == 0


def test_box_against_weakening_is_w_cut():
    net = elaborate(Cut(Promote(Ax(A)), Weak(Ax(A), A), 2))
    cuts = find_cuts(net)
    assert [c.kind for c in cuts] == ["W"]
    assert cuts[0].level == 0


def test_fire_ladder2_yields_ladder1():
    g2 = gen_family("dr-ladder", 2)
    [cut] = find_cuts(g2)
    h, _ = fire(g2, cut)
    assert validate(h) == []
    assert canonical_key(h) == canonical_key(gen_family("dr-ladder", 1))


def test_fire_weak_erases_box_and_weakens_premises():
    net = elaborate(Cut(Promote(Derelict(Ax(A), 1)), Weak(Ax(A), A), 2))
    [cut] = [c for c in find_cuts(net) if c.kind == "W"]
    h, _ = fire(net, cut)
    assert validate(h) == []
    labels = [v.label for v in h.vertices.values()]
    assert labels.count(WEAK) == 1  # the box's one premise became a weakening
    assert not h.boxes
    # firing a W-cut can only introduce other W-cuts
    assert all(c.kind == "W" for c in find_cuts(h))


def test_fire_der_opens_box_and_doors_become_derelictions():
    net = elaborate(Cut(Promote(Derelict(Ax(A), 1)), Derelict(Ax(A), 1), 1))
    [cut] = [c for c in find_cuts(net) if c.kind == "D"]
    before_boxes = len(net.boxes)
    h, _ = fire(net, cut)
    assert validate(h) == []
    assert len(h.boxes) == before_boxes - 1
    labels = [v.label for v in h.vertices.values()]
    # the opened box's door turned into a dereliction; the content one stays
    assert labels.count(DER) == 2


def test_fire_contraction_duplicates_with_provenance(copy_net):
    [cut] = find_cuts(copy_net)
    assert cut.kind == "X"
    h, prov = fire(copy_net, cut)
    assert validate(h) == []
    assert len(h.boxes) == 2
    sides = {side for (_, side) in prov.values()}
    assert sides == {"l", "r"}
    originals = {orig for (orig, _) in prov.values()}
    assert all(o in copy_net.vertices or o in copy_net.edges for o in originals)


def test_fire_dig_wraps_box():
    net = elaborate(Cut(Promote(Ax(A)),
                        Dig(Derelict(Derelict(Ax(A), 1), 1), 1), 1))
    [cut] = [c for c in find_cuts(net) if c.kind == "N"]
    h, _ = fire(net, cut)
    assert validate(h) == []
    assert len(h.boxes) == 2
    assert h.net_depth() == 2


def test_fire_bang_merges_boxes(named_nets):
    net = named_nets["box-merge"]
    [cut] = [c for c in find_cuts(net) if c.kind == "!"]
    h, _ = fire(net, cut)
    assert validate(h) == []
    assert len(h.boxes) == 1
    [b] = h.boxes.values()
    assert len(b.doors) == 1


def test_fire_forall_substitutes():
    term = Cut(RForall(RLolli(Ax(Atom("b")), 1), "b"),
               LForall(LLolli(Ax(A), Ax(A), 1), 2, Forall("b", Lolli(Atom("b"), Atom("b"))), A), 2)
    net = elaborate(term)
    [cut] = [c for c in find_cuts(net) if c.kind == "forall"]
    h, _ = fire(net, cut)
    assert validate(h) == []
    assert all(not isinstance(e.formula, Forall) for e in h.edges.values())


def test_fire_missing_cut_rejected():
    g = gen_family("dr-ladder", 2)
    with pytest.raises(RewriteError):
        fire(g, CutRecord("e999", "-o", 0))


def test_normalize_examples(copy_net):
    g5 = gen_family("dr-ladder", 5)
    nf, trace = normalize(g5, ARROW)
    assert [s.kind for s in trace.steps] == ["-o"] * 4
    assert find_cuts(nf) == []

    nf, trace = normalize(elaborate(Ax(A)))
    assert trace.steps == []

    nf, trace = normalize(copy_net, TRIANGLE)
    assert trace.status == "normal"
    assert find_cuts(nf) == []
    assert nf.size() == 8


def test_normalize_budget():
    g5 = gen_family("dr-ladder", 5)
    _, trace = normalize(g5, ARROW, budget=2)
    assert trace.status == "budget"
    assert len(trace.steps) == 2


def test_strategy_inclusions(all_nets):
    # triangle-permitted cuts are double-permitted are arrow-permitted
    for name, net in all_nets.items():
        cuts = find_cuts(net)
        tri = {c.edge for c in TRIANGLE.permitted(cuts)}
        dbl = {c.edge for c in DOUBLE.permitted(cuts)}
        arr = {c.edge for c in ARROW.permitted(cuts)}
        assert tri <= dbl <= arr, name


def test_levels_never_decrease_and_bang_raises_levels(all_nets):
    for name, net in all_nets.items():
        for cut in find_cuts(net):
            before = {(c.edge, c.kind, c.level) for c in find_cuts(net)}
            h, _ = fire(net, cut)
            after = {(c.edge, c.kind, c.level) for c in find_cuts(h)}
            introduced = after - before
            assert all(lvl >= cut.level for (_, _, lvl) in introduced), (name, cut)
            if cut.kind == "!":
                assert all(lvl == cut.level + 1 for (_, _, lvl) in introduced), (name, cut)


def test_local_confluence_on_disjoint_cuts(all_nets):
    for name, net in all_nets.items():
        cuts = find_cuts(net)
        for i, c1 in enumerate(cuts):
            for c2 in cuts[i + 1:]:
                h1, _ = fire(net, c1)
                h2, _ = fire(net, c2)
                c2s = [c for c in find_cuts(h1) if c.edge == c2.edge and c.kind == c2.kind]
                c1s = [c for c in find_cuts(h2) if c.edge == c1.edge and c.kind == c1.kind]
                if len(c2s) == 1 and len(c1s) == 1:
                    a, _ = fire(h1, c2s[0])
                    b, _ = fire(h2, c1s[0])
                    assert canonical_key(a) == canonical_key(b), (name, c1, c2)


def test_metrics_examples(copy_net):
    assert reduction_metrics(elaborate(Ax(A))) == (0, 2)
    g3 = gen_family("dr-ladder", 3)
    assert reduction_metrics(g3, ARROW)[0] == 2
    assert reduction_metrics(g3, DOUBLE)[0] == 2
    sa, za = reduction_metrics(copy_net, ARROW)
    sd, zd = reduction_metrics(copy_net, DOUBLE)
    assert (sa, za) == (sd, zd)


def test_metrics_budget():
    g = gen_family("dr-ladder", 4)
    with pytest.raises(MetricsBudget):
        reduction_metrics(g, ARROW, step_budget=1)


def test_trace_render_format(copy_net):
    _, trace = normalize(copy_net, TRIANGLE)
    lines = trace.render().splitlines()
    assert lines[-1] == "status normal"
    first = lines[0].split()
    assert first[0] == "0" and first[1] in ("-o", "*", "forall", "!", "X", "D", "N", "W")


def test_canonical_key_invariant_under_renaming(copy_net):
    from pnlab.net import parse_net, print_net

    text = print_net(copy_net)
    renamed = text
    for old, new in [("v1", "w9"), ("e2", "f7")]:
        renamed = renamed.replace(f" {old} ", f" {new} ").replace(f"box {old}", f"box {new}")
    net2 = parse_net(renamed)
    assert canonical_key(net2) == canonical_key(copy_net)
