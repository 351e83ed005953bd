import pytest

from pnlab.families import FamilyError, gen_family
from pnlab.formulas import Atom, Lolli, parse_formula
from pnlab.net import validate
from pnlab.rewrite import canonical_key


def test_dr_ladder_sizes_and_conclusion():
    g1 = gen_family("dr-ladder", 1, Atom("a"))
    assert validate(g1) == []
    assert g1.size() == 2
    assert g1.edges[g1.conclusion_edge()].formula == Lolli(Atom("a"), Atom("a"))
    for n in (2, 5, 8):
        g = gen_family("dr-ladder", n)
        assert validate(g) == []
        assert g.size() == 2 * n


def test_dr_ladder_custom_base():
    g = gen_family("dr-ladder", 2, parse_formula("b * b"))
    assert validate(g) == []
    assert g.edges[g.conclusion_edge()].formula == parse_formula("(b * b) -o (b * b)")


def test_copy_example_shape(copy_net):
    assert validate(copy_net) == []
    assert copy_net.size() == 10
    assert len(copy_net.box_edges()) == 1
    labels = [v.label for v in copy_net.vertices.values()]
    assert labels.count("contr") == 1


def test_jump_example_shape(jump_net):
    assert validate(jump_net) == []
    assert len(jump_net.boxes) == 2
    kinds = sorted(c.kind for c in
                   __import__("pnlab.rewrite", fromlist=["find_cuts"]).find_cuts(jump_net))
    assert kinds == ["!", "X"]


def test_generation_is_deterministic():
    a = gen_family("copy-example")
    b = gen_family("copy-example")
    assert canonical_key(a) == canonical_key(b)


def test_unknown_family_and_bad_n():
    with pytest.raises(FamilyError):
        gen_family("no-such-family")
    with pytest.raises(FamilyError):
        gen_family("dr-ladder", 0)
