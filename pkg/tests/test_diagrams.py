import math

import networkx as nx
import pytest

from fusionfold.diagrams import classify, cluster_count_formula, coxeter_diagram, exponents, weyl_order_formula

from shapes import shape

TYPES = ["A1", "A3", "A5", "B3", "C3", "D4", "D6", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(5)", "I2(12)"]


@pytest.mark.parametrize("t", TYPES)
def test_classify_roundtrip(t):
    expect = {"C3": "B3"}.get(t, t)
    assert classify(coxeter_diagram(t)) == expect


@pytest.mark.parametrize("t", ["A5", "D4", "D6", "E6", "E7", "E8"])
def test_simply_laced_shapes(t):
    d = coxeter_diagram(t)
    assert d.simply_laced
    assert nx.is_isomorphic(d.graph, shape(t))


def test_union_and_bipartition():
    d = coxeter_diagram("A5+D4")
    assert d.rank == 9 and len(d.components()) == 2
    plus, minus = d.bipartition()
    assert sorted(plus + minus) == list(range(9))
    for a, b, _ in d.edges:
        assert (a in plus) != (b in plus)
    assert classify(d) == "A5+D4"


@pytest.mark.parametrize("t", TYPES)
def test_formulas_agree_with_exponents(t):
    exps, h = exponents(t)
    assert weyl_order_formula(t) == math.prod(e + 1 for e in exps)
    assert cluster_count_formula(t) * math.prod(e + 1 for e in exps) == math.prod(e + h + 1 for e in exps)
    # sum of exponents = number of positive roots = rank * h / 2
    assert 2 * sum(exps) == len(exps) * h


def test_edge_labels():
    assert coxeter_diagram("H3").weights() == {5, 3}
    assert coxeter_diagram("I2(7)").m(0, 1) == 7
    assert coxeter_diagram("F4").weights() == {3, 4}
    assert coxeter_diagram("G2").m(0, 1) == 6
