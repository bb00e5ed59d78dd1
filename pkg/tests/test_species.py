import itertools
import json

import networkx as nx
import numpy as np
import pytest

from fusionfold.diagrams import coxeter_diagram
from fusionfold.errors import InconsistentSpecies, UnknownCatalogEntry
from fusionfold.fusion import parse_element, tensor_decompose, tlj
from fusionfold.species import (
    KO_TABLES,
    WeightedSpecies,
    catalog,
    catalog_names,
    load_species,
    resolve,
    unfold,
    validate_species,
)

from shapes import shape

ALL = catalog_names()


@pytest.mark.parametrize("name", ALL)
def test_catalog_validates(name):
    assert validate_species(catalog(name)) == []


@pytest.mark.parametrize("name", ALL)
def test_unfolded_shape(name):
    s = catalog(name)
    f = unfold(s)
    assert f.n == sum(len(cs) for cs in s.vertex_simples)
    assert f.simply_laced
    assert nx.is_isomorphic(f.omega.graph, shape(s.unfolded_type))


@pytest.mark.parametrize("name", ALL)
def test_module_law(name):
    # N_x N_y = sum_z N_xy^z N_z on Z^{Q0}
    f = unfold(catalog(name))
    r = f.ring
    mats = [f.kaction[lab] for lab in r.labels]
    for a, b in itertools.product(range(r.rank), repeat=2):
        rhs = sum(int(r.nconst[a, b, c]) * mats[c] for c in range(r.rank))
        assert np.array_equal(mats[a] @ mats[b], rhs)


def test_known_shapes():
    assert unfold(catalog("tlj:H3")).n == 12
    assert unfold(catalog("tlj:Bn(3)")).n == 9
    for h in range(3, 13):
        f = unfold(catalog(f"tlj:I2({h})"))
        assert [len(fib) for fib in f.fibers] == [h - 1, h - 1]
        assert nx.is_isomorphic(f.omega.graph, shape(f"A{h - 1}+A{h - 1}"))


def test_group_d4_g2():
    s = catalog("grp:D4→G2")
    assert s.simple_labels(0) == ["g0+g1+g2"]
    assert s.simple_labels(1) == ["g0", "g1", "g2"]
    f = unfold(s)
    centre = [v for v in f.omega.graph if f.omega.graph.degree(v) == 3]
    assert [f.fold_map[v] for v in centre] == [0]


@pytest.mark.parametrize("ade", ["E6", "E7", "E8"])
def test_ko_edges_follow_fusion_with_two(ade):
    """x and y are joined exactly when y occurs in x (x) [2], decomposed by brute force."""
    h, table = KO_TABLES[ade]
    ring = tlj(h)
    simples = [parse_element(ring, t) for t in table]
    two = parse_element(ring, "2")
    expected = set()
    vecs = np.array([s.coeffs for s in simples])
    for i, x in enumerate(simples):
        target = np.array(tensor_decompose(x, two).coeffs)
        sols = [c for c in itertools.product(range(3), repeat=len(simples)) if np.array_equal(np.array(c) @ vecs, target)]
        assert len(sols) == 1
        expected |= {(i, j) for j, c in enumerate(sols[0]) if c}
    f = unfold(catalog(f"ko:I2({h})-{ade}"))
    k = len(table)
    found = {(s, d - k) for s, d, m in f.arrows}
    assert all(m == 1 for _, _, m in f.arrows)
    assert found == expected
    assert nx.is_isomorphic(f.omega.graph, shape(f"{ade}+{ade}"))
    assert [len(fib) for fib in f.fibers] == [k, k]


def test_ko_contains_one_plus_seven():
    s = catalog("ko:I2(12)-E6")
    assert "1+7" in s.simple_labels(0)


def test_json_roundtrip(tmp_path):
    for name in ("tlj:H3", "grp:E6→F4", "ko:I2(12)-E6"):
        s = catalog(name)
        path = tmp_path / "s.json"
        path.write_text(json.dumps(s.to_json()))
        back = load_species(str(path))
        assert back.to_json() == s.to_json()
        assert resolve(str(path)).name == s.name


def test_minimal_json_form():
    s = WeightedSpecies.from_json(
        {"name": "toy", "diagram": {"type": "I2(5)"}, "ring": "tlj:5",
         "vertex_simples": [["1", "2", "3", "4"]] * 2, "edge_weights": ["2"]}
    )
    assert validate_species(s) == []
    assert unfold(s).n == 8


def _bad(simples, weight="2"):
    ring = tlj(5)
    d = coxeter_diagram("I2(5)")
    cs = tuple(parse_element(ring, t) for t in simples)
    return WeightedSpecies("bad", d, ring, (cs, cs), (parse_element(ring, weight),))


def test_violations():
    assert any("not linearly independent" in v for v in validate_species(_bad(["1", "2", "1+2"])))
    ring = tlj(5)
    neg = ring.element([1, -1, 0, 0])
    s = _bad(["1", "2"])
    s = WeightedSpecies("neg", s.diagram, ring, ((neg,), (neg,)), s.edge_weights)
    assert any("negative coefficient" in v for v in validate_species(s))
    # simples that do not absorb the edge weight
    assert validate_species(_bad(["1"])) != []
    with pytest.raises(InconsistentSpecies):
        unfold(_bad(["1"]))


def test_unknown_entry():
    with pytest.raises(UnknownCatalogEntry):
        catalog("grp:nope")
    assert catalog("grp:A5->C3").unfolded_type == catalog("grp:A2n-1→Cn(3)").unfolded_type
