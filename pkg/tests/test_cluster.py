import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fusionfold.cluster import (
    almost_positive_roots,
    check_orbit_order_independence,
    exchange_graph,
    fr_associahedron,
    graph_isomorphic,
    initial_seed,
    matrix_exchange_graph,
    mutate,
    orbit_mutate,
    rank_two_cycles,
    seed_from_matrix,
)
from fusionfold.diagrams import cluster_count_formula, coxeter_diagram, exponents
from fusionfold.errors import InvalidQuiver, OrbitNotDiscrete, SearchCapExceeded
from fusionfold.graphs import find_isomorphism
from fusionfold.species import catalog, catalog_names, unfold

from shapes import shape


def a_n(n):
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        b[i, i + 1], b[i + 1, i] = 1, -1
    return b


@st.composite
def acyclic_quivers(draw):
    """Random orientation of a random tree; always of finite mutation type when the tree is ADE."""
    n = draw(st.integers(2, 5))
    b = np.zeros((n, n), dtype=np.int64)
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        sgn = draw(st.sampled_from([1, -1]))
        b[u, v], b[v, u] = sgn, -sgn
    return b


@given(acyclic_quivers(), st.lists(st.integers(0, 4), max_size=12))
def test_mutation_invariants(b, walk):
    s = seed_from_matrix(b)
    n = len(b)
    for k in walk:
        k %= n
        t = mutate(s, k)
        assert mutate(t, k).same_as(s)
        assert np.array_equal(t.b, -t.b.T)
        # c-vectors are sign-coherent and g-vectors form a Z-basis
        for col in t.c.T:
            assert (col >= 0).all() or (col <= 0).all()
        assert round(abs(np.linalg.det(t.g.astype(float)))) == 1
        s = t


@given(st.integers(2, 6), st.data())
def test_type_a_count_independent_of_orientation(n, data):
    b = a_n(n)
    for i in range(n - 1):
        if data.draw(st.booleans()):
            b[i, i + 1], b[i + 1, i] = -b[i, i + 1], -b[i + 1, i]
    g = matrix_exchange_graph(b)
    assert g.size == cluster_count_formula(f"A{n}")
    assert g.is_regular(n)


def test_a2_pentagon_and_sink():
    g = matrix_exchange_graph(a_n(2))
    assert g.size == 5 and nx.is_isomorphic(g.graph, nx.cycle_graph(5))
    s = seed_from_matrix(a_n(2))
    t = mutate(s, 1)  # vertex 1 is a sink
    changed = [k for k in range(2) if not np.array_equal(s.g[:, k], t.g[:, k])]
    assert changed == [1]


def test_distinct_g_vectors_are_almost_positive_roots():
    for t in ("A3", "D4"):
        d = coxeter_diagram(t)
        b = np.zeros((d.rank, d.rank), dtype=np.int64)
        for a, c, _ in d.edges:
            b[a, c], b[c, a] = 1, -1
        g = matrix_exchange_graph(b)
        exps, h = exponents(t)
        variables = set().union(*g.payload)
        assert len(variables) == d.rank + d.rank * h // 2


def test_invalid_quivers():
    with pytest.raises(InvalidQuiver):
        seed_from_matrix(np.array([[0, 1], [1, 0]]))


def test_initial_seed_blocks():
    f = unfold(catalog("tlj:H3"))
    s = initial_seed(f)
    assert s.b.shape == (12, 12)
    g = nx.from_numpy_array(np.abs(s.b))
    assert nx.is_isomorphic(g, shape("D6+D6"))
    s5 = initial_seed(unfold(catalog("tlj:I2(5)")))
    assert nx.is_isomorphic(nx.from_numpy_array(np.abs(s5.b)), shape("A4+A4"))


def test_orbit_mutation_involution_and_discreteness():
    f = unfold(catalog("tlj:H3"))
    s = initial_seed(f)
    for fib in f.fibers:
        t = orbit_mutate(s, fib)
        assert orbit_mutate(t, fib).key == s.key
    with pytest.raises(OrbitNotDiscrete):
        orbit_mutate(s, [0, 1] if s.b[0, 1] else [int(k) for k in np.flatnonzero(s.b[0])[:1]] + [0])


@pytest.mark.parametrize("t,n", [("A2", 5), ("A3", 14), ("B3", 20), ("G2", 8), ("H3", 32), ("I2(7)", 9)])
def test_fr_counts(t, n):
    g = fr_associahedron(t)
    assert g.size == n == cluster_count_formula(t)
    assert g.is_regular(coxeter_diagram(t).rank)


def test_compatibility_symmetric_for_simply_laced():
    table = almost_positive_roots("A3")
    m = len(table.roots)
    for a in range(m):
        assert table.degree[a][a].is_zero()
        for b in range(m):
            assert table.degree[a][b] == table.degree[b][a]


@pytest.mark.parametrize("name", catalog_names())
def test_fstable_matches_associahedron(name):
    f = unfold(catalog(name))
    g1 = exchange_graph(f, "fstable")
    g2 = fr_associahedron(f.species.delta_type)
    res = graph_isomorphic(g1, g2)
    assert res.isomorphic
    assert nx.is_isomorphic(g1.graph, g2.graph)
    pos = {v: k for k, v in enumerate(g2.vertices)}
    for a, b, _ in g1.edges:
        assert g2.graph.has_edge(pos[res.mapping[g1.vertices[a]]], pos[res.mapping[g1.vertices[b]]])


@pytest.mark.parametrize("m", range(3, 13))
def test_fstable_i2_is_a_cycle(m):
    g = exchange_graph(unfold(catalog(f"tlj:I2({m})")), "fstable")
    assert nx.is_isomorphic(g.graph, nx.cycle_graph(m + 2))


def test_h3_rank_two_cycles():
    # alternating orbit mutations trace (m+2)-gons
    rep = rank_two_cycles(unfold(catalog("tlj:H3")))
    assert rep["initial"] == {"1,2": 7, "1,3": 4, "2,3": 5}
    assert set(rep["all"]) <= {4, 5, 7}


def test_unfolded_counts():
    assert exchange_graph(unfold(catalog("tlj:H3")), "unfolded", component=0).size == 672
    assert exchange_graph(unfold(catalog("grp:D4→G2")), "unfolded").size == 50
    assert exchange_graph(unfold(catalog("grp:A2n-1→Cn(3)")), "unfolded").size == 132
    assert cluster_count_formula("D6") == 672


def test_cap():
    with pytest.raises(SearchCapExceeded):
        exchange_graph(unfold(catalog("tlj:H3")), "unfolded", cap=50)


@pytest.mark.parametrize("name", catalog_names())
def test_order_independence(name):
    f = unfold(catalog(name))
    rep = check_orbit_order_independence(f)
    assert rep["seeds"] == exchange_graph(f, "fstable").size


def test_deterministic_output():
    f = unfold(catalog("tlj:H3"))
    a = exchange_graph(f, "fstable").to_dot("x")
    b = exchange_graph(f, "fstable").to_dot("x")
    assert a == b


def test_isomorphism_engine_negative():
    assert find_isomorphism(nx.cycle_graph(6), nx.cycle_graph(6)).isomorphic
    two_triangles = nx.disjoint_union(nx.cycle_graph(3), nx.cycle_graph(3))
    res = find_isomorphism(nx.cycle_graph(6), two_triangles)
    assert not res.isomorphic


@given(st.integers(4, 12), st.floats(0.2, 0.6), st.integers(0, 10_000))
def test_isomorphism_engine_against_networkx(n, p, seed):
    g = nx.gnp_random_graph(n, p, seed=seed)
    perm = np.random.default_rng(seed).permutation(n)
    h = nx.relabel_nodes(g, {i: int(perm[i]) for i in range(n)})
    res = find_isomorphism(g, h)
    assert res.isomorphic
    assert all(h.has_edge(res.mapping[a], res.mapping[b]) for a, b in g.edges())
    other = nx.gnp_random_graph(n, p, seed=seed + 1)
    assert find_isomorphism(g, other).isomorphic == nx.is_isomorphic(g, other)
