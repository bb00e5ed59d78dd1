"""Seeds with principal coefficients, exchange graphs, generalized associahedra.

Clusters are identified by their sets of g-vectors.  The F-stable exchange
graph is the closure of the initial seed under simultaneous mutation along
whole fibers; every such step first checks that the fiber is discrete
(no arrows between its vertices in the current seed).
"""
from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .coxeter import root_system
from .diagrams import Diagram, coxeter_diagram
from .errors import InvalidQuiver, OrbitNotDiscrete, RankTooLarge, SearchCapExceeded
from .graphs import IsoResult, find_isomorphism
from .species import Folding

DEFAULT_CAP = 200_000


# ------------------------------------------------------------ seeds

@dataclass(frozen=True, eq=False)
class Seed:
    b: np.ndarray  # exchange matrix, b[i, j] > 0 for arrows i -> j
    c: np.ndarray  # coefficient rows of the extended matrix (principal at start)
    g: np.ndarray  # column k is the g-vector of the k-th cluster variable
    b0: np.ndarray = field(repr=False)  # initial exchange matrix, needed for g-vectors

    @property
    def rank(self) -> int:
        return len(self.b)

    @cached_property
    def key(self) -> frozenset:
        return frozenset(tuple(int(x) for x in col) for col in self.g.T)

    @cached_property
    def digest(self) -> str:
        return cluster_digest(self.key)

    def same_as(self, other: "Seed") -> bool:
        return (
            np.array_equal(self.b, other.b)
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.g, other.g)
        )


def cluster_digest(key: frozenset) -> str:
    text = ";".join(",".join(str(x) for x in v) for v in sorted(key))
    return hashlib.sha1(text.encode()).hexdigest()[:16]


def seed_from_matrix(b: np.ndarray) -> Seed:
    b = np.asarray(b, dtype=np.int64)
    n = len(b)
    if not np.array_equal(b, -b.T):
        raise InvalidQuiver("exchange matrix is not skew-symmetric")
    eye = np.eye(n, dtype=np.int64)
    return Seed(b.copy(), eye.copy(), eye.copy(), b.copy())


def initial_seed(f: Folding) -> Seed:
    pairs = {(s, d) for s, d, _ in f.arrows}
    for s, d in pairs:
        if (d, s) in pairs:
            raise InvalidQuiver(
                f"2-cycle between {f.vertex_names[s]} and {f.vertex_names[d]}",
                {"vertices": [f.vertex_names[s], f.vertex_names[d]]},
            )
    dg = nx.DiGraph()
    dg.add_nodes_from(range(f.n))
    dg.add_edges_from(pairs)
    if not nx.is_directed_acyclic_graph(dg):
        raise InvalidQuiver("unfolded quiver has an oriented cycle")
    return seed_from_matrix(f.exchange_matrix)


def mutate(s: Seed, k: int) -> Seed:
    n = s.rank
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} outside 0..{n - 1}")
    ext = np.vstack([s.b, s.c])
    col = ext[:, k]
    row = s.b[k, :]
    new = ext + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    new[:, k] = -ext[:, k]
    new[k, :] = -ext[k, :]
    g = s.g.copy()
    pos_b = np.maximum(s.b[:, k], 0)
    pos_c = np.maximum(s.c[:, k], 0)
    g[:, k] = -s.g[:, k] + s.g @ pos_b - s.b0 @ pos_c
    return Seed(new[:n], new[n:], g, s.b0)


def orbit_mutate(s: Seed, orbit) -> Seed:
    """Mutate at every index of a discrete orbit (the order is irrelevant)."""
    orbit = list(orbit)
    for i, j in itertools.combinations(orbit, 2):
        if s.b[i, j] != 0:
            raise OrbitNotDiscrete(
                f"indices {i} and {j} of the orbit are joined by {abs(int(s.b[i, j]))} arrows",
                {"orbit": orbit, "pair": [i, j], "b": int(s.b[i, j]), "cluster": s.digest},
            )
    for k in orbit:
        s = mutate(s, k)
    return s


# ------------------------------------------------------------ exchange graphs

@dataclass(frozen=True, eq=False)
class ExchangeGraph:
    kind: str  # "unfolded", "fstable" or "delta"
    name: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]
    payload: tuple = field(default=(), repr=False)  # g-vector sets or root sets
    labels: tuple[str, ...] = ()  # mutation classes

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.size))
        g.add_edges_from((a, b) for a, b, _ in self.edges)
        return g

    def degrees(self) -> set[int]:
        return {d for _, d in self.graph.degree()}

    def is_regular(self, degree: int) -> bool:
        return self.degrees() == {degree}

    def to_json(self, full: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "name": self.name,
            "vertices": list(self.vertices),
            "edges": [[a, b, lab] for a, b, lab in self.edges],
            "vertex_count": self.size,
            "edge_count": len(self.edges),
        }
        if full:
            out["payload"] = [[list(v) for v in sorted(p)] for p in self.payload]
        return out

    def to_dot(self, header: str = "") -> str:
        lines = [f"// {header}"] if header else []
        lines.append(f'graph "{self.name}" {{')
        for k, v in enumerate(self.vertices):
            lines.append(f'  {k} [label="{v}"];')
        for a, b, lab in self.edges:
            lines.append(f'  {a} -- {b} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _finish(kind, name, keys, edge_set, labels, payload_of=None) -> ExchangeGraph:
    """Relabel vertices by sorted digest so output does not depend on search order."""
    digests = [cluster_digest(k) for k in keys]
    order = sorted(range(len(keys)), key=lambda i: (digests[i], sorted(keys[i])))
    new = {old: pos for pos, old in enumerate(order)}
    edges = sorted((min(new[a], new[b]), max(new[a], new[b]), lab) for a, b, lab in edge_set)
    payload = tuple(keys[i] for i in order)
    return ExchangeGraph(kind, name, tuple(digests[i] for i in order), tuple(edges), payload, tuple(labels))


def _restrict(seed: Seed, idx: list[int]) -> Seed:
    sub = seed.b[np.ix_(idx, idx)]
    return seed_from_matrix(sub)


def exchange_graph(
    f: Folding,
    mode: str = "fstable",
    cap: int = DEFAULT_CAP,
    component: int | None = None,
) -> ExchangeGraph:
    """Breadth-first closure of the initial seed.

    ``unfolded`` mutates at single vertices; ``fstable`` mutates whole
    fibers.  ``component`` restricts the unfolded search to one connected
    component of the quiver.
    """
    seed = initial_seed(f)
    if mode == "unfolded":
        if component is not None:
            comp = f.omega.components()[component]
            seed = _restrict(seed, comp)
            names = [f.vertex_names[q] for q in comp]
        else:
            names = list(f.vertex_names)
        classes = [[k] for k in range(seed.rank)]
        labels = names
    elif mode == "fstable":
        if component is not None:
            raise ValueError("component restriction only applies to the unfolded graph")
        classes = [list(fib) for fib in f.fibers]
        labels = list(f.delta.vertices)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    keys = [seed.key]
    index = {seed.key: 0}
    partition = {seed.key: _orbit_partition(seed, classes)}
    edges = set()
    queue = deque([(0, seed)])
    while queue:
        vid, s = queue.popleft()
        for cls, lab in zip(classes, labels):
            t = orbit_mutate(s, cls) if len(cls) > 1 else mutate(s, cls[0])
            key = t.key
            if key not in index:
                index[key] = len(keys)
                keys.append(key)
                partition[key] = _orbit_partition(t, classes)
                if len(keys) > cap:
                    raise SearchCapExceeded(
                        f"exchange graph exceeds {cap} clusters", {"cap": cap, "found": len(keys)}
                    )
                queue.append((index[key], t))
            elif mode == "fstable" and partition[key] != _orbit_partition(t, classes):
                raise OrbitNotDiscrete(
                    "a cluster was reached with two different orbit partitions", {"cluster": t.digest}
                )
            a, b = vid, index[key]
            edges.add((min(a, b), max(a, b), lab))
    return _finish(mode, f.species.name, keys, edges, labels)


def _orbit_partition(s: Seed, classes) -> frozenset:
    return frozenset(frozenset(tuple(int(x) for x in s.g[:, k]) for k in cls) for cls in classes)


def matrix_exchange_graph(b: np.ndarray, cap: int = DEFAULT_CAP, name: str = "quiver") -> ExchangeGraph:
    """Unfolded exchange graph for a bare exchange matrix."""
    seed = seed_from_matrix(b)
    keys = [seed.key]
    index = {seed.key: 0}
    edges = set()
    queue = deque([(0, seed)])
    while queue:
        vid, s = queue.popleft()
        for k in range(seed.rank):
            t = mutate(s, k)
            if t.key not in index:
                index[t.key] = len(keys)
                keys.append(t.key)
                if len(keys) > cap:
                    raise SearchCapExceeded(f"exchange graph exceeds {cap} clusters", {"cap": cap})
                queue.append((index[t.key], t))
            a, b2 = vid, index[t.key]
            edges.add((min(a, b2), max(a, b2), str(k)))
    return _finish("unfolded", name, keys, edges, [str(k) for k in range(seed.rank)])


def fstable_seeds(f: Folding, cap: int = DEFAULT_CAP) -> list[Seed]:
    """One seed per vertex of the F-stable exchange graph, in discovery order."""
    seed = initial_seed(f)
    classes = [list(fib) for fib in f.fibers]
    seen = {seed.key}
    out = [seed]
    queue = deque([seed])
    while queue:
        s = queue.popleft()
        for cls in classes:
            t = orbit_mutate(s, cls)
            if t.key not in seen:
                seen.add(t.key)
                out.append(t)
                queue.append(t)
                if len(out) > cap:
                    raise SearchCapExceeded(f"exchange graph exceeds {cap} clusters", {"cap": cap})
    return out


def check_orbit_order_independence(f: Folding, max_fiber: int = 4, cap: int = DEFAULT_CAP) -> dict:
    """At every F-stable seed, every ordering of each small fiber gives the same seed."""
    seeds = fstable_seeds(f, cap)
    checked = 0
    for s in seeds:
        for fib in f.fibers:
            if len(fib) > max_fiber:
                continue
            ref = orbit_mutate(s, fib)
            for perm in itertools.permutations(fib):
                other = s
                for k in perm:
                    other = mutate(other, k)
                if not other.same_as(ref):
                    raise OrbitNotDiscrete(
                        "orbit mutation depends on the order of its indices",
                        {"cluster": s.digest, "order": list(perm)},
                    )
                checked += 1
    return {"folding": f.species.name, "seeds": len(seeds), "orderings_checked": checked}


def polygon_lengths(eg_classes, seed: Seed, i, j, limit: int = 64) -> int:
    """Length of the cycle traced by alternately mutating along classes i and j.

    Clusters are unlabelled, so an odd-length polygon closes after an odd
    number of steps.
    """
    start = seed.key
    s = seed
    for step in range(1, limit + 1):
        cls = eg_classes[i] if step % 2 else eg_classes[j]
        s = orbit_mutate(s, cls)
        if s.key == start:
            return step
    raise SearchCapExceeded(f"alternating mutation did not close within {limit} steps")


def rank_two_cycles(f: Folding, cap: int = DEFAULT_CAP) -> dict:
    """Cycle lengths of alternating orbit mutations at the initial seed and everywhere."""
    classes = [list(fib) for fib in f.fibers]
    d = f.delta
    init = initial_seed(f)
    at_initial = {}
    for i, j in itertools.combinations(range(d.rank), 2):
        at_initial[f"{d.vertices[i]},{d.vertices[j]}"] = polygon_lengths(classes, init, i, j)
    seen_lengths = set()
    for s in fstable_seeds(f, cap):
        for i, j in itertools.combinations(range(d.rank), 2):
            seen_lengths.add(polygon_lengths(classes, s, i, j))
    return {"initial": at_initial, "all": sorted(seen_lengths)}


# ------------------------------------------------------------ Delta side

@dataclass(frozen=True, eq=False)
class CompatTable:
    diagram: Diagram
    roots: tuple[tuple, ...]  # almost positive roots as exact coordinate tuples
    degree: tuple[tuple, ...]  # degree[a][b] = (alpha_a || alpha_b) as FieldElement

    def compatible(self, a: int, b: int) -> bool:
        return self.degree[a][b].is_zero()


def almost_positive_roots(d: Diagram | str) -> CompatTable:
    """Compatibility degrees on the almost positive roots.

    tau_e fixes -a_i for i on the other side of the bipartition and acts as
    the product of the reflections on side e otherwise.  (alpha || beta) is
    evaluated by moving alpha to a negative simple -a_i with tau moves and
    reading the positive part of the a_i-coefficient of the moved beta.
    """
    d = coxeter_diagram(d) if isinstance(d, str) else d
    rs = root_system(d)
    n = d.rank
    zg = rs.zg
    plus, minus = d.bipartition()
    sides = {+1: plus, -1: minus}
    pos = [r for r in rs.positive_int]
    negs = []
    for i in range(n):
        v = np.zeros((n, zg.d), dtype=np.int64)
        v[i, 0] = -1
        negs.append(v)
    phi = negs + pos
    keys = {v.tobytes(): k for k, v in enumerate(phi)}

    def neg_simple(v) -> int | None:
        for i, u in enumerate(negs):
            if np.array_equal(u, v):
                return i
        return None

    def tau(eps: int, v: np.ndarray) -> np.ndarray:
        i = neg_simple(v)
        if i is not None and i in sides[-eps]:
            return v
        out = v
        for k in sides[eps]:
            out = rs.reflect(k, out)
        return out

    def word_to_negative_simple(v):
        best = None
        for first in (+1, -1):
            cur, eps, word = v, first, []
            for _ in range(2 * len(phi) + 4):
                i = neg_simple(cur)
                if i is not None:
                    if best is None or len(word) < len(best[1]):
                        best = (i, list(word))
                    break
                cur = tau(eps, cur)
                word.append(eps)
                eps = -eps
        if best is None:
            raise RankTooLarge("tau orbit does not reach a negative simple root")
        return best

    m = len(phi)
    table = []
    for a in range(m):
        i, word = word_to_negative_simple(phi[a])
        row = []
        for b in range(m):
            v = phi[b]
            for eps in word:
                v = tau(eps, v)
            coeff = zg.to_field(v[i])
            row.append(coeff if coeff.sign() > 0 else zg.spec.zero)
        table.append(tuple(row))
    roots = tuple(rs.to_field_vector(v) for v in phi)
    assert len(keys) == m
    return CompatTable(d, roots, tuple(table))


def fr_associahedron(d: Diagram | str, max_rank: int = 4) -> ExchangeGraph:
    """Maximal compatible subsets of almost positive roots, adjacent when they share all but one root."""
    d = coxeter_diagram(d) if isinstance(d, str) else d
    if d.rank > max_rank:
        raise RankTooLarge(f"associahedron construction supports rank <= {max_rank}, got {d.rank}")
    ct = almost_positive_roots(d)
    m = len(ct.roots)
    g = nx.Graph()
    g.add_nodes_from(range(m))
    for a in range(m):
        for b in range(a + 1, m):
            if ct.compatible(a, b) and ct.compatible(b, a):
                g.add_edge(a, b)
    clusters = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    if any(len(c) != d.rank for c in clusters):
        raise RankTooLarge("maximal compatible sets of unequal size; diagram is not of finite type")
    faces: dict[tuple, list[int]] = {}
    for k, c in enumerate(clusters):
        for drop in range(len(c)):
            faces.setdefault(c[:drop] + c[drop + 1 :], []).append(k)
    edges = set()
    for face, ks in faces.items():
        for a, b in itertools.combinations(ks, 2):
            edges.add((a, b, "flip"))
    coords = [tuple(tuple(str(x) for x in r) for r in (ct.roots[i] for i in c)) for c in clusters]
    keys = [frozenset(c) for c in coords]
    return _finish("delta", d.name, keys, edges, ["flip"])


def graph_isomorphic(g1: ExchangeGraph | nx.Graph, g2: ExchangeGraph | nx.Graph) -> IsoResult:
    a = g1.graph if isinstance(g1, ExchangeGraph) else g1
    b = g2.graph if isinstance(g2, ExchangeGraph) else g2
    res = find_isomorphism(a, b)
    if res.isomorphic and isinstance(g1, ExchangeGraph) and isinstance(g2, ExchangeGraph):
        named = {g1.vertices[u]: g2.vertices[v] for u, v in res.mapping.items()}
        return IsoResult(True, named, "")
    return res
