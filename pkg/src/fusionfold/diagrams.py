"""Finite Coxeter diagrams with orientation and edge weights."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .errors import NotFiniteType


@dataclass(frozen=True)
class Diagram:
    """Oriented Coxeter diagram; an absent edge means m = 2.

    ``edges`` holds ``(src, dst, m)`` with vertex indices, oriented src -> dst.
    """

    name: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def m(self, i: int, j: int) -> int:
        if i == j:
            return 1
        return self._weights.get((min(i, j), max(i, j)), 2)

    @cached_property
    def _weights(self) -> dict[tuple[int, int], int]:
        return {(min(a, b), max(a, b)): w for a, b, w in self.edges}

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.rank))
        for a, b, w in self.edges:
            g.add_edge(a, b, weight=w)
        return g

    @property
    def simply_laced(self) -> bool:
        return all(w == 3 for _, _, w in self.edges)

    def components(self) -> list[list[int]]:
        return sorted(sorted(c) for c in nx.connected_components(self.graph))

    def bipartition(self) -> tuple[list[int], list[int]]:
        colour = nx.algorithms.bipartite.color(self.graph)
        # the first vertex of every component goes on the "+" side
        plus, minus = [], []
        for comp in self.components():
            for v in comp:
                (plus if colour[v] == colour[comp[0]] else minus).append(v)
        return sorted(plus), sorted(minus)

    def weights(self) -> set[int]:
        return {w for _, _, w in self.edges}


def _chain(n: int, last: int = 3, first: int = 3) -> list[tuple[int, int, int]]:
    edges = [(i, i + 1, 3) for i in range(n - 1)]
    if n >= 2:
        if last != 3:
            a, b, _ = edges[-1]
            edges[-1] = (a, b, last)
        if first != 3:
            a, b, _ = edges[0]
            edges[0] = (a, b, first)
    return edges


_TYPE = re.compile(r"^([A-IY])(\d+)(?:\((\d+)\))?$")


def coxeter_diagram(spec: str) -> Diagram:
    """Diagram from a type name such as ``H3``, ``I2(7)`` or ``A5+D4``.

    Vertex numbering follows the standard list of finite Coxeter graphs:
    E_n is 1-2-3-5-6-7-8 with 4 attached to 3; D_n branches at n-2.
    """
    parts = spec.split("+")
    if len(parts) > 1:
        ds = [coxeter_diagram(p) for p in parts]
        verts, edges, off = [], [], 0
        for k, d in enumerate(ds):
            verts += [f"{v}.{k}" for v in d.vertices]
            edges += [(a + off, b + off, w) for a, b, w in d.edges]
            off += d.rank
        return Diagram(spec, tuple(verts), tuple(edges))
    m = _TYPE.match(spec.strip())
    if not m:
        raise NotFiniteType(f"unrecognised Coxeter type {spec!r}")
    fam, n, arg = m.group(1), int(m.group(2)), m.group(3)
    verts = tuple(str(i + 1) for i in range(n))
    if fam == "A" and n >= 1:
        edges = _chain(n)
    elif fam in "BC" and n >= 2:
        edges = _chain(n, last=4)
    elif fam == "D" and n >= 4:
        edges = _chain(n - 1)
        edges.append((n - 3, n - 1, 3))
    elif fam == "E" and n in (6, 7, 8):
        # 1-2-3-5-6-7-8, 3-4 (vertex names as in the standard figure)
        spine = [0, 1, 2, 4, 5, 6, 7][: n - 1]
        edges = [(spine[i], spine[i + 1], 3) for i in range(len(spine) - 1)]
        edges.append((2, 3, 3))
    elif fam == "F" and n == 4:
        edges = [(0, 1, 3), (1, 2, 4), (2, 3, 3)]
    elif fam == "G" and n == 2:
        edges = [(0, 1, 6)]
    elif fam == "H" and n in (2, 3, 4):
        edges = _chain(n, first=5)
    elif fam == "I" and n == 2 and arg is not None and int(arg) >= 3:
        edges = [(0, 1, int(arg))]
    else:
        raise NotFiniteType(f"{spec!r} is not a finite Coxeter type")
    return Diagram(spec, verts, tuple(sorted(edges)))


def graph_diagram(name: str, vertices, edges) -> Diagram:
    """Simply-laced diagram from an undirected edge list (used for unfolded quivers)."""
    return Diagram(name, tuple(vertices), tuple((a, b, 3) for a, b in edges))


# exponents and Coxeter numbers of the irreducible finite types
def exponents(spec: str) -> tuple[list[int], int]:
    m = _TYPE.match(spec)
    if not m:
        raise NotFiniteType(spec)
    fam, n, arg = m.group(1), int(m.group(2)), m.group(3)
    if fam == "A":
        return list(range(1, n + 1)), n + 1
    if fam in "BC":
        return list(range(1, 2 * n, 2)), 2 * n
    if fam == "D":
        return sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]), 2 * n - 2
    table = {
        "E6": ([1, 4, 5, 7, 8, 11], 12),
        "E7": ([1, 5, 7, 9, 11, 13, 17], 18),
        "E8": ([1, 7, 11, 13, 17, 19, 23, 29], 30),
        "F4": ([1, 5, 7, 11], 12),
        "G2": ([1, 5], 6),
        "H2": ([1, 4], 5),
        "H3": ([1, 5, 9], 10),
        "H4": ([1, 11, 19, 29], 30),
    }
    if fam == "I":
        h = int(arg)
        return [1, h - 1], h
    return table[f"{fam}{n}"]


def weyl_order_formula(spec: str) -> int:
    out = 1
    for part in spec.split("+"):
        ex, _ = exponents(part)
        for e in ex:
            out *= e + 1
    return out


def cluster_count_formula(spec: str) -> int:
    """Number of clusters: prod (h + e + 1) / (e + 1) over the exponents."""
    out = 1
    for part in spec.split("+"):
        ex, h = exponents(part)
        num = den = 1
        for e in ex:
            num *= h + e + 1
            den *= e + 1
        out *= num // den
    return out


def _classify_component(d: Diagram, comp: list[int]) -> str:
    n = len(comp)
    if n == 1:
        return "A1"
    g = d.graph.subgraph(comp)
    if g.number_of_edges() != n - 1:
        raise NotFiniteType("diagram component contains a cycle")
    degs = dict(g.degree())
    ws = sorted(d.m(a, b) for a, b in g.edges())
    if max(degs.values()) <= 2:
        ends = [v for v in comp if degs[v] == 1]
        path = nx.shortest_path(g, ends[0], ends[1])
        pw = [d.m(path[i], path[i + 1]) for i in range(n - 1)]
        if n == 2:
            return {3: "A2", 4: "B2", 6: "G2"}.get(pw[0], f"I2({pw[0]})")
        if all(w == 3 for w in pw):
            return f"A{n}"
        if pw[0] != 3:
            pw = pw[::-1]
        if pw[:-1] == [3] * (n - 2) and pw[-1] == 4:
            return f"B{n}"
        if pw[:-1] == [3] * (n - 2) and pw[-1] == 5 and n in (3, 4):
            return f"H{n}"
        if pw == [3, 4, 3]:
            return "F4"
        raise NotFiniteType(f"path with weights {pw} is not of finite type")
    if ws != [3] * (n - 1):
        raise NotFiniteType("branched diagram with a weight above 3")
    branch = [v for v in comp if degs[v] >= 3]
    if len(branch) != 1 or degs[branch[0]] != 3:
        raise NotFiniteType("branched diagram is not of finite type")
    c = branch[0]
    arms = sorted(len(nx.node_connected_component(g.subgraph(set(comp) - {c}), nb)) for nb in g.neighbors(c))
    if arms[:2] == [1, 1]:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise NotFiniteType(f"arms {arms} are not of finite type")


def classify(d: Diagram) -> str:
    """Coxeter type of a diagram, components joined by '+' in sorted order."""
    return "+".join(sorted(_classify_component(d, c) for c in d.components()))
