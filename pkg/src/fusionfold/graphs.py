"""Graph isomorphism by colour refinement with individualisation.

Both graphs are refined together on their disjoint union, so a colour means
the same thing on either side.  When refinement stalls, one vertex of the
smallest non-trivial class is individualised on the left and matched in turn
against each candidate on the right.  A found bijection is always checked
edge by edge before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

import networkx as nx


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    mapping: dict | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def _refine(adj: list[list[int]], colours: list[int]) -> list[int]:
    """Stable colouring: repeat (colour, sorted neighbour colours) until no class splits."""
    cur = colours
    ncol = len(set(cur))
    while True:
        sigs = [(cur[v], tuple(sorted(cur[u] for u in adj[v]))) for v in range(len(adj))]
        table = {s: k for k, s in enumerate(sorted(set(sigs)))}
        nxt = [table[s] for s in sigs]
        if len(table) == ncol:
            return nxt
        cur, ncol = nxt, len(table)


def _balanced(colours: list[int], n1: int) -> bool:
    left: dict[int, int] = {}
    for c in colours[:n1]:
        left[c] = left.get(c, 0) + 1
    right: dict[int, int] = {}
    for c in colours[n1:]:
        right[c] = right.get(c, 0) + 1
    return left == right


def _search(adj, colours, n1):
    colours = _refine(adj, colours)
    if not _balanced(colours, n1):
        return None
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        classes.setdefault(c, []).append(v)
    open_classes = [vs for vs in classes.values() if len(vs) > 2]
    if not open_classes:
        # discrete on both sides: read off the bijection
        return {vs[0]: vs[1] - n1 for vs in classes.values()}
    target = min(open_classes, key=len)
    v = target[0]
    fresh = max(colours) + 1
    for w in (u for u in target if u >= n1):
        trial = list(colours)
        trial[v] = fresh
        trial[w] = fresh
        found = _search(adj, trial, n1)
        if found is not None and _is_iso(adj, found, n1):
            return found
    return None


def _is_iso(adj, mapping: dict[int, int], n1: int) -> bool:
    for a in range(n1):
        image = {mapping[b] + n1 for b in adj[a]}
        if image != set(adj[mapping[a] + n1]):
            return False
    return True


def find_isomorphism(g1: nx.Graph, g2: nx.Graph) -> IsoResult:
    """Explicit vertex bijection g1 -> g2 preserving adjacency, if one exists."""
    if g1.number_of_nodes() != g2.number_of_nodes():
        return IsoResult(False, None, "different vertex counts")
    if g1.number_of_edges() != g2.number_of_edges():
        return IsoResult(False, None, "different edge counts")
    if sorted(d for _, d in g1.degree()) != sorted(d for _, d in g2.degree()):
        return IsoResult(False, None, "different degree sequences")
    nodes1 = sorted(g1.nodes(), key=repr)
    nodes2 = sorted(g2.nodes(), key=repr)
    n1 = len(nodes1)
    if n1 == 0:
        return IsoResult(True, {}, "")
    idx1 = {v: k for k, v in enumerate(nodes1)}
    idx2 = {v: k + n1 for k, v in enumerate(nodes2)}
    adj: list[list[int]] = [[] for _ in range(2 * n1)]
    for a, b in g1.edges():
        adj[idx1[a]].append(idx1[b])
        adj[idx1[b]].append(idx1[a])
    for a, b in g2.edges():
        adj[idx2[a]].append(idx2[b])
        adj[idx2[b]].append(idx2[a])
    found = _search(adj, [0] * (2 * n1), n1)
    if found is None or not _is_iso(adj, found, n1):
        return IsoResult(False, None, "no adjacency-preserving bijection")
    mapping: dict[Hashable, Hashable] = {nodes1[a]: nodes2[b] for a, b in found.items()}
    return IsoResult(True, mapping, "")
