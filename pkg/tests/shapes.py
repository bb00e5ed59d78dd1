"""Reference graphs for ADE shapes, built directly with networkx."""
import networkx as nx


def ade(kind: str, n: int) -> nx.Graph:
    if kind == "A":
        return nx.path_graph(n)
    if kind == "D":
        g = nx.path_graph(n - 1)
        g.add_edge(n - 3, n - 1)
        return g
    if kind == "E":
        g = nx.path_graph(n - 1)
        g.add_edge(2, n - 1)
        return g
    raise ValueError(kind)


def shape(text: str) -> nx.Graph:
    """``"D6+D6"`` -> disjoint union of the listed graphs."""
    parts = [ade(p[0], int(p[1:])) for p in text.split("+")]
    return nx.disjoint_union_all(parts)
