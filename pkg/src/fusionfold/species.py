"""Fusion-weighted species, the folding catalog, and unfolding.

A species attaches to each vertex of an oriented Coxeter diagram a list of
simple module classes in K(F), and to each edge a class wt(a) in K(F).
Unfolding turns this into a simply-laced quiver Q: one vertex per listed
simple, and for a: i -> j the number of arrows X -> Y is the coefficient of
Y when X (x) wt(a) is written in the basis of simples at j.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .diagrams import Diagram, coxeter_diagram, graph_diagram
from .errors import InconsistentSpecies, NotFiniteType, UnknownCatalogEntry
from .exact import FieldElement
from .fusion import (
    FusionRing,
    RingElement,
    deligne,
    fpdim,
    parse_element,
    ring_from_name,
    tensor_decompose,
    tlj,
    vec_cyclic,
)


@dataclass(frozen=True, eq=False)
class WeightedSpecies:
    name: str
    diagram: Diagram
    ring: FusionRing
    vertex_simples: tuple[tuple[RingElement, ...], ...]
    # one class per diagram edge, in the order of diagram.edges
    edge_weights: tuple[RingElement, ...]
    # Coxeter type of the folded diagram, when it is a catalog type
    delta_type: str | None = None
    # expected shape of the unfolded quiver, e.g. "D6+D6"
    unfolded_type: str | None = None

    def simple_labels(self, i: int) -> list[str]:
        return [str(c) for c in self.vertex_simples[i]]

    def to_json(self) -> dict:
        d = self.diagram
        return {
            "name": self.name,
            "diagram": {
                "name": d.name,
                "vertices": list(d.vertices),
                "edges": [list(e) for e in d.edges],
            },
            "ring": self.ring.to_json(),
            "vertex_simples": [[str(c) for c in cs] for cs in self.vertex_simples],
            "edge_weights": [str(w) for w in self.edge_weights],
            "delta_type": self.delta_type,
            "unfolded_type": self.unfolded_type,
        }

    @staticmethod
    def from_json(obj: dict) -> "WeightedSpecies":
        """Inverse of :meth:`to_json`.

        ``ring`` may be a full ring dump or a name such as ``"tlj:5"``;
        ``diagram`` may be ``{"type": "H3"}`` or explicit vertices and edges.
        """
        ring_obj = obj["ring"]
        ring = ring_from_name(ring_obj) if isinstance(ring_obj, str) else FusionRing.from_json(ring_obj)
        dobj = obj["diagram"]
        if isinstance(dobj, str) or "type" in dobj:
            diagram = coxeter_diagram(dobj if isinstance(dobj, str) else dobj["type"])
        else:
            diagram = Diagram(
                dobj.get("name", obj.get("name", "custom")),
                tuple(str(v) for v in dobj["vertices"]),
                tuple((int(a), int(b), int(w)) for a, b, w in dobj["edges"]),
            )
        simples = tuple(tuple(parse_element(ring, s) for s in cs) for cs in obj["vertex_simples"])
        weights = tuple(parse_element(ring, s) for s in obj["edge_weights"])
        if len(simples) != diagram.rank or len(weights) != len(diagram.edges):
            raise InconsistentSpecies("species JSON does not match its diagram")
        return WeightedSpecies(
            obj.get("name", diagram.name),
            diagram,
            ring,
            simples,
            weights,
            obj.get("delta_type"),
            obj.get("unfolded_type"),
        )


# ------------------------------------------------------------ exact solving

class _Decomposer:
    """Writes ring classes in a fixed independent family of classes, exactly."""

    def __init__(self, classes: list[RingElement]):
        self.k = len(classes)
        self.mat = np.array([c.coeffs for c in classes], dtype=np.int64).T
        rows, inv = _pivot_inverse(self.mat)
        self.independent = rows is not None
        self.rows = rows
        self.inv = inv

    def solve(self, target: RingElement) -> list[Fraction] | None:
        if not self.independent:
            return None
        t = [Fraction(int(target.coeffs[r])) for r in self.rows]
        sol = [sum((self.inv[i][j] * t[j] for j in range(self.k)), Fraction(0)) for i in range(self.k)]
        # the pivot rows pin the solution; the others must agree with it
        back = [sum(Fraction(int(self.mat[r, i])) * sol[i] for i in range(self.k)) for r in range(self.mat.shape[0])]
        if back != [Fraction(int(c)) for c in target.coeffs]:
            return None
        return sol


def _pivot_inverse(mat: np.ndarray):
    """Rows giving an invertible square submatrix and its exact inverse."""
    nrows, k = mat.shape
    if k == 0:
        return [], []
    a = [[Fraction(int(v)) for v in row] for row in mat]
    # row-reduce the transpose to find independent rows of ``mat``
    cols = [[a[r][c] for r in range(nrows)] for c in range(k)]
    pivots: list[int] = []
    work = [row[:] for row in cols]
    rank = 0
    for r in range(nrows):
        p = next((i for i in range(rank, k) if work[i][r] != 0), None)
        if p is None:
            continue
        work[rank], work[p] = work[p], work[rank]
        piv = work[rank][r]
        for i in range(k):
            if i != rank and work[i][r] != 0:
                f = work[i][r] / piv
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        pivots.append(r)
        rank += 1
        if rank == k:
            break
    if rank < k:
        return None, None
    sub = [[a[r][c] for c in range(k)] for r in pivots]
    return pivots, _invert(sub)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _as_counts(sol: list[Fraction] | None) -> list[int] | None:
    if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
        return None
    return [int(x) for x in sol]


# ------------------------------------------------------------ folding

@dataclass(frozen=True, eq=False)
class Folding:
    species: WeightedSpecies
    vertex_names: tuple[str, ...]
    fold_map: tuple[int, ...]
    classes: tuple[RingElement, ...]
    # (src, dst, multiplicity) with multiplicity > 0
    arrows: tuple[tuple[int, int, int], ...]
    # label -> integer matrix on Z^{Q0}; column k is x (x) S_k in simples
    kaction: dict[str, np.ndarray] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.vertex_names)

    @property
    def ring(self) -> FusionRing:
        return self.species.ring

    @property
    def delta(self) -> Diagram:
        return self.species.diagram

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.delta.rank)]
        for q, i in enumerate(self.fold_map):
            out[i].append(q)
        return tuple(tuple(f) for f in out)

    @cached_property
    def exchange_matrix(self) -> np.ndarray:
        b = np.zeros((self.n, self.n), dtype=np.int64)
        for s, d, m in self.arrows:
            b[s, d] += m
            b[d, s] -= m
        return b

    @cached_property
    def omega(self) -> Diagram:
        """Underlying graph of Q as a diagram (requires multiplicity-one arrows)."""
        edges = sorted({(min(s, d), max(s, d)) for s, d, _ in self.arrows})
        return graph_diagram(f"unfold({self.species.name})", self.vertex_names, edges)

    @property
    def simply_laced(self) -> bool:
        return all(m == 1 for _, _, m in self.arrows) and len({(min(s, d), max(s, d)) for s, d, _ in self.arrows}) == len(self.arrows)

    @cached_property
    def simple_fpdims(self) -> tuple[FieldElement, ...]:
        return tuple(fpdim(c) for c in self.classes)

    @cached_property
    def fiber_weights(self) -> tuple[FieldElement, ...]:
        """FPdim of each simple divided by the smallest FPdim in its fiber."""
        out = [None] * self.n
        for fib in self.fibers:
            low = min(self.simple_fpdims[q] for q in fib)
            for q in fib:
                out[q] = self.simple_fpdims[q] / low
        return tuple(out)

    def label_fpdims(self) -> dict[str, FieldElement]:
        r = self.ring
        return {lab: fpdim(r.basis(i)) for i, lab in enumerate(r.labels)}

    def to_json(self) -> dict:
        d = self.delta
        return {
            "name": self.species.name,
            "diagram": {"name": d.name, "vertices": list(d.vertices), "edges": [list(e) for e in d.edges]},
            "ring": self.ring.name,
            "vertices": list(self.vertex_names),
            "fibers": {d.vertices[i]: list(f) for i, f in enumerate(self.fibers)},
            "arrows": [list(a) for a in self.arrows],
            "kaction": {
                lab: [[int(r), int(c), int(m[r, c])] for r, c in zip(*np.nonzero(m))]
                for lab, m in sorted(self.kaction.items())
            },
        }

    def to_dot(self, header: str = "") -> str:
        palette = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999"]
        lines = []
        if header:
            lines.append(f"// {header}")
        lines.append(f'digraph "{self.species.name}" {{')
        for q, name in enumerate(self.vertex_names):
            colour = palette[self.fold_map[q] % len(palette)]
            lines.append(f'  {q} [label="{name}", style=filled, fillcolor="{colour}"];')
        for s, d, m in self.arrows:
            extra = f' [label="{m}"]' if m > 1 else ""
            lines.append(f"  {s} -> {d}{extra};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def unfold(species: WeightedSpecies) -> Folding:
    ring = species.ring
    d = species.diagram
    decomposers = [_Decomposer(list(cs)) for cs in species.vertex_simples]
    for i, dec in enumerate(decomposers):
        if not dec.independent:
            raise InconsistentSpecies(
                f"simples at vertex {d.vertices[i]} are not linearly independent",
                {"vertex": d.vertices[i], "simples": species.simple_labels(i)},
            )
    names, fold_map, classes, offset = [], [], [], []
    for i, cs in enumerate(species.vertex_simples):
        offset.append(len(names))
        for c in cs:
            names.append(f"{d.vertices[i]}:{c}")
            fold_map.append(i)
            classes.append(c)

    arrows = []
    for (a, b, _), wt in zip(d.edges, species.edge_weights):
        for xi, x in enumerate(species.vertex_simples[a]):
            target = tensor_decompose(x, wt)
            counts = _as_counts(decomposers[b].solve(target))
            if counts is None:
                raise InconsistentSpecies(
                    f"{x} (x) {wt} is not a sum of simples at vertex {d.vertices[b]}",
                    {"edge": [d.vertices[a], d.vertices[b]], "source_simple": str(x), "class": str(target)},
                )
            for yi, m in enumerate(counts):
                if m:
                    arrows.append((offset[a] + xi, offset[b] + yi, m))

    n = len(names)
    kaction = {}
    for li, lab in enumerate(ring.labels):
        mat = np.zeros((n, n), dtype=np.int64)
        x = ring.basis(li)
        for q in range(n):
            i = fold_map[q]
            counts = _as_counts(decomposers[i].solve(tensor_decompose(x, classes[q])))
            if counts is None:
                raise InconsistentSpecies(
                    f"{lab} (x) {classes[q]} is not a sum of simples at vertex {d.vertices[i]}",
                    {"label": lab, "simple": names[q]},
                )
            for yi, m in enumerate(counts):
                mat[offset[i] + yi, q] = m
        kaction[lab] = mat
    return Folding(species, tuple(names), tuple(fold_map), tuple(classes), tuple(sorted(arrows)), kaction)


def validate_species(species: WeightedSpecies) -> list[str]:
    """Violations of the species invariants; an empty list means valid."""
    out = []
    d = species.diagram
    if len(species.vertex_simples) != d.rank:
        out.append("number of vertex simple lists differs from the number of vertices")
    if len(species.edge_weights) != len(d.edges):
        out.append("number of edge weights differs from the number of edges")
    for i, cs in enumerate(species.vertex_simples):
        if not cs:
            out.append(f"vertex {d.vertices[i]} has no simples")
        for c in cs:
            if not c.is_object_class():
                out.append(f"simple {c} at vertex {d.vertices[i]} has a negative coefficient")
            elif not any(c.coeffs):
                out.append(f"zero class listed as a simple at vertex {d.vertices[i]}")
        if cs and not _Decomposer(list(cs)).independent:
            out.append(f"simples at vertex {d.vertices[i]} are not linearly independent")
    for (a, b, _), w in zip(d.edges, species.edge_weights):
        if not w.is_object_class():
            out.append(f"weight of edge {d.vertices[a]}-{d.vertices[b]} has a negative coefficient")
        if w.dual() != w:
            out.append(f"weight of edge {d.vertices[a]}-{d.vertices[b]} is not self-dual")
    if not out:
        try:
            unfold(species)
        except InconsistentSpecies as exc:
            out.append(str(exc))
    return out


# ------------------------------------------------------------ catalog

def _group_species(name, diagram, order, fixed, delta_type, unfolded_type) -> WeightedSpecies:
    """Z/order acting on a diagram: fixed vertices carry the regular class."""
    ring = vec_cyclic(order)
    regular = ring.element([1] * order)
    simples = []
    for i in range(diagram.rank):
        if i in fixed:
            simples.append((regular,))
        else:
            simples.append(tuple(ring.basis(g) for g in range(order)))
    weights = []
    for a, b, _ in diagram.edges:
        # a free source only reaches a fixed target through the regular class
        weights.append(regular if (a not in fixed and b in fixed) else ring.one)
    return WeightedSpecies(name, diagram, ring, tuple(simples), tuple(weights), delta_type, unfolded_type)


def _reoriented(diagram: Diagram, flips: set[tuple[int, int]]) -> Diagram:
    edges = tuple((b, a, w) if (a, b) in flips else (a, b, w) for a, b, w in diagram.edges)
    return Diagram(diagram.name, diagram.vertices, edges)


def _tlj_species(name, diagram, delta_type, unfolded_type, force: tuple[int, ...] = ()) -> WeightedSpecies:
    """Trivial vertex algebras, edge weight [2]_h on every edge with weight h > 3."""
    hs = sorted({w for w in diagram.weights() if w > 3} | set(force))
    if not hs:
        ring = vec_cyclic(1)
        simples = tuple((ring.one,) for _ in range(diagram.rank))
        return WeightedSpecies(name, diagram, ring, simples, tuple(ring.one for _ in diagram.edges), delta_type, unfolded_type)
    ring = tlj(hs[0])
    for h in hs[1:]:
        ring = deligne(ring, tlj(h))
    sizes = [h - 1 for h in hs]

    def component_class(pos: int, k: int) -> RingElement:
        # [k] in the pos-th factor, unit elsewhere; indices are row-major
        idx = 0
        for p, size in enumerate(sizes):
            idx = idx * size + ((k - 1) if p == pos else 0)
        return ring.basis(idx)

    every = tuple(ring.basis(i) for i in range(ring.rank))
    weights = []
    for _, _, w in diagram.edges:
        weights.append(component_class(hs.index(w), 2) if w in hs else ring.one)
    return WeightedSpecies(name, diagram, ring, tuple(every for _ in range(diagram.rank)), tuple(weights), delta_type, unfolded_type)


# simple module classes over TLJ_h for the three exceptional sl2 module categories
KO_TABLES = {
    "E6": (12, ["1+7", "2+6+8", "3++9", "4+6+10", "5+11", "4+8"]),
    "E7": (18, ["6+12", "5+7+11+13", "4++14", "3+7+9+11+15", "2+8+10+16", "5+9+13", "1+9+17"]),
    "E8": (
        30,
        [
            "7+13+17+23",
            "6+8+12+14+16+18+22+24",
            "5++15+15++25",
            "4+8++22+26",
            "3+9+11+13+17+19+21+27",
            "6+10+14+16+20+24",
            "2+10+12+18+20+28",
            "1+11+19+29",
        ],
    ),
}


def _ko_species(name: str, ade: str) -> WeightedSpecies:
    h, table = KO_TABLES[ade]
    ring = tlj(h)
    simples = tuple(parse_element(ring, s) for s in table)
    diagram = coxeter_diagram(f"I2({h})")
    return WeightedSpecies(name, diagram, ring, (simples, simples), (ring.element("2"),), f"I2({h})", f"{ade}+{ade}")


_ARROW = r"(?:→|->)"
_PATTERNS = [
    (re.compile(rf"^grp:A2n-1{_ARROW}Cn\((\d+)\)$"), "cn"),
    (re.compile(rf"^grp:A(\d+){_ARROW}C(\d+)$"), "cn_explicit"),
    (re.compile(rf"^grp:Dn\+1{_ARROW}Bn\((\d+)\)$"), "bn"),
    (re.compile(rf"^grp:D(\d+){_ARROW}B(\d+)$"), "bn_explicit"),
    (re.compile(rf"^grp:E6{_ARROW}F4$"), "e6f4"),
    (re.compile(rf"^grp:D4{_ARROW}G2$"), "d4g2"),
    (re.compile(r"^tlj:(?:Bn|Cn)\((\d+)\)$"), "tlj_bn"),
    (re.compile(r"^tlj:[BC](\d+)$"), "tlj_bn"),
    (re.compile(r"^tlj:F4$"), "tlj_f4"),
    (re.compile(r"^tlj:H([34])$"), "tlj_h"),
    (re.compile(r"^tlj:I2\((\d+)\)$"), "tlj_i2"),
    (re.compile(r"^ko:I2\((12|18|30)\)-(E6|E7|E8)$"), "ko"),
    (re.compile(r"^triv:(.+)$"), "triv"),
]


def catalog_names(n: int = 3, h: int = 5) -> list[str]:
    """Canonical catalog identifiers, with the parametric families at n and h."""
    return [
        f"grp:A2n-1→Cn({n})",
        f"grp:Dn+1→Bn({n})",
        "grp:E6→F4",
        "grp:D4→G2",
        f"tlj:Bn({n})",
        "tlj:F4",
        "tlj:H3",
        "tlj:H4",
        f"tlj:I2({h})",
        "ko:I2(12)-E6",
        "ko:I2(18)-E7",
        "ko:I2(30)-E8",
    ]


@lru_cache(maxsize=None)
def catalog(name: str) -> WeightedSpecies:
    key = name.strip()
    for pat, kind in _PATTERNS:
        m = pat.match(key)
        if m:
            try:
                return _build(kind, m)
            except NotFiniteType as exc:
                raise UnknownCatalogEntry(f"{name!r}: {exc}") from None
    raise UnknownCatalogEntry(f"unknown catalog entry {name!r}")


def _build(kind: str, m: re.Match) -> WeightedSpecies:
    if kind in ("cn", "cn_explicit"):
        n = int(m.group(1)) if kind == "cn" else int(m.group(2))
        if n < 2 or (kind == "cn_explicit" and int(m.group(1)) != 2 * n - 1):
            raise NotFiniteType("need A_{2n-1} -> C_n with n >= 2")
        d = coxeter_diagram(f"C{n}")
        return _group_species(f"grp:A2n-1→Cn({n})", d, 2, {n - 1}, f"C{n}", f"A{2 * n - 1}")
    if kind in ("bn", "bn_explicit"):
        n = int(m.group(1)) if kind == "bn" else int(m.group(2))
        if n < 3 or (kind == "bn_explicit" and int(m.group(1)) != n + 1):
            raise NotFiniteType("need D_{n+1} -> B_n with n >= 3")
        d = _reoriented(coxeter_diagram(f"B{n}"), {(n - 2, n - 1)})
        return _group_species(f"grp:Dn+1→Bn({n})", d, 2, set(range(n - 1)), f"B{n}", f"D{n + 1}")
    if kind == "e6f4":
        d = _reoriented(coxeter_diagram("F4"), {(1, 2)})
        return _group_species("grp:E6→F4", d, 2, {0, 1}, "F4", "E6")
    if kind == "d4g2":
        d = _reoriented(coxeter_diagram("G2"), {(0, 1)})
        return _group_species("grp:D4→G2", d, 3, {0}, "G2", "D4")
    if kind == "tlj_bn":
        n = int(m.group(1))
        if n < 2:
            raise NotFiniteType("need n >= 2")
        shape = f"A{2 * n - 1}+D{n + 1}" if n >= 3 else "A3+A3"
        return _tlj_species(f"tlj:Bn({n})", coxeter_diagram(f"B{n}"), f"B{n}", shape)
    if kind == "tlj_f4":
        return _tlj_species("tlj:F4", coxeter_diagram("F4"), "F4", "E6+E6")
    if kind == "tlj_h":
        n = m.group(1)
        shape = "D6+D6" if n == "3" else "E8+E8"
        return _tlj_species(f"tlj:H{n}", coxeter_diagram(f"H{n}"), f"H{n}", shape)
    if kind == "tlj_i2":
        h = int(m.group(1))
        if h < 3:
            raise NotFiniteType("I2(h) needs h >= 3")
        # h = 3 would otherwise get no [2]-weight and a trivial ring
        return _tlj_species(f"tlj:I2({h})", coxeter_diagram(f"I2({h})"), f"I2({h})", f"A{h - 1}+A{h - 1}", force=(h,))
    if kind == "ko":
        h, ade = m.group(1), m.group(2)
        if KO_TABLES[ade][0] != int(h):
            raise NotFiniteType(f"{ade} has Coxeter number {KO_TABLES[ade][0]}, not {h}")
        return _ko_species(f"ko:I2({h})-{ade}", ade)
    # identity folding over the trivial ring
    t = m.group(1)
    d = coxeter_diagram(t)
    if not d.simply_laced:
        raise NotFiniteType(f"trivial folding needs a simply-laced type, got {t}")
    return _tlj_species(f"triv:{t}", d, t, t)


def load_species(path: str) -> WeightedSpecies:
    with open(path) as fh:
        return WeightedSpecies.from_json(json.load(fh))


def resolve(name_or_path: str) -> WeightedSpecies:
    if name_or_path.endswith(".json"):
        return load_species(name_or_path)
    return catalog(name_or_path)
