"""Root systems, Weyl groups, folded reflections and chamber counts.

Every finite Coxeter diagram is realised geometrically with
B(a_i, a_i) = 1 and B(a_i, a_j) = -cos(pi/m_ij).  The reflection in a_i is
v -> v - 2B(a_i, v)a_i, so all matrix entries live in the ring of integers
Z[g] of Q(g), g = 2cos(pi/L).  Internally vectors and matrices are integer
arrays whose last axis holds power-basis coefficients; conversion to
FieldElement happens only at the API boundary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .diagrams import Diagram, classify, coxeter_diagram, weyl_order_formula
from .errors import (
    DecompositionFailed,
    FiberNotOrthogonal,
    FoldingNotCompatible,
    GroupTooLarge,
    IdentificationFailed,
    NotFiniteType,
    RankTooLarge,
)
from .exact import FieldElement, FieldSpec, compositum_order, make_field, two_cos_pi_over
from .linalg import inverse, matvec
from .species import Folding

ROOT_CAP = 100_000
WEYL_CAP = 1_000_000


# ------------------------------------------------------------ Z[g] plumbing

class IntegralRing:
    """Arithmetic in Z[g] for g = 2cos(pi/L), elements as int coefficient arrays."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.d = spec.degree
        d = self.d
        # g^t for t < 2d-1 in the power basis, used to reduce raw products
        red = np.zeros((d, max(2 * d - 1, 1)), dtype=np.int64)
        power = spec.one
        for t in range(max(2 * d - 1, 1)):
            red[:, t] = self.to_int(power)
            power = power * spec.gen
        self.red = red

    def to_int(self, x: FieldElement) -> np.ndarray:
        if x.den != 1:
            raise ValueError(f"{x} is not an algebraic integer in the power basis")
        return np.array(x.nums, dtype=np.int64)

    def to_field(self, a) -> FieldElement:
        return FieldElement(self.spec, tuple(int(v) for v in a), 1)

    def mult_matrix(self, c: np.ndarray) -> np.ndarray:
        """Matrix M with M @ x = c * x."""
        d = self.d
        out = np.zeros((d, d), dtype=np.int64)
        for t in range(d):
            e = np.zeros(d, dtype=np.int64)
            e[t] = 1
            out[:, t] = self.mul(c, e)
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.red @ np.convolve(a, b)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of (n, k, d) and (k, m, d) arrays of Z[g] entries."""
        d = self.d
        raw = np.einsum("ijp,jkq->ikpq", a, b)
        conv = np.zeros(raw.shape[:2] + (2 * d - 1,), dtype=np.int64)
        for p in range(d):
            conv[:, :, p : p + d] += raw[:, :, p, :]
        return conv @ self.red.T


@lru_cache(maxsize=None)
def _field_for(weights: tuple[int, ...]) -> FieldSpec:
    return make_field(compositum_order(weights))


# ------------------------------------------------------------ root systems

@dataclass(frozen=True, eq=False)
class RootSystem:
    diagram: Diagram
    spec: FieldSpec
    zg: IntegralRing = field(repr=False)
    # cmul[i, j] multiplies by 2cos(pi/m_ij) for i != j adjacent, else 0
    cmul: np.ndarray = field(repr=False)
    roots_int: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return self.diagram.rank

    @property
    def count(self) -> int:
        return len(self.roots_int)

    @cached_property
    def bilinear(self) -> list[list[FieldElement]]:
        n, s = self.rank, self.spec
        half = s(1) / 2
        return [
            [s.one if i == j else -(two_cos_pi_over(self.diagram.m(i, j), s) * half) for j in range(n)]
            for i in range(n)
        ]

    def form(self, u, v) -> FieldElement:
        """B(u, v) for coordinate vectors of FieldElements."""
        return sum((a * b for a, b in zip(matvec(self.bilinear, list(v), self.spec), u)), self.spec.zero)

    def reflect(self, i: int, vecs: np.ndarray) -> np.ndarray:
        """Apply s_i to a batch of integral vectors of shape (..., n, d)."""
        out = vecs.copy()
        acc = -vecs[..., i, :]
        for j in range(self.rank):
            if j != i and self.cmul[i, j].any():
                acc = acc + vecs[..., j, :] @ self.cmul[i, j].T
        out[..., i, :] = acc
        return out

    def to_field_vector(self, v: np.ndarray) -> tuple[FieldElement, ...]:
        return tuple(self.zg.to_field(c) for c in v)

    @cached_property
    def roots(self) -> tuple[tuple[FieldElement, ...], ...]:
        return tuple(self.to_field_vector(r) for r in self.roots_int)

    @cached_property
    def positive_mask(self) -> np.ndarray:
        out = []
        for r in self.roots_int:
            nz = next(c for c in r if c.any())
            out.append(self.zg.to_field(nz).sign() > 0)
        return np.array(out, dtype=bool)

    @property
    def positive_int(self) -> np.ndarray:
        return self.roots_int[self.positive_mask]

    @property
    def positive(self) -> tuple[tuple[FieldElement, ...], ...]:
        return tuple(r for r, p in zip(self.roots, self.positive_mask) if p)

    def reflection_matrix(self, i: int) -> list[list[FieldElement]]:
        eye = np.zeros((self.rank, self.rank, self.zg.d), dtype=np.int64)
        for k in range(self.rank):
            eye[k, k, 0] = 1
        cols = self.reflect(i, np.transpose(eye, (1, 0, 2)))
        return [[self.zg.to_field(cols[c, r]) for c in range(self.rank)] for r in range(self.rank)]

    def to_json(self) -> dict:
        return {
            "type": self.diagram.name,
            "field_order": self.spec.order,
            "count": self.count,
            "positive": int(self.positive_mask.sum()),
            "roots": [[x.to_json()["coeffs"] for x in r] for r in self.roots],
        }


def _integral_setup(d: Diagram) -> tuple[FieldSpec, IntegralRing, np.ndarray]:
    spec = _field_for(tuple(sorted(d.weights())))
    zg = IntegralRing(spec)
    n = d.rank
    cmul = np.zeros((n, n, zg.d, zg.d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j and d.m(i, j) > 2:
                cmul[i, j] = zg.mult_matrix(zg.to_int(two_cos_pi_over(d.m(i, j), spec)))
    return spec, zg, cmul


def _as_diagram(d: Diagram | str) -> Diagram:
    return coxeter_diagram(d) if isinstance(d, str) else d


def root_system(d: Diagram | str, cap: int = ROOT_CAP) -> RootSystem:
    """Closure of the simple roots under the simple reflections."""
    d = _as_diagram(d)
    spec, zg, cmul = _integral_setup(d)
    n = d.rank
    simple = np.zeros((n, n, zg.d), dtype=np.int64)
    for i in range(n):
        simple[i, i, 0] = 1
    proto = RootSystem(d, spec, zg, cmul, simple)
    seen = {r.tobytes(): r for r in simple}
    frontier = simple
    while len(frontier):
        fresh = []
        for i in range(n):
            for r in proto.reflect(i, frontier):
                key = r.tobytes()
                if key not in seen:
                    seen[key] = r
                    fresh.append(r)
        if len(seen) > cap:
            raise NotFiniteType(f"root closure of {d.name} exceeds {cap} roots")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, n, zg.d)
    roots = np.array(sorted(seen.values(), key=lambda r: r.tobytes()), dtype=np.int64)
    return RootSystem(d, spec, zg, cmul, roots)


# ------------------------------------------------------------ Weyl groups

@dataclass(frozen=True, eq=False)
class GroupElement:
    matrix: tuple[tuple[FieldElement, ...], ...]
    word: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class WeylGroup:
    roots: RootSystem
    # elements[k] has shape (n, n, d); column c is the image of a_c
    elements: np.ndarray = field(repr=False)
    words: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[bytes, int]:
        return {e.tobytes(): k for k, e in enumerate(self.elements)}

    def element(self, k: int) -> GroupElement:
        e = self.elements[k]
        zg = self.roots.zg
        n = self.roots.rank
        return GroupElement(tuple(tuple(zg.to_field(e[r, c]) for c in range(n)) for r in range(n)), self.words[k])

    def order_of(self, k: int) -> int:
        zg = self.roots.zg
        ident = self.elements[0]
        cur = self.elements[k]
        for o in range(1, self.size + 1):
            if np.array_equal(cur, ident):
                return o
            cur = zg.matmul(cur, self.elements[k])
        raise AssertionError("element order exceeds group size")

    def order_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for k in range(self.size):
            o = self.order_of(k)
            out[o] = out.get(o, 0) + 1
        return dict(sorted(out.items()))


def weyl_enumerate(d: Diagram | str, cap: int = WEYL_CAP) -> WeylGroup:
    """All elements by breadth-first left multiplication; words are reduced."""
    d = _as_diagram(d)
    try:
        expected = weyl_order_formula(classify(d))
    except NotFiniteType:
        expected = None
    if expected is not None and expected > cap:
        raise GroupTooLarge(f"|W({d.name})| = {expected} exceeds cap {cap}", {"order": expected, "cap": cap})
    spec, zg, cmul = _integral_setup(d)
    n = d.rank
    rs = RootSystem(d, spec, zg, cmul, np.zeros((0, n, zg.d), dtype=np.int64))
    ident = np.zeros((n, n, zg.d), dtype=np.int64)
    for i in range(n):
        ident[i, i, 0] = 1
    elems = [ident]
    words: list[tuple[int, ...]] = [()]
    seen = {ident.tobytes()}
    frontier_idx = [0]
    while frontier_idx:
        block = np.array([elems[k] for k in frontier_idx])
        nxt = []
        for i in range(n):
            images = rs.reflect(i, np.transpose(block, (0, 2, 1, 3)))
            images = np.transpose(images, (0, 2, 1, 3))
            for src, img in zip(frontier_idx, images):
                key = img.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                elems.append(np.ascontiguousarray(img))
                words.append((i,) + words[src])
                nxt.append(len(elems) - 1)
                if len(elems) > cap:
                    raise GroupTooLarge(f"W({d.name}) has more than {cap} elements", {"cap": cap})
        frontier_idx = nxt
    rs_full = root_system(d)
    return WeylGroup(rs_full, np.array(elems, dtype=np.int64), tuple(words))


# ------------------------------------------------------------ folding

def _imatrix_order(m: np.ndarray, limit: int = 10_000) -> int:
    eye = np.eye(len(m), dtype=np.int64)
    cur = m.copy()
    for o in range(1, limit + 1):
        if np.array_equal(cur, eye):
            return o
        cur = cur @ m
    raise FoldingNotCompatible(f"matrix order exceeds {limit}")


def omega_reflections(f: Folding) -> list[np.ndarray]:
    """Reflections of the simply-laced unfolded diagram as integer matrices."""
    if not f.simply_laced:
        raise FiberNotOrthogonal("unfolded quiver has multiple arrows; its diagram is not simply laced")
    n = f.n
    adj = np.abs(f.exchange_matrix)
    cartan = 2 * np.eye(n, dtype=np.int64) - adj
    out = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        s[i, :] -= cartan[i, :]
        out.append(s)
    return out


@dataclass(frozen=True, eq=False)
class FoldedGenerators:
    folding: Folding
    # R_i acting on Z^{Q0} (simple-root coordinates of Omega)
    reflections: tuple[np.ndarray, ...]
    # s_i = sum over the fiber of weight_k * a_k
    simple_roots: tuple[tuple[FieldElement, ...], ...]
    spec: FieldSpec

    @cached_property
    def gram(self) -> list[list[FieldElement]]:
        """B_Omega(s_i, s_j) with B_Omega = Cartan / 2."""
        cartan = 2 * np.eye(self.folding.n, dtype=np.int64) - np.abs(self.folding.exchange_matrix)
        return _gram(self.simple_roots, cartan, self.spec)


def _folding_field(f: Folding) -> FieldSpec:
    orders = [f.ring.field.order] + [w for w in f.delta.weights()]
    return make_field(compositum_order(orders))


def fold_generators(f: Folding) -> FoldedGenerators:
    refl = omega_reflections(f)
    adj = np.abs(f.exchange_matrix)
    for fib in f.fibers:
        for a, b in itertools.combinations(fib, 2):
            if adj[a, b] or not np.array_equal(refl[a] @ refl[b], refl[b] @ refl[a]):
                raise FiberNotOrthogonal(
                    f"fiber reflections {f.vertex_names[a]} and {f.vertex_names[b]} do not commute",
                    {"fiber_pair": [f.vertex_names[a], f.vertex_names[b]]},
                )
    spec = _folding_field(f)
    folded = []
    roots = []
    for fib in f.fibers:
        r = np.eye(f.n, dtype=np.int64)
        for q in fib:
            r = r @ refl[q]
        folded.append(r)
        vec = [spec.zero] * f.n
        for q in fib:
            vec[q] = spec(f.fiber_weights[q])
        roots.append(tuple(vec))
    return FoldedGenerators(f, tuple(folded), tuple(roots), spec)


def image_subgroup_order(gens: list[np.ndarray], cap: int = WEYL_CAP) -> int:
    n = len(gens[0])
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = g @ m
                key = p.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(p)
        if len(seen) > cap:
            raise GroupTooLarge(f"image subgroup exceeds {cap} elements")
        frontier = nxt
    return len(seen)


def check_fold_homomorphism(f: Folding, cap: int = WEYL_CAP) -> dict:
    """Coxeter relations of Delta for the folded reflections, plus injectivity."""
    fg = fold_generators(f)
    d = f.delta
    gens = list(fg.reflections)
    eye = np.eye(f.n, dtype=np.int64)
    orders = {}
    failures = []
    for i in range(d.rank):
        if np.array_equal(gens[i], eye) or _imatrix_order(gens[i]) != 2:
            failures.append({"pair": [d.vertices[i], d.vertices[i]], "expected": 2})
        for j in range(i + 1, d.rank):
            o = _imatrix_order(gens[i] @ gens[j])
            orders[f"{d.vertices[i]},{d.vertices[j]}"] = o
            if o != d.m(i, j):
                failures.append({"pair": [d.vertices[i], d.vertices[j]], "expected": d.m(i, j), "found": o})
    if failures:
        raise FoldingNotCompatible("folded reflections break the Coxeter relations", {"failures": failures})
    try:
        expected = weyl_order_formula(classify(d))
    except NotFiniteType:
        expected = weyl_enumerate(d, cap).size
    image = image_subgroup_order(gens, cap) if expected <= cap else None
    if image is not None and image != expected:
        raise FoldingNotCompatible(
            "folded reflections generate a group of the wrong order", {"image": image, "expected": expected}
        )
    return {
        "folding": f.species.name,
        "pair_orders": orders,
        "image_order": image,
        "weyl_order": expected,
        "injective": image == expected if image is not None else None,
    }


# ------------------------------------------------------------ projection

def _normalise(v: tuple[FieldElement, ...]) -> tuple[tuple[FieldElement, ...], FieldElement]:
    """Direction key with first nonzero coordinate 1, and that coordinate."""
    lead = next(x for x in v if not x.is_zero())
    inv = lead.inverse()
    return tuple(x * inv for x in v), lead


def _gram(vectors, cartan: np.ndarray, spec: FieldSpec) -> list[list[FieldElement]]:
    half = spec(1) / 2
    out = []
    for u in vectors:
        row = []
        for v in vectors:
            acc = spec.zero
            for a in range(len(u)):
                if u[a].is_zero():
                    continue
                for b in range(len(v)):
                    if cartan[a, b] and not v[b].is_zero():
                        acc = acc + u[a] * v[b] * int(cartan[a, b])
            row.append(acc * half)
        out.append(row)
    return out


def gram_orbit(g: list[list[FieldElement]], spec: FieldSpec) -> list[tuple[FieldElement, ...]]:
    """Orbit of the coordinate vectors under the reflections of the Gram form g."""
    k = len(g)
    two = spec(2)

    def refl(i, v):
        gv = matvec(g, list(v), spec)
        c = two * gv[i] / g[i][i]
        out = list(v)
        out[i] = out[i] - c
        return tuple(out)

    start = [tuple(spec.one if a == b else spec.zero for a in range(k)) for b in range(k)]
    seen = set(start)
    order = list(start)
    frontier = list(start)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(k):
                w = refl(i, v)
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    nxt.append(w)
        if len(seen) > ROOT_CAP:
            raise DecompositionFailed("folded root orbit does not close")
        frontier = nxt
    return order


def _project_component(f: Folding, fg: FoldedGenerators, comp: list[int]) -> dict:
    spec = fg.spec
    sub = f.omega.graph.subgraph(comp)
    local = {q: k for k, q in enumerate(comp)}
    sub_diag = Diagram("component", tuple(f.vertex_names[q] for q in comp), tuple((local[a], local[b], 3) for a, b in sub.edges()))
    rs = root_system(sub_diag)
    n = len(comp)
    cartan = 2 * np.eye(n, dtype=np.int64)
    for a, b, _ in sub_diag.edges:
        cartan[a, b] = cartan[b, a] = -1
    # fibers restricted to this component; fibers missing it drop out
    fibs = [[local[q] for q in fib if q in local] for fib in f.fibers]
    keep = [i for i, fb in enumerate(fibs) if fb]
    weights = {local[q]: spec(f.fiber_weights[q]) for q in comp}
    svecs = []
    for i in keep:
        v = [spec.zero] * n
        for k in fibs[i]:
            v[k] = weights[k]
        svecs.append(tuple(v))
    g = _gram(svecs, cartan, spec)
    ginv = inverse(g, spec)
    delta = gram_orbit(g, spec)
    by_dir: dict[tuple, tuple[int, FieldElement]] = {}
    for idx, u in enumerate(delta):
        key, lead = _normalise(u)
        by_dir.setdefault(key, (idx, lead))
    index_of = {u: idx for idx, u in enumerate(delta)}
    half = spec(1) / 2
    hits: dict[FieldElement, list[int]] = {}
    for r in rs.roots_int:
        t = cartan @ r[:, 0]
        b = []
        for i in keep:
            acc = spec.zero
            for k in fibs[i]:
                if t[k]:
                    acc = acc + weights[k] * int(t[k])
            b.append(acc * half)
        coords = tuple(matvec(ginv, b, spec))
        witness = {"root": [int(x) for x in r[:, 0]], "vertices": [f.vertex_names[q] for q in comp]}
        if all(x.is_zero() for x in coords):
            raise DecompositionFailed("a root projects to zero", witness)
        key, lead = _normalise(coords)
        if key not in by_dir:
            raise DecompositionFailed("projected root is not proportional to a folded root", witness)
        idx, ulead = by_dir[key]
        lam = lead / ulead
        if lam.sign() < 0:
            # u and -u are both roots; keep the positive scalar
            idx = index_of[tuple(-x for x in delta[idx])]
            lam = -lam
        hits.setdefault(lam, []).append(idx)

    scalars = sorted(hits, key=float)
    per_root: dict[int, set] = {}
    for s in scalars:
        for idx in hits[s]:
            per_root.setdefault(idx, set()).add(s)
    each_once = all(len(hits[s]) == len(set(hits[s])) == len(delta) for s in scalars)
    golden = False
    if len(scalars) == 2 and each_once and spec.order % 5 == 0:
        golden = scalars[1] == scalars[0] * two_cos_pi_over(5, spec)
    return {
        "vertices": [f.vertex_names[q] for q in comp],
        "omega_roots": rs.count,
        "delta_roots": len(delta),
        "folded_rank": len(keep),
        "scalars": [float(s) for s in scalars],
        "scalars_exact": [s.to_json() for s in scalars],
        "counts": [len(hits[s]) for s in scalars],
        "covers_delta": len(per_root) == len(delta),
        "golden_pair": golden,
        "single_copy": len(per_root) == len(delta) and all(len(v) == 1 for v in per_root.values()),
        "c": float(scalars[0]),
        "c_exact": scalars[0].to_json(),
    }


def project_roots(f: Folding) -> dict:
    """Project the roots of each component of Omega onto the folded simple roots.

    Each projection p is written as lam * u with u a root of Delta in
    s-coordinates.  For H-type foldings the scalars form one pair
    {c, c*phi} with every Delta root hit once per scalar; for group foldings
    every Delta root is hit with a single scalar (which may differ between
    root orbits).
    """
    fg = fold_generators(f)
    parts = [_project_component(f, fg, comp) for comp in f.omega.components()]
    report = {
        "folding": f.species.name,
        "components": parts,
        "golden_pair": all(p["golden_pair"] for p in parts),
        "single_copy": all(p["single_copy"] for p in parts),
        "covers_delta": all(p["covers_delta"] for p in parts),
        "c": parts[0]["c"],
        "c_exact": parts[0]["c_exact"],
    }
    if 5 in f.delta.weights() and not report["golden_pair"]:
        raise DecompositionFailed("expected two copies of the folded roots in golden ratio", report)
    if f.species.name.startswith("grp:") and not report["single_copy"]:
        raise DecompositionFailed("expected one scaled copy of the folded roots", report)
    if not report["covers_delta"]:
        raise DecompositionFailed("projected roots miss part of the folded root system", report)
    return report


# ------------------------------------------------------------ chambers

def _zg_det(zg: IntegralRing, m: list[list[np.ndarray]]) -> np.ndarray:
    k = len(m)
    if k == 0:
        out = np.zeros(zg.d, dtype=np.int64)
        out[0] = 1
        return out
    if k == 1:
        return m[0][0]
    acc = np.zeros(zg.d, dtype=np.int64)
    for c in range(k):
        if not m[0][c].any():
            continue
        minor = [row[:c] + row[c + 1 :] for row in m[1:]]
        term = zg.mul(m[0][c], _zg_det(zg, minor))
        acc = acc + term if c % 2 == 0 else acc - term
    return acc


def _span_members(zg: IntegralRing, basis: list[np.ndarray], vecs: np.ndarray) -> np.ndarray:
    """Mask of vectors (P, n, d) lying in the span of the integral basis."""
    n = vecs.shape[1]
    k = len(basis)
    if k == n:
        return np.ones(len(vecs), dtype=bool)
    minors = {}
    for rows in itertools.combinations(range(n), k):
        minors[rows] = _zg_det(zg, [[basis[c][r] for c in range(k)] for r in rows])
    mask = np.ones(len(vecs), dtype=bool)
    for rows in itertools.combinations(range(n), k + 1):
        acc = np.zeros((len(vecs), zg.d), dtype=np.int64)
        for pos, r in enumerate(rows):
            rest = rows[:pos] + rows[pos + 1 :]
            mm = zg.mult_matrix(minors[rest])
            term = vecs[:, r, :] @ mm.T
            acc = acc + term if pos % 2 == 0 else acc - term
        mask &= ~acc.any(axis=1)
    return mask


def flats(rs: RootSystem) -> list[int]:
    """Intersection lattice of the positive-root hyperplanes, as bitmasks."""
    pos = rs.positive_int
    zg = rs.zg
    n = rs.rank
    level = {0: []}
    out = [0]
    for _ in range(n):
        nxt: dict[int, list[np.ndarray]] = {}
        for mask, basis in level.items():
            covered = mask
            for h in range(len(pos)):
                if covered >> h & 1:
                    continue
                nb = basis + [pos[h]]
                members = _span_members(zg, nb, pos)
                new = 0
                for idx in np.flatnonzero(members):
                    new |= 1 << int(idx)
                covered |= new
                if new not in nxt:
                    nxt[new] = nb
        out.extend(nxt)
        level = nxt
    return out


def chambers(d: Diagram | str) -> dict:
    """Regions of the real Coxeter arrangement, counted through the lattice of flats."""
    d = _as_diagram(d)
    if d.rank > 4:
        raise RankTooLarge(f"chamber count supports rank <= 4, got {d.rank}")
    rs = root_system(d)
    lattice = flats(rs)
    mu: dict[int, int] = {}
    for x in sorted(lattice, key=lambda m: bin(m).count("1")):
        if x == 0:
            mu[x] = 1
            continue
        mu[x] = -sum(v for y, v in mu.items() if y != x and y & ~x == 0)
    regions = sum(abs(v) for v in mu.values())
    # interior point of the fundamental chamber: B(a_i, x) = 1 for all i
    spec = rs.spec
    rho = matvec(inverse(rs.bilinear, spec), [spec.one] * d.rank, spec)
    inside = all(rs.form(r, rho).sign() > 0 for r in rs.positive)
    return {
        "type": d.name,
        "hyperplanes": int(rs.positive_mask.sum()),
        "flats": len(lattice),
        "regions": regions,
        "fundamental_point": [float(x) for x in rho],
        "fundamental_point_strict": inside,
    }


def sampled_chambers(d: Diagram | str, samples: int = 200_000, seed: int = 0) -> int:
    """Distinct sign vectors of random points; an independent lower bound on the region count."""
    d = _as_diagram(d)
    rs = root_system(d)
    n = d.rank
    b = np.array([[float(x) for x in row] for row in rs.bilinear])
    pos = np.array([[float(x) for x in r] for r in rs.positive])
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((samples, n))
    vals = pts @ (pos @ b).T
    signs = vals > 0
    return len({row.tobytes() for row in np.packbits(signs, axis=1)})


def fixed_subspace(f: Folding) -> list[list[FieldElement]]:
    """Basis of row vectors x with x N_a = FPdim(a) x for every label a."""
    from .stability import fstable_charge_space

    return fstable_charge_space(f).basis


def check_fundamental_identification(f: Folding) -> dict:
    """Fixed part of the Omega chamber equals the Delta chamber in s-coordinates.

    With x in the fixed subspace written as theta @ V, the Omega chamber is
    {x_k >= 0} and the Delta chamber is {x(s_i) >= 0}; both cones are cut out
    by the same rays, so their normalised inequality rows must coincide.
    """
    fg = fold_generators(f)
    spec = fg.spec
    basis = [[spec(x) for x in row] for row in fixed_subspace(f)]
    dim = len(basis)
    if dim != f.delta.rank:
        raise IdentificationFailed(
            f"fixed subspace has dimension {dim}, expected {f.delta.rank}", {"dimension": dim}
        )
    omega_rows = [tuple(basis[t][k] for t in range(dim)) for k in range(f.n)]
    delta_rows = []
    for s in fg.simple_roots:
        row = []
        for t in range(dim):
            acc = spec.zero
            for k in range(f.n):
                if not s[k].is_zero():
                    acc = acc + s[k] * basis[t][k]
            row.append(acc)
        delta_rows.append(tuple(row))

    def rays(rows):
        out = set()
        for r in rows:
            if all(x.is_zero() for x in r):
                raise IdentificationFailed("zero inequality row", {"row": [str(x) for x in r]})
            lead = next(x for x in r if not x.is_zero())
            scale = abs(lead).inverse()
            out.add(tuple(x * scale for x in r))
        return out

    om, de = rays(omega_rows), rays(delta_rows)
    if om != de:
        raise IdentificationFailed(
            "Omega chamber restricted to the fixed subspace differs from the Delta chamber",
            {"omega_only": len(om - de), "delta_only": len(de - om)},
        )
    return {"folding": f.species.name, "fixed_dimension": dim, "inequalities": len(de), "identified": True}
