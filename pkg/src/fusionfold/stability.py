"""K-level stability data for foldings.

Everything here acts on the Grothendieck group Z^{Q0} of the unfolded quiver:
central charges are row vectors, twists are integer matrices, and hearts are
tuples of simple classes.  The interval testbed models the abelian category of
a type A quiver through thin modules: a module is a support bitmask and its
subobjects are the successor-closed subsets of that support.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .coxeter import _imatrix_order, omega_reflections, root_system
from .errors import (
    DeformationFailure,
    DegenerateCharge,
    FiberNotDiscrete,
    SearchCapExceeded,
    TwistReflectionMismatch,
)
from .exact import FieldElement, FieldSpec
from .fusion import fpdim
from .linalg import kernel
from .species import Folding, catalog, unfold

FLOAT_TOL = 1e-9


# ------------------------------------------------------------ charge space

@dataclass(frozen=True)
class ChargeSpace:
    """Row vectors Z on Z^{Q0} with Z N_x = FPdim(x) Z for every label x."""

    basis: list[list[FieldElement]]
    spec: FieldSpec

    @property
    def dimension(self) -> int:
        return len(self.basis)


def fstable_charge_space(f: Folding) -> ChargeSpace:
    spec = f.ring.field
    ring = f.ring
    dims = [fpdim(ring.basis(i)) for i in range(ring.rank)]
    basis = []
    # every N_x preserves the fibers, so the system splits into fiber blocks
    for fib in f.fibers:
        rows = []
        for lab, d in zip(ring.labels, dims):
            mat = f.kaction[lab]
            for p in fib:
                row = [spec(int(mat[q, p])) for q in fib]
                row[fib.index(p)] = row[fib.index(p)] - d
                if any(not x.is_zero() for x in row):
                    rows.append(row)
        for v in kernel(rows, len(fib), spec):
            full = [spec.zero] * f.n
            for q, x in zip(fib, v):
                full[q] = x
            basis.append(full)
    return ChargeSpace(basis, spec)


def _is_fstable_row(f: Folding, z, exact: bool) -> bool:
    dims = f.label_fpdims()
    for lab, mat in f.kaction.items():
        d = dims[lab]
        if exact:
            for q in range(f.n):
                acc = d.field.zero
                for p in np.flatnonzero(mat[:, q]):
                    acc = acc + z[p] * int(mat[p, q])
                if acc != z[q] * d:
                    return False
        else:
            zz = np.asarray(z, dtype=complex)
            if not np.allclose(zz @ mat, float(d) * zz, atol=FLOAT_TOL * max(1.0, np.abs(zz).max())):
                return False
    return True


# ------------------------------------------------------------ twists

def twist_kmatrix(f: Folding, i: int) -> np.ndarray:
    """[X] -> [X] - chi(S_i, X)[S_i] with chi the symmetrised Euler form (the Cartan form)."""
    cartan = 2 * np.eye(f.n, dtype=np.int64) - np.abs(f.exchange_matrix)
    t = np.eye(f.n, dtype=np.int64)
    t[i, :] -= cartan[i, :]
    return t


def folded_twist(f: Folding, fiber: int) -> np.ndarray:
    out = np.eye(f.n, dtype=np.int64)
    for q in f.fibers[fiber]:
        out = out @ twist_kmatrix(f, q)
    return out


def _preserves_charges(f: Folding, t: np.ndarray, space: ChargeSpace) -> bool:
    for z in space.basis:
        moved = []
        for q in range(f.n):
            acc = space.spec.zero
            for p in np.flatnonzero(t[:, q]):
                acc = acc + z[p] * int(t[p, q])
            moved.append(acc)
        if not _is_fstable_row(f, moved, exact=True):
            return False
    return True


def check_twist_reflection(f: Folding) -> dict:
    """Twists equal reflections, folded twists satisfy the Delta relations and keep F-stable charges F-stable."""
    omega_rs = root_system(f.omega)
    cartan = 2 * np.eye(f.n, dtype=np.int64) - np.abs(f.exchange_matrix)
    refl = omega_reflections(f)
    for i in range(f.n):
        t = twist_kmatrix(f, i)
        field_refl = omega_rs.reflection_matrix(i)
        as_int = np.array([[int(x.as_fraction()) for x in row] for row in field_refl], dtype=np.int64)
        if not np.array_equal(t, as_int) or not np.array_equal(t, refl[i]):
            raise TwistReflectionMismatch(
                f"twist at {f.vertex_names[i]} differs from the reflection", {"vertex": f.vertex_names[i]}
            )
        if not np.array_equal(t.T @ cartan @ t, cartan):
            raise TwistReflectionMismatch(f"twist at {f.vertex_names[i]} does not preserve the Euler form")
    d = f.delta
    folded = [folded_twist(f, i) for i in range(d.rank)]
    orders = {}
    for i in range(d.rank):
        if _imatrix_order(folded[i]) != 2:
            raise TwistReflectionMismatch(f"folded twist {d.vertices[i]} is not an involution")
        for j in range(i + 1, d.rank):
            o = _imatrix_order(folded[i] @ folded[j])
            orders[f"{d.vertices[i]},{d.vertices[j]}"] = o
            if o != d.m(i, j):
                raise TwistReflectionMismatch(
                    "folded twists break a Coxeter relation",
                    {"pair": [d.vertices[i], d.vertices[j]], "expected": d.m(i, j), "found": o},
                )
    space = fstable_charge_space(f)
    for i, t in enumerate(folded):
        if not _preserves_charges(f, t, space):
            raise TwistReflectionMismatch(
                f"folded twist {d.vertices[i]} does not preserve F-stable charges", {"fiber": d.vertices[i]}
            )
    return {"folding": f.species.name, "twists": f.n, "pair_orders": orders, "fstable_dimension": space.dimension}


# ------------------------------------------------------------ hearts

@dataclass(frozen=True)
class HeartState:
    simples: tuple[tuple[int, ...], ...]
    fibers: tuple[tuple[int, ...], ...]


def standard_heart(f: Folding) -> HeartState:
    eye = np.eye(f.n, dtype=np.int64)
    return HeartState(tuple(tuple(int(x) for x in row) for row in eye), f.fibers)


def tilt_heart_orbit(f: Folding, h: HeartState, fiber: int, direction: str = "forward") -> HeartState:
    """Simple tilt at a whole fiber, seen on K as the product of reflections in its simples.

    Forward and backward tilts induce the same map on classes; the direction
    is accepted for symmetry with the categorical statement.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    cartan = 2 * np.eye(f.n, dtype=np.int64) - np.abs(f.exchange_matrix)
    vecs = [np.array(h.simples[k], dtype=np.int64) for k in h.fibers[fiber]]
    for a, b in itertools.combinations(range(len(vecs)), 2):
        if vecs[a] @ cartan @ vecs[b] != 0:
            raise FiberNotDiscrete(
                "fiber simples are not orthogonal", {"fiber": fiber, "pair": [int(h.fibers[fiber][a]), int(h.fibers[fiber][b])]}
            )
    out = []
    for s in h.simples:
        v = np.array(s, dtype=np.int64)
        for r in vecs:
            v = v - int(r @ cartan @ v) * r
        out.append(tuple(int(x) for x in v))
    return HeartState(tuple(out), h.fibers)


def heart_orbit(f: Folding, cap: int = 1_000_000) -> dict:
    """Closure of the standard heart under fiber tilts; every class must stay a root."""
    start = standard_heart(f)
    roots = {tuple(int(x) for x in r[:, 0]) for r in root_system(f.omega).roots_int}
    seen = {start.simples}
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for i in range(len(f.fibers)):
                t = tilt_heart_orbit(f, h, i)
                if t.simples not in seen:
                    bad = [s for s in t.simples if s not in roots]
                    if bad:
                        raise FiberNotDiscrete("tilted heart has a simple class that is not a root", {"class": list(bad[0])})
                    seen.add(t.simples)
                    nxt.append(t)
                    if len(seen) > cap:
                        raise SearchCapExceeded(f"heart orbit exceeds {cap}")
        frontier = nxt
    return {"folding": f.species.name, "orbit_size": len(seen)}


# ------------------------------------------------------------ central charges

@dataclass(frozen=True, eq=False)
class CentralCharge:
    """Z on Z^{Q0}; ``re``/``im`` are FieldElements (exact) or floats."""

    re: tuple
    im: tuple
    exact: bool

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([float(a) + 1j * float(b) for a, b in zip(self.re, self.im)])

    def value(self, cls) -> tuple:
        if self.exact:
            spec = self.re[0].field
            re = spec.zero
            im = spec.zero
            for k, c in enumerate(cls):
                if c:
                    re = re + self.re[k] * int(c)
                    im = im + self.im[k] * int(c)
            return re, im
        z = complex(np.dot(np.asarray(cls, dtype=float), self.array))
        return z.real, z.imag

    def phase(self, cls) -> float:
        re, im = self.value(cls)
        return _phase_float(float(re), float(im))

    def is_fstable(self, f: Folding) -> bool:
        if self.exact:
            return _is_fstable_row(f, self.re, True) and _is_fstable_row(f, self.im, True)
        return _is_fstable_row(f, list(self.array), False)

    def to_json(self) -> dict:
        if self.exact:
            return {"re": [x.to_json() for x in self.re], "im": [x.to_json() for x in self.im]}
        return {"re": [float(x) for x in self.re], "im": [float(x) for x in self.im]}


def float_charge(values) -> CentralCharge:
    vals = [complex(v) for v in values]
    return CentralCharge(tuple(v.real for v in vals), tuple(v.imag for v in vals), False)


def _phase_float(re: float, im: float) -> float:
    if abs(im) <= FLOAT_TOL * max(1.0, abs(re)) and re > 0:
        return 0.0
    return math.atan2(im, re) / math.pi


def _in_upper(re, im, exact: bool) -> bool:
    """Membership in R_{>0} e^{i pi phi}, phi in [0, 1)."""
    if exact:
        return im.sign() > 0 or (im.is_zero() and re.sign() > 0)
    scale = max(1.0, abs(re), abs(im))
    return im > FLOAT_TOL * scale or (abs(im) <= FLOAT_TOL * scale and re > FLOAT_TOL * scale)


def _cmp_phase(z1, z2, exact: bool) -> int:
    """Sign of phase(z1) - phase(z2) for two values in the closed upper half plane."""
    (a, b), (c, d) = z1, z2
    cross = c * b - d * a
    if exact:
        return cross.sign()
    scale = math.hypot(a, b) * math.hypot(c, d)
    if abs(cross) <= FLOAT_TOL * max(scale, 1e-300):
        return 0
    return 1 if cross > 0 else -1


# ------------------------------------------------------------ interval testbed

@dataclass(frozen=True, eq=False)
class Interval:
    copy: int
    a: int
    b: int
    mask: int
    cls: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.copy}:[{self.a},{self.b}]"


@dataclass(eq=False)
class Testbed:
    """Thin modules over a disjoint union of oriented type A quivers."""

    folding: Folding
    orientation: str
    arrows: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]
    intervals: tuple[Interval, ...]
    _subs: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.folding.n

    def cls(self, mask: int) -> np.ndarray:
        return np.array([(mask >> k) & 1 for k in range(self.n)], dtype=np.int64)

    def subobjects(self, mask: int) -> list[int]:
        """Nonempty successor-closed subsets of a support (the support itself included)."""
        if mask in self._subs:
            return self._subs[mask]
        verts = [k for k in range(self.n) if mask >> k & 1]
        inner = [(u, v) for u, v in self.arrows if mask >> u & 1 and mask >> v & 1]
        out = []
        for bits in range(1, 1 << len(verts)):
            sub = 0
            for pos, k in enumerate(verts):
                if bits >> pos & 1:
                    sub |= 1 << k
            if all(not (sub >> u & 1) or (sub >> v & 1) for u, v in inner):
                out.append(sub)
        self._subs[mask] = out
        return out


def _paths_of(f: Folding) -> list[list[int]]:
    g = f.omega.graph
    paths = []
    for comp in f.omega.components():
        if any(g.degree(v) > 2 for v in comp):
            raise ValueError("testbed needs every component of the unfolded quiver to be of type A")
        ends = sorted(v for v in comp if g.degree(v) <= 1)
        path = [ends[0]]
        while len(path) < len(comp):
            nxt = [u for u in g.neighbors(path[-1]) if u not in path]
            path.append(nxt[0])
        paths.append(path)
    return paths


def build_testbed(f: Folding, orientation: str = "unfolded") -> Testbed:
    paths = _paths_of(f)
    if orientation == "unfolded":
        arrows = tuple(sorted((s, d) for s, d, _ in f.arrows))
    elif orientation == "linear":
        arrows = tuple(sorted((p[i], p[i + 1]) for p in paths for i in range(len(p) - 1)))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    intervals = []
    for c, p in enumerate(paths):
        for a in range(len(p)):
            for b in range(a, len(p)):
                mask = 0
                for k in p[a : b + 1]:
                    mask |= 1 << k
                cls = tuple(int(mask >> k & 1) for k in range(f.n))
                intervals.append(Interval(c, a + 1, b + 1, mask, cls))
    return Testbed(f, orientation, arrows, tuple(tuple(p) for p in paths), tuple(intervals))


def interval_testbed(h: int, orientation: str = "unfolded") -> Testbed:
    """Thin-module testbed on the unfolding of tlj:I2(h), two copies of A_{h-1}."""
    return build_testbed(unfold(catalog(f"tlj:I2({h})")), orientation)


# ------------------------------------------------------------ HN filtrations

@dataclass(frozen=True)
class HNFactor:
    mask: int
    cls: tuple[int, ...]
    phase: float


def _values(z: CentralCharge, tb: Testbed, masks: list[int]):
    if z.exact:
        return [z.value(tb.cls(m)) for m in masks]
    bits = np.array([[(m >> k) & 1 for k in range(tb.n)] for m in masks], dtype=float)
    vals = bits @ z.array
    return list(zip(vals.real.tolist(), vals.imag.tolist()))


def _check_upper(z: CentralCharge, tb: Testbed, mask: int, val) -> None:
    if not _in_upper(val[0], val[1], z.exact):
        raise DegenerateCharge(
            "charge of a nonzero class is not in the upper half plane",
            {"class": [int(x) for x in tb.cls(mask)], "value": [float(val[0]), float(val[1])]},
        )


def max_destabilising(z: CentralCharge, tb: Testbed, mask: int) -> int:
    """Largest subobject of maximal phase."""
    subs = tb.subobjects(mask)
    vals = _values(z, tb, subs)
    best = 0
    for k in range(len(subs)):
        _check_upper(z, tb, subs[k], vals[k])
        c = _cmp_phase(vals[k], vals[best], z.exact)
        if c > 0 or (c == 0 and bin(subs[k]).count("1") > bin(subs[best]).count("1")):
            best = k
    return subs[best]


def hn_filtration(z: CentralCharge, tb: Testbed, m: Interval | int) -> list[HNFactor]:
    """Factors of the HN filtration in order of strictly decreasing phase."""
    mask = m.mask if isinstance(m, Interval) else m
    out: list[HNFactor] = []
    while mask:
        sub = max_destabilising(z, tb, mask)
        cls = tuple(int(x) for x in tb.cls(sub))
        out.append(HNFactor(sub, cls, z.phase(cls)))
        mask &= ~sub
    return out


def is_semistable(z: CentralCharge, tb: Testbed, mask: int) -> bool:
    subs = tb.subobjects(mask)
    vals = _values(z, tb, subs)
    whole = vals[subs.index(mask)]
    return all(_cmp_phase(v, whole, z.exact) <= 0 for v in vals)


def all_hn_chains(z: CentralCharge, tb: Testbed, mask: int) -> list[list[int]]:
    """Every filtration with semistable factors of strictly decreasing phase (exhaustive)."""
    out = []
    for sub in tb.subobjects(mask):
        if not is_semistable(z, tb, sub):
            continue
        if sub == mask:
            out.append([sub])
            continue
        rest = mask & ~sub
        head = z.value(tb.cls(sub))
        for chain in all_hn_chains(z, tb, rest):
            if _cmp_phase(z.value(tb.cls(chain[0])), head, z.exact) < 0:
                out.append([sub] + chain)
    return out


@dataclass(frozen=True)
class SliceEntry:
    interval: Interval
    semistable: bool
    phi_plus: float
    phi_minus: float


def slicing(z: CentralCharge, tb: Testbed) -> list[SliceEntry]:
    out = []
    for iv in tb.intervals:
        hn = hn_filtration(z, tb, iv)
        out.append(SliceEntry(iv, len(hn) == 1, hn[0].phase, hn[-1].phase))
    return out


def _nonneg_combination(target: np.ndarray, cands: list[np.ndarray], budget: list[int]) -> bool:
    if not target.any():
        return True
    budget[0] -= 1
    if budget[0] < 0:
        raise SearchCapExceeded("feasibility search exceeded its node budget")
    k = int(np.flatnonzero(target)[0])
    for c in cands:
        if c[k] > 0 and (c <= target).all():
            if _nonneg_combination(target - c, cands, budget):
                return True
    return False


def slicing_fstable_check(z: CentralCharge, tb: Testbed, budget: int = 100_000) -> dict:
    """For every semistable class a and label x, N_x a is a sum of semistable classes of a's phase."""
    f = tb.folding
    sl = slicing(z, tb)
    stable = [e for e in sl if e.semistable]
    values = {e.interval.mask: z.value(e.interval.cls) for e in stable}
    failures = []
    checked = 0
    for e in stable:
        va = values[e.interval.mask]
        same = [np.array(o.interval.cls) for o in stable if _cmp_phase(values[o.interval.mask], va, z.exact) == 0]
        alpha = np.array(e.interval.cls)
        for lab, mat in sorted(f.kaction.items()):
            target = mat @ alpha
            checked += 1
            if not _nonneg_combination(target, same, [budget]):
                failures.append({"class": e.interval.name, "label": lab, "image": [int(x) for x in target]})
    return {
        "passed": not failures,
        "semistable": len(stable),
        "checked": checked,
        "failures": failures[:10],
        "failure_count": len(failures),
        "fstable_charge": z.is_fstable(f),
    }


# ------------------------------------------------------------ cell coordinates

def cell_parametrize(f: Folding, theta) -> tuple[CentralCharge, dict]:
    """Z(S_k) = theta_{fold(k)} * FPdim(S_k) / (smallest FPdim in the fiber).

    ``theta`` holds one value per folded vertex: a complex number (float
    mode) or a pair (re, im) of exact scalars.  Values on the positive real
    axis are the closed edge of the half-open cell and are flagged.
    """
    if len(theta) != f.delta.rank:
        raise ValueError(f"need {f.delta.rank} coordinates, got {len(theta)}")
    exact = all(isinstance(t, tuple) for t in theta)
    boundary = []
    if exact:
        from .exact import make_field, compositum_order

        orders = [f.ring.field.order]
        for t in theta:
            for x in t:
                if isinstance(x, FieldElement):
                    orders.append(x.field.order)
        spec = make_field(compositum_order(orders))
        th = [(spec(a), spec(b)) for a, b in theta]
        for i, (a, b) in enumerate(th):
            if not _in_upper(a, b, True):
                raise DegenerateCharge(f"theta_{f.delta.vertices[i]} is outside the upper half plane")
            if b.is_zero():
                boundary.append(f.delta.vertices[i])
        re = tuple(th[f.fold_map[k]][0] * spec(f.fiber_weights[k]) for k in range(f.n))
        im = tuple(th[f.fold_map[k]][1] * spec(f.fiber_weights[k]) for k in range(f.n))
        z = CentralCharge(re, im, True)
    else:
        th = [complex(t) for t in theta]
        for i, t in enumerate(th):
            if not _in_upper(t.real, t.imag, False):
                raise DegenerateCharge(f"theta_{f.delta.vertices[i]} is outside the upper half plane")
            if abs(t.imag) <= FLOAT_TOL * max(1.0, abs(t.real)):
                boundary.append(f.delta.vertices[i])
        z = float_charge([th[f.fold_map[k]] * float(f.fiber_weights[k]) for k in range(f.n)])
    info = {"fstable": z.is_fstable(f), "boundary": boundary, "in_cell": True}
    if not info["fstable"]:
        raise DegenerateCharge("parametrised charge is not F-stable", info)
    return z, info


def cell_coordinates(f: Folding, z: CentralCharge) -> list:
    """Inverse of :func:`cell_parametrize` on F-stable charges."""
    out = []
    for fib in f.fibers:
        k = next(q for q in fib if f.fiber_weights[q] == 1)
        if z.exact:
            out.append((z.re[k], z.im[k]))
        else:
            out.append(complex(z.array[k]))
    return out


def wall_scan(f: Folding, theta: list[complex], delta: float = 1e-3) -> list[dict]:
    """Rotate one coordinate just below the real axis and look at the simple tilt there."""
    heart = standard_heart(f)
    out = []
    for i in range(f.delta.rank):
        th = list(theta)
        th[i] = abs(th[i]) * complex(math.cos(-math.pi * delta), math.sin(-math.pi * delta))
        z = float_charge([th[f.fold_map[k]] * float(f.fiber_weights[k]) for k in range(f.n)])
        exits = sorted(k for k in range(f.n) if not _in_upper(*z.value(np.eye(f.n, dtype=np.int64)[k]), False))
        tilted = tilt_heart_orbit(f, heart, i)
        inside = all(_in_upper(*z.value(s), False) for s in tilted.simples)
        out.append({"fiber": f.delta.vertices[i], "exits": exits, "exits_fiber": exits == sorted(f.fibers[i]), "tilted_inside": inside})
    return out


# ------------------------------------------------------------ deformation

def _random_theta(rng: np.random.Generator, d: int, eps: float) -> list[complex]:
    phases = rng.uniform(eps, 1 - eps, size=d)
    mags = rng.uniform(0.5, 2.0, size=d)
    return [m * complex(math.cos(math.pi * p), math.sin(math.pi * p)) for m, p in zip(mags, phases)]


def _within(tb: Testbed, z: CentralCharge, w: CentralCharge, bound: float) -> bool:
    for iv in tb.intervals:
        zv = complex(*z.value(iv.cls))
        wv = complex(*w.value(iv.cls))
        if abs(wv - zv) >= bound * abs(zv):
            return False
    return True


def deformation_experiment(
    f: Folding,
    trials: int = 100,
    eps: float = 0.1,
    seed: int = 0,
    orientation: str = "unfolded",
    negative_control: bool = True,
    raise_on_failure: bool = True,
) -> dict:
    """Sample F-stable Z and nearby F-stable W; check the slicing of W stays F-stable and close to Z.

    The random stream is numpy's default_rng(seed), consumed in trial order.
    """
    if not 0 < eps < 0.125:
        raise ValueError("epsilon must lie in (0, 1/8)")
    tb = build_testbed(f, orientation)
    rng = np.random.default_rng(seed)
    bound = math.sin(math.pi * eps / 2)
    d = f.delta.rank
    failures = []
    control_flags = 0
    max_shift = 0.0
    for trial in range(trials):
        theta = _random_theta(rng, d, eps)
        z, _ = cell_parametrize(f, theta)
        scale = 1.0
        while True:
            radii = rng.uniform(0, bound * scale, size=d)
            angles = rng.uniform(0, 2 * math.pi, size=d)
            th2 = [t * (1 + r * complex(math.cos(a), math.sin(a))) for t, r, a in zip(theta, radii, angles)]
            w, _ = cell_parametrize(f, th2)
            if _within(tb, z, w, bound):
                break
            scale /= 2
        check = slicing_fstable_check(w, tb)
        sz, sw = slicing(z, tb), slicing(w, tb)
        shift = max(max(abs(a.phi_plus - b.phi_plus), abs(a.phi_minus - b.phi_minus)) for a, b in zip(sz, sw))
        max_shift = max(max_shift, shift)
        if not check["passed"] or shift >= eps:
            failures.append({"trial": trial, "theta": [[t.real, t.imag] for t in theta], "shift": shift, "check": check})
        if negative_control:
            # perturb every unfolded vertex independently: leaves the F-stable subspace
            base = z.array
            while True:
                radii = rng.uniform(0, bound, size=f.n)
                angles = rng.uniform(0, 2 * math.pi, size=f.n)
                bad = float_charge(base * (1 + radii * np.exp(1j * angles)))
                if _within(tb, z, bad, bound):
                    break
            if not bad.is_fstable(f) and not slicing_fstable_check(bad, tb)["passed"]:
                control_flags += 1
    report = {
        "folding": f.species.name,
        "orientation": orientation,
        "trials": trials,
        "epsilon": eps,
        "seed": seed,
        "bound": bound,
        "failures": len(failures),
        "max_phase_shift": max_shift,
        "negative_control_flags": control_flags,
        "witnesses": failures[:5],
    }
    if failures and raise_on_failure:
        raise DeformationFailure(f"{len(failures)} of {trials} trials failed", report)
    return report
