"""Fusion rings: TLJ_h, group rings of Z/n, Deligne products.

Structure constants are stored densely as ``nconst[a, b, c] = N_{ab}^c``.
Rings built here carry exact Frobenius-Perron dimensions of their basis
labels; rings loaded from JSON fall back to a certified float bracket.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidOrder, NotAnObjectClass, RingMismatch
from .exact import (
    FieldElement,
    FieldSpec,
    compositum_order,
    embed,
    make_field,
    quantum_integer,
)


@dataclass(frozen=True, eq=False)
class FusionRing:
    name: str
    labels: tuple[str, ...]
    unit: int
    nconst: np.ndarray = field(repr=False)
    dual: tuple[int, ...]
    field: FieldSpec
    # exact FPdim of each basis label, or None when only the float route is known
    basis_fpdims: tuple[FieldElement, ...] | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def basis(self, i: int) -> "RingElement":
        coeffs = [0] * self.rank
        coeffs[i] = 1
        return RingElement(self, tuple(coeffs))

    def element(self, spec: str | dict[str, int] | Sequence[int]) -> "RingElement":
        """Build a ring element from ``"1+7"``, ``"3++9"``, a label->count dict or a vector."""
        if isinstance(spec, str):
            return parse_element(self, spec)
        if isinstance(spec, dict):
            coeffs = [0] * self.rank
            for lab, n in spec.items():
                coeffs[self.index(lab)] += n
            return RingElement(self, tuple(coeffs))
        return RingElement(self, tuple(int(c) for c in spec))

    @property
    def one(self) -> "RingElement":
        return self.basis(self.unit)

    def left_matrix(self, x: "RingElement") -> np.ndarray:
        """Matrix of left multiplication by x in the label basis (columns = inputs)."""
        return np.einsum("a,abc->cb", np.asarray(x.coeffs, dtype=np.int64), self.nconst)

    def to_json(self) -> dict:
        a, b, c = np.nonzero(self.nconst)
        triples = [[int(i), int(j), int(k), int(self.nconst[i, j, k])] for i, j, k in zip(a, b, c)]
        out = {
            "name": self.name,
            "labels": list(self.labels),
            "unit": self.unit,
            "dual": list(self.dual),
            "field_order": self.field.order,
            "nconst": triples,
        }
        if self.basis_fpdims is not None:
            out["fpdims"] = [d.to_json() for d in self.basis_fpdims]
        return out

    @staticmethod
    def from_json(obj: dict) -> "FusionRing":
        r = len(obj["labels"])
        n = np.zeros((r, r, r), dtype=np.int64)
        for a, b, c, v in obj["nconst"]:
            n[a, b, c] = v
        dims = None
        if "fpdims" in obj:
            dims = tuple(FieldElement.from_json(d) for d in obj["fpdims"])
        return FusionRing(
            obj.get("name", "ring"),
            tuple(obj["labels"]),
            int(obj["unit"]),
            n,
            tuple(obj["dual"]),
            make_field(int(obj.get("field_order", 3))),
            dims,
        )


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: FusionRing
    coeffs: tuple[int, ...]

    def is_object_class(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def _check(self, other: "RingElement") -> None:
        if other.ring is not self.ring:
            raise RingMismatch(f"elements of {self.ring.name} and {other.ring.name} cannot be combined")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, tuple(a * other for a in self.coeffs))
        return tensor_decompose(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElement)
            and other.ring is self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ring), self.coeffs))

    def dual(self) -> "RingElement":
        coeffs = [0] * self.ring.rank
        for i, c in enumerate(self.coeffs):
            coeffs[self.ring.dual[i]] += c
        return RingElement(self.ring, tuple(coeffs))

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def __str__(self) -> str:
        parts = []
        for lab, c in zip(self.ring.labels, self.coeffs):
            if c == 1:
                parts.append(lab)
            elif c:
                parts.append(f"{c}*{lab}")
        return "+".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"RingElement({self.ring.name}: {self})"


_TERM = re.compile(r"^(?:(\d+)\*)?(.+)$")


def parse_element(ring: FusionRing, text: str) -> RingElement:
    """Parse sums like ``"1+7"``, ``"2*g1"`` and the run notation ``"3++9"`` = 3+5+7+9."""
    coeffs = [0] * ring.rank
    text = text.replace(" ", "")
    # expand a++b runs first; they only make sense for integer labels
    text = re.sub(
        r"(\d+)\+\+(?:\\cdots|\.\.\.|…)?(\d+)",
        lambda m: "+".join(str(k) for k in range(int(m.group(1)), int(m.group(2)) + 1, 2)),
        text,
    )
    for term in filter(None, text.split("+")):
        m = _TERM.match(term)
        n = int(m.group(1)) if m.group(1) else 1
        coeffs[ring.index(m.group(2))] += n
    return RingElement(ring, tuple(coeffs))


# ---------------------------------------------------------------- constructors

def tlj_rule(h: int, i: int, j: int) -> list[int]:
    """Labels k with [k] a summand of [i] x [j] in TLJ_h."""
    top = i + j - 1 if i + j <= h else 2 * h - (i + j) - 1
    return list(range(abs(i - j) + 1, top + 1, 2))


@lru_cache(maxsize=None)
def tlj(h: int) -> FusionRing:
    if not isinstance(h, int) or h < 3:
        raise InvalidOrder(f"TLJ_h needs h >= 3, got {h!r}")
    r = h - 1
    n = np.zeros((r, r, r), dtype=np.int64)
    for i in range(1, h):
        for j in range(1, h):
            for k in tlj_rule(h, i, j):
                n[i - 1, j - 1, k - 1] = 1
    dims = tuple(quantum_integer(k, h) for k in range(1, h))
    return FusionRing(f"TLJ_{h}", tuple(str(k) for k in range(1, h)), 0, n, tuple(range(r)), make_field(h), dims)


@lru_cache(maxsize=None)
def vec_cyclic(n: int) -> FusionRing:
    if not isinstance(n, int) or n < 1:
        raise InvalidOrder(f"cyclic group order must be >= 1, got {n!r}")
    nc = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            nc[a, b, (a + b) % n] = 1
    q = make_field(3)
    return FusionRing(
        f"Vec_Z{n}",
        tuple(f"g{a}" for a in range(n)),
        0,
        nc,
        tuple((-a) % n for a in range(n)),
        q,
        tuple(q.one for _ in range(n)),
    )


def deligne(f1: FusionRing, f2: FusionRing) -> FusionRing:
    r1, r2 = f1.rank, f2.rank
    n = np.einsum("abc,xyz->axbycz", f1.nconst, f2.nconst).reshape(r1 * r2, r1 * r2, r1 * r2)
    labels = tuple(f"({a},{b})" for a in f1.labels for b in f2.labels)
    dual = tuple(f1.dual[a] * r2 + f2.dual[b] for a in range(r1) for b in range(r2))
    spec = make_field(compositum_order([f1.field.order, f2.field.order]))
    dims = None
    if f1.basis_fpdims is not None and f2.basis_fpdims is not None:
        dims = tuple(embed(x, spec) * embed(y, spec) for x in f1.basis_fpdims for y in f2.basis_fpdims)
    return FusionRing(f"{f1.name}x{f2.name}", labels, f1.unit * r2 + f2.unit, n, dual, spec, dims)


def ring_from_name(name: str) -> FusionRing:
    """``tlj:12``, ``vec:3`` and ``*``-joined Deligne products of those."""
    parts = name.split("*")
    rings = []
    for p in parts:
        kind, _, arg = p.partition(":")
        if kind == "tlj":
            rings.append(tlj(int(arg)))
        elif kind == "vec":
            rings.append(vec_cyclic(int(arg)))
        else:
            raise KeyError(f"unknown ring {p!r}")
    out = rings[0]
    for r in rings[1:]:
        out = deligne(out, r)
    return out


# ---------------------------------------------------------------- operations

def tensor_decompose(x: RingElement, y: RingElement) -> RingElement:
    if x.ring is not y.ring:
        raise RingMismatch(f"elements of {x.ring.name} and {y.ring.name} cannot be multiplied")
    a = np.asarray(x.coeffs, dtype=np.int64)
    b = np.asarray(y.coeffs, dtype=np.int64)
    z = np.einsum("a,b,abc->c", a, b, x.ring.nconst)
    return RingElement(x.ring, tuple(int(v) for v in z))


def fpdim(x: RingElement):
    """Frobenius-Perron dimension; exact when the ring carries exact label dimensions."""
    if not x.is_object_class():
        raise NotAnObjectClass(f"{x} has negative coefficients")
    ring = x.ring
    if ring.basis_fpdims is not None:
        total = ring.field.zero
        for c, d in zip(x.coeffs, ring.basis_fpdims):
            if c:
                total = total + d * c
        return total
    lo, hi = perron_bracket(ring.left_matrix(x))
    return (lo + hi) / 2


def fpdim_float(x: RingElement) -> float:
    """Perron eigenvalue of left multiplication, computed numerically."""
    m = x.ring.left_matrix(x).astype(float)
    return float(max(np.linalg.eigvals(m).real)) if m.size else 0.0


def perron_bracket(matrix: np.ndarray, iters: int = 500) -> tuple[float, float]:
    """Collatz-Wielandt bounds min (Av)_i/v_i <= lambda <= max (Av)_i/v_i."""
    a = np.asarray(matrix, dtype=float)
    # shift keeps the iteration primitive without changing the Perron vector
    b = a + np.eye(len(a))
    v = np.ones(len(a))
    for _ in range(iters):
        w = b @ v
        v = w / w.max()
    av = a @ v
    mask = v > 1e-300
    ratios = av[mask] / v[mask]
    return float(ratios.min()), float(ratios.max())


def check_ring_axioms(ring: FusionRing) -> list[str]:
    """Unit, duality pairing and associativity violations (empty list = valid)."""
    n = ring.nconst
    r = ring.rank
    u = ring.unit
    eye = np.eye(r, dtype=np.int64)
    problems = []
    if not np.array_equal(n[u], eye) or not np.array_equal(n[:, u, :], eye):
        problems.append("unit law fails")
    for x in range(r):
        if ring.dual[ring.dual[x]] != x:
            problems.append(f"dual is not an involution at {ring.labels[x]}")
    pairing = n[:, :, u]
    expected = np.zeros((r, r), dtype=np.int64)
    for x in range(r):
        expected[x, ring.dual[x]] = 1
    if not np.array_equal(pairing, expected):
        problems.append("duality pairing N_{x y}^1 = delta(y, x*) fails")
    lhs = np.einsum("xyw,wzv->xyzv", n, n)
    rhs = np.einsum("yzw,xwv->xyzv", n, n)
    if not np.array_equal(lhs, rhs):
        bad = np.argwhere(lhs != rhs)[0]
        problems.append("associativity fails at " + ",".join(ring.labels[i] for i in bad))
    if (n < 0).any():
        problems.append("negative structure constant")
    return problems


def dump_ring(ring: FusionRing) -> str:
    return json.dumps(ring.to_json(), sort_keys=True)
