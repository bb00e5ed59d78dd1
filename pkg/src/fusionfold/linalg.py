"""Exact Gaussian elimination over a real cyclotomic field."""
from __future__ import annotations

from .errors import DivByZero
from .exact import FieldElement, FieldSpec, coerce

Matrix = list[list[FieldElement]]


def to_field(rows, spec: FieldSpec) -> Matrix:
    return [[coerce(x, spec) for x in row] for row in rows]


def rref(rows: Matrix, spec: FieldSpec) -> tuple[Matrix, list[int]]:
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Matrix, spec: FieldSpec) -> int:
    return len(rref(rows, spec)[1])


def kernel(rows: Matrix, ncols: int, spec: FieldSpec) -> Matrix:
    """Basis of {v : rows @ v = 0}, one vector per free column."""
    if not rows:
        return [[spec.one if i == j else spec.zero for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, spec)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [spec.zero] * ncols
        v[f] = spec.one
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(m: Matrix, spec: FieldSpec) -> Matrix:
    n = len(m)
    aug = [list(row) + [spec.one if i == j else spec.zero for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, spec)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise DivByZero("matrix is singular")
    return [row[n:] for row in red]


def matvec(m: Matrix, v: list[FieldElement], spec: FieldSpec) -> list[FieldElement]:
    out = []
    for row in m:
        acc = spec.zero
        for a, b in zip(row, v):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


def matmul(a: Matrix, b: Matrix, spec: FieldSpec) -> Matrix:
    cols = list(zip(*b))
    return [matvec([list(c) for c in cols], row, spec) for row in a]
