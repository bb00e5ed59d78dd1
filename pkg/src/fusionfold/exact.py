"""Exact arithmetic in the real cyclotomic fields Q(2cos(pi/m)).

Elements are stored in the power basis of g = 2cos(pi/m) as an integer
numerator vector over a single positive denominator.  The minimal polynomial
of g is monic with integer coefficients, so products reduce without leaving
the integers.  Signs are decided by interval evaluation on dyadic brackets of
g that are refined until they exclude zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from .errors import DivByZero, FieldMismatch, InvalidIndex, InvalidOrder

Scalar = Union["FieldElement", int, Fraction]


# ---------------------------------------------------------------- polynomials
# Integer polynomials are tuples of coefficients, lowest degree first.

def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_exact_div(p, q):
    """Divide integer polynomial ``p`` by monic ``q``; the remainder must vanish."""
    p = list(p)
    dq = len(q) - 1
    quot = [0] * (len(p) - dq)
    for i in range(len(p) - 1, dq - 1, -1):
        c = p[i]
        if c:
            quot[i - dq] = c
            for j in range(dq + 1):
                p[i - dq + j] -= c * q[j]
    if any(p):
        raise ArithmeticError("non-exact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _poly_exact_div(p, cyclotomic_polynomial(d))
    return tuple(p)


def _dickson(k: int) -> list[int]:
    """Integer polynomial D_k with D_k(z + 1/z) = z^k + z^-k."""
    prev, cur = [2], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def _real_cyclotomic_minpoly(m: int) -> tuple[int, ...]:
    # Phi_{2m}(z) = z^d * Psi(z + 1/z) since Phi_{2m} is palindromic of degree 2d.
    phi = cyclotomic_polynomial(2 * m)
    d = (len(phi) - 1) // 2
    psi = [phi[d]] + [0] * d
    for k in range(1, d + 1):
        c = phi[d + k]
        if c:
            for i, a in enumerate(_dickson(k)):
                psi[i] += c * a
    while len(psi) > 1 and psi[-1] == 0:
        psi.pop()
    return tuple(psi)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# ---------------------------------------------------------------- fields

@dataclass(frozen=True)
class FieldSpec:
    """The field Q(2cos(pi/m)) with its distinguished real embedding."""

    order: int
    minpoly: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def generator_value(self) -> float:
        return 2 * math.cos(math.pi / self.order)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.degree, 1)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.degree - 1), 1)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(Fraction(-self.minpoly[0]))
        return FieldElement(self, (0, 1) + (0,) * (self.degree - 2), 1)

    def __call__(self, value: Scalar) -> "FieldElement":
        return coerce(value, self)

    def __repr__(self) -> str:
        return f"FieldSpec(Q(2cos(pi/{self.order})), degree={self.degree})"

    # Dyadic bracket [lo, hi] / 2**bits of the generator, refined on demand.
    def bracket(self, bits: int) -> tuple[int, int]:
        return _bracket(self, bits)


@lru_cache(maxsize=None)
def make_field(m: int) -> FieldSpec:
    """Return Q(2cos(pi/m)); m = 3 gives the rationals."""
    if not isinstance(m, int) or m < 3:
        raise InvalidOrder(f"field order must be an integer >= 3, got {m!r}")
    return FieldSpec(m, _real_cyclotomic_minpoly(m))


def _eval_sign_scaled(poly, num: int, bits: int) -> int:
    # sign of sum poly[j] * (num / 2^bits)^j, scaled by 2^(bits*deg)
    d = len(poly) - 1
    total = 0
    for j, c in enumerate(poly):
        if c:
            total += c * num**j * (1 << (bits * (d - j)))
    return (total > 0) - (total < 0)


_BRACKETS: dict[int, tuple[int, int, int]] = {}


def _bracket(spec: FieldSpec, bits: int) -> tuple[int, int]:
    cached = _BRACKETS.get(spec.order)
    if cached is not None and cached[0] >= bits:
        b, lo, hi = cached
        shift = b - bits
        return lo >> shift, -((-hi) >> shift)
    mp = spec.minpoly
    if cached is None:
        # g is the largest root; every other root is <= 2cos(3pi/m).
        mid = (2 * math.cos(math.pi / spec.order) + 2 * math.cos(3 * math.pi / spec.order)) / 2
        b0 = 8
        lo = math.floor(mid * (1 << b0))
        hi = 2 << b0
        if _eval_sign_scaled(mp, lo, b0) >= 0 or _eval_sign_scaled(mp, hi, b0) <= 0:
            raise ArithmeticError(f"could not bracket 2cos(pi/{spec.order})")
    else:
        b0, lo, hi = cached
    while b0 < bits:
        step = min(bits - b0, 64)
        lo <<= step
        hi <<= step
        b0 += step
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            s = _eval_sign_scaled(mp, mid, b0)
            if s > 0:
                hi = mid
            elif s < 0:
                lo = mid
            else:
                lo = hi = mid
        if lo == hi:
            hi = lo + 1  # exact dyadic root cannot occur for degree > 1
    _BRACKETS[spec.order] = (b0, lo, hi)
    return _bracket(spec, bits)


# ---------------------------------------------------------------- elements

class FieldElement:
    """Exact element of Q(2cos(pi/m))."""

    __slots__ = ("field", "nums", "den", "_hash")

    def __init__(self, field: FieldSpec, nums, den: int = 1, normalize: bool = True):
        if normalize:
            nums = tuple(nums)
            if den == 0:
                raise DivByZero("zero denominator")
            if den < 0:
                den = -den
                nums = tuple(-a for a in nums)
            g = den
            for a in nums:
                if g == 1:
                    break
                g = math.gcd(g, a)
            if g != 1:
                den //= g
                nums = tuple(a // g for a in nums)
            if not any(nums):
                den = 1
        self.field = field
        self.nums = nums
        self.den = den
        self._hash = None

    # -- basic views
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return Fraction(self.nums[0], self.den)

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            base = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if base and c == 1:
                terms.append(base)
            elif base and c == -1:
                terms.append("-" + base)
            else:
                terms.append(f"{c}{'*' + base if base else ''}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} [m={self.field.order}]" if self.field.degree > 1 else body

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.field.order, self.nums, self.den))
        return self._hash

    # -- coercion helpers
    def _lift(self, other) -> tuple["FieldElement", "FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return self, other
            if other.field.degree == 1:
                return self, coerce(other.as_fraction(), self.field)
            if self.field.degree == 1:
                return coerce(self.as_fraction(), other.field), other
            raise FieldMismatch(
                f"cannot combine elements of Q(2cos(pi/{self.field.order})) "
                f"and Q(2cos(pi/{other.field.order}))"
            )
        if isinstance(other, (int, Rational)):
            return self, coerce(other, self.field)
        return NotImplemented, NotImplemented

    # -- arithmetic
    def __add__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        if a.den == b.den:
            return FieldElement(a.field, [x + y for x, y in zip(a.nums, b.nums)], a.den)
        return FieldElement(
            a.field, [x * b.den + y * a.den for x, y in zip(a.nums, b.nums)], a.den * b.den
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.nums), self.den, normalize=False)

    def __sub__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, [x * other for x in self.nums], self.den)
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        d = a.field.degree
        if d == 1:
            return FieldElement(a.field, (a.nums[0] * b.nums[0],), a.den * b.den)
        prod = _poly_mul(a.nums, b.nums)
        mp = a.field.minpoly
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i]
            if c:
                base = i - d
                for j in range(d):
                    if mp[j]:
                        prod[base + j] -= c * mp[j]
        return FieldElement(a.field, prod[:d], a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivByZero("division by zero in Q(2cos(pi/%d))" % self.field.order)
        if self.field.degree == 1 or self.is_rational():
            return FieldElement(self.field, (self.den,) + (0,) * (self.field.degree - 1), self.nums[0])
        u = _poly_inverse_mod(list(self.coeffs), self.field.minpoly)
        return from_fractions(self.field, u)

    def __truediv__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return coerce(other, self.field) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order
    def sign(self) -> int:
        if not any(self.nums):
            return 0
        if self.field.degree == 1:
            return 1 if self.nums[0] > 0 else -1
        bits = 64
        while True:
            s = _interval_sign(self.nums, self.field, bits)
            if s:
                return s
            bits *= 2

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self.nums == other.nums and self.den == other.den
            if self.is_rational() and other.is_rational():
                return self.as_fraction() == other.as_fraction()
            if self.field.degree > 1 and other.field.degree > 1:
                return False
            return False
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        if self.field.degree == 1:
            return self.nums[0] / self.den
        lo, hi = self.field.bracket(64)
        g = Fraction(lo + hi, 1 << 65)
        acc = Fraction(0)
        for a in reversed(self.nums):
            acc = acc * g + a
        return float(acc / self.den)

    # -- serialization
    def to_json(self) -> dict:
        return {"m": self.field.order, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "FieldElement":
        spec = make_field(int(obj["m"]))
        return from_fractions(spec, [Fraction(c) for c in obj["coeffs"]])


def _interval_sign(nums, spec: FieldSpec, bits: int) -> int:
    lo, hi = spec.bracket(bits)
    d = len(nums)
    low = high = 0
    for i, a in enumerate(nums):
        if not a:
            continue
        scale = 1 << (bits * (d - 1 - i))
        if a > 0:
            low += a * lo**i * scale
            high += a * hi**i * scale
        else:
            low += a * hi**i * scale
            high += a * lo**i * scale
    if low > 0:
        return 1
    if high < 0:
        return -1
    return 0


def _poly_inverse_mod(a: list[Fraction], mod: tuple[int, ...]) -> list[Fraction]:
    """Inverse of ``a`` modulo the irreducible polynomial ``mod`` over Q."""

    def trim(p):
        p = list(p)
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        return p

    def divmod_(p, q):
        p = [Fraction(x) for x in p]
        q = trim(q)
        quot = [Fraction(0)] * max(1, len(p) - len(q) + 1)
        while len(p) >= len(q) and any(p):
            c = p[-1] / q[-1]
            k = len(p) - len(q)
            quot[k] = c
            for j, b in enumerate(q):
                p[k + j] -= c * b
            p = trim(p)
            if len(p) < len(q) or (len(p) == 1 and p[0] == 0):
                break
        return quot, trim(p)

    def sub(p, q):
        n = max(len(p), len(q))
        p = list(p) + [0] * (n - len(p))
        q = list(q) + [0] * (n - len(q))
        return trim([x - y for x, y in zip(p, q)])

    def mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return trim(out)

    r0, r1 = [Fraction(x) for x in mod], trim(a)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while any(r1):
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
    # r0 is a nonzero constant because mod is irreducible.
    c = r0[0]
    inv = [x / c for x in s0]
    d = len(mod) - 1
    return (inv + [Fraction(0)] * d)[:d]


def from_fractions(spec: FieldSpec, coeffs) -> FieldElement:
    coeffs = [Fraction(c) for c in coeffs] + [Fraction(0)] * (spec.degree - len(coeffs))
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return FieldElement(spec, [int(c * den) for c in coeffs[: spec.degree]], den)


def coerce(value: Scalar, spec: FieldSpec) -> FieldElement:
    if isinstance(value, FieldElement):
        if value.field == spec:
            return value
        if value.field.degree == 1:
            return coerce(value.as_fraction(), spec)
        if spec.order % value.field.order == 0:
            return embed(value, spec)
        raise FieldMismatch(f"{value} does not live in Q(2cos(pi/{spec.order}))")
    q = Fraction(value)
    return FieldElement(spec, (q.numerator,) + (0,) * (spec.degree - 1), q.denominator)


def embed(x: FieldElement, target: FieldSpec) -> FieldElement:
    """Map x from Q(2cos(pi/m)) into Q(2cos(pi/M)) for m dividing M."""
    src = x.field
    if src == target:
        return x
    if src.degree == 1:
        return coerce(x.as_fraction(), target)
    if target.order % src.order:
        raise FieldMismatch(f"Q(2cos(pi/{src.order})) is not a subfield of Q(2cos(pi/{target.order}))")
    image = poly_in_field(_dickson(target.order // src.order), target.gen)
    acc = target.zero
    for a in reversed(x.nums):
        acc = acc * image + a
    return acc / x.den


def poly_in_field(poly, x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for a in reversed(poly):
        acc = acc * x + a
    return acc


def two_cos_pi_over(m: int, spec: FieldSpec) -> FieldElement:
    """2cos(pi/m) as an element of ``spec`` (m = 2 gives 0)."""
    if m == 2:
        return spec.zero
    if m == 3:
        return spec.one
    return embed(make_field(m).gen, spec)


def compositum_order(orders) -> int:
    """Smallest field order whose field contains every 2cos(pi/m) listed."""
    big = [m for m in orders if m >= 4]
    out = 1
    for m in big:
        out = out * m // math.gcd(out, m)
    return out if big else 3


def arith(a: Scalar, b: Scalar, op: str):
    """Dispatch a named binary operation; ``cmp`` returns -1, 0 or 1."""
    if not isinstance(a, FieldElement) and isinstance(b, FieldElement):
        a = coerce(a, b.field)
    if not isinstance(a, FieldElement):
        raise TypeError("at least one operand must be a FieldElement")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "cmp":
        return a.cmp(b)
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=None)
def quantum_integer(k: int, h: int) -> FieldElement:
    """[k]_h = sin(k pi/h) / sin(pi/h) in Q(2cos(pi/h))."""
    if h < 3:
        raise InvalidOrder(f"h must be >= 3, got {h}")
    if not 1 <= k <= h - 1:
        raise InvalidIndex(f"quantum integer index {k} outside 1..{h - 1}")
    spec = make_field(h)
    prev, cur = spec.zero, spec.one
    two = spec.gen
    for _ in range(k - 1):
        prev, cur = cur, two * cur - prev
    return cur
