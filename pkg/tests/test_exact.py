import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from fusionfold.errors import DivByZero, FieldMismatch, InvalidOrder
from fusionfold.exact import (
    FieldElement,
    arith,
    compositum_order,
    embed,
    from_fractions,
    make_field,
    quantum_integer,
    two_cos_pi_over,
)

ORDERS = [3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 18, 30]


@pytest.mark.parametrize("m", list(range(3, 31)))
def test_minpoly_matches_sympy(m):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / m), x), x)
    coeffs = [int(c) for c in reversed(expected.all_coeffs())]
    assert tuple(coeffs) == make_field(m).minpoly


def test_small_fields():
    assert make_field(3).degree == 1
    assert make_field(3).gen == make_field(3).one
    f5 = make_field(5)
    g = f5.gen
    assert f5.degree == 2 and g * g == g + 1
    f4 = make_field(4)
    assert f4.degree == 2 and f4.gen * f4.gen == f4(2)


def test_golden_examples():
    f5 = make_field(5)
    phi = f5.gen
    assert arith(phi, phi, "mul") == phi + 1
    assert arith(phi, f5.zero, "add") == phi
    assert phi.cmp(f5.one) == 1
    assert quantum_integer(2, 5) == phi
    assert abs(float(phi) - (1 + math.sqrt(5)) / 2) < 1e-15


def test_quantum_integers():
    assert quantum_integer(3, 4) == make_field(4).one
    for h in range(3, 20):
        assert quantum_integer(1, h).is_zero() is False
        assert quantum_integer(1, h) == 1
        assert quantum_integer(h - 1, h) == 1
        for k in range(1, h):
            expect = math.sin(math.pi * k / h) / math.sin(math.pi / h)
            assert abs(float(quantum_integer(k, h)) - expect) < 1e-12


def test_errors():
    with pytest.raises(InvalidOrder):
        make_field(2)
    f5 = make_field(5)
    with pytest.raises(DivByZero):
        f5.zero.inverse()


def test_embedding_and_compositum():
    assert compositum_order([2, 3, 5, 4]) == 20
    f5, f20 = make_field(5), make_field(20)
    phi = f5.gen
    big = embed(phi, f20)
    assert big.field is f20
    assert abs(float(big) - float(phi)) < 1e-14
    assert big * big == big + 1
    r2 = make_field(4).gen
    with pytest.raises(FieldMismatch):
        phi + r2
    s = embed(phi, f20) + embed(r2, f20)
    assert abs(float(s) - (float(phi) + math.sqrt(2))) < 1e-13


def test_two_cos_in_larger_field():
    f = make_field(30)
    for m in (3, 5, 6, 10, 15, 30):
        assert abs(float(two_cos_pi_over(m, f)) - 2 * math.cos(math.pi / m)) < 1e-13


def test_json_roundtrip():
    f = make_field(7)
    x = from_fractions(f, [Fraction(1, 3), Fraction(-2, 5), Fraction(7, 2)])
    assert FieldElement.from_json(x.to_json()) == x


def elements(order):
    f = make_field(order)
    frac = st.fractions(min_value=-20, max_value=20, max_denominator=12)
    return st.lists(frac, min_size=f.degree, max_size=f.degree).map(lambda cs: from_fractions(f, cs))


@st.composite
def triple(draw):
    m = draw(st.sampled_from(ORDERS))
    e = elements(m)
    return draw(e), draw(e), draw(e)


@given(triple())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == a.field.zero
    if not a.is_zero():
        assert a * a.inverse() == a.field.one


@given(triple())
def test_embedding_is_a_ring_map(t):
    a, b, _ = t
    x, y = float(a), float(b)
    scale = max(1.0, abs(x), abs(y)) ** 2
    assert abs(float(a * b) - x * y) < 1e-9 * scale
    assert abs(float(a + b) - (x + y)) < 1e-9 * scale


@given(triple())
def test_sign_matches_float(t):
    a, b, _ = t
    d = a - b
    v = float(d)
    if abs(v) > 1e-9:
        assert d.sign() == (1 if v > 0 else -1)
    if d.is_zero():
        assert d.sign() == 0


def test_sign_of_tiny_difference():
    # difference far below double precision; high-precision sympy decides the sign
    f = make_field(30)
    g = f.gen
    approx = Fraction(2 * math.cos(math.pi / 30)).limit_denominator(10**15)
    truth = sympy.N(2 * sympy.cos(sympy.pi / 30) - sympy.Rational(approx.numerator, approx.denominator), 60)
    assert (g - f(approx)).sign() == (1 if truth > 0 else -1)


def test_field_mismatch_on_bad_type():
    with pytest.raises((FieldMismatch, TypeError)):
        make_field(5).gen + "x"
