from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lfcalc.fieldchar import (COMPLEX, REAL, QI, AddChar, LocalField, MultChar, abs_char, char_inv,
                              char_mul, char_re, legendre, padic, padic_char, parse_qi, qi_json, sgn,
                              trivial)

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def test_char_re_examples():
    assert char_re(legendre(5)) == 0
    assert char_re(abs_char(REAL, Fraction(-1, 2))) == Fraction(-1, 2)


def test_char_eval_examples():
    assert sgn()(-2) == pytest.approx(-1)
    assert MultChar(COMPLEX, QI.of(1))(1 + 1j) == pytest.approx(2)
    assert abs_char(padic(3))(Fraction(1, 9)) == pytest.approx(9)


def test_char_eval_zero_raises():
    with pytest.raises(ValueError):
        trivial(REAL)(0)


def test_standard_psi_conductor_zero():
    psi = AddChar(padic(5))
    for x in (0, 1, 7, Fraction(3, 2), -4):
        assert psi(x) == pytest.approx(1)
    assert abs(psi(Fraction(1, 5)) - 1) > 0.1


def test_field_parse_roundtrip():
    for text in ("R", "C", "Q_3", "Qp7"):
        F = LocalField.parse(text)
        assert LocalField.from_json(F.to_json()) == F
    with pytest.raises(ValueError):
        LocalField.parse("Z")


def test_parse_qi():
    assert parse_qi("1/3+1/2i") == QI(Fraction(1, 3), Fraction(1, 2))
    assert parse_qi("-0.1") == QI(Fraction(-1, 10))
    assert parse_qi("2i") == QI(0, 2)
    assert qi_json(QI(Fraction(1, 2), Fraction(-1, 3))) == "1/2-1/3i"


def _chars(draw_t, field):
    return st.builds(lambda t, d: MultChar(field, QI.of(t), delta=d) if field.kind == "R"
                     else MultChar(field, QI.of(t), N=d), draw_t, st.integers(0 if field.kind == "R" else -3,
                                                                              1 if field.kind == "R" else 3))


@settings(max_examples=60, deadline=None)
@given(_chars(fracs, REAL), _chars(fracs, REAL),
       st.floats(0.05, 20) | st.floats(-20, -0.05), st.floats(0.05, 20) | st.floats(-20, -0.05))
def test_multiplicative_real(a, b, x, y):
    assert a(x * y) == pytest.approx(a(x) * a(y), rel=1e-12)
    assert char_mul(a, b)(x) == pytest.approx(a(x) * b(x), rel=1e-12)
    assert char_re(char_mul(a, b)) == char_re(a) + char_re(b)


@settings(max_examples=60, deadline=None)
@given(_chars(fracs, COMPLEX), st.complex_numbers(min_magnitude=0.1, max_magnitude=5),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=5))
def test_multiplicative_complex(a, z, w):
    assert a(z * w) == pytest.approx(a(z) * a(w), rel=1e-11)
    assert abs(a(z)) == pytest.approx(abs(z) ** (2 * float(char_re(a))), rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 3), fracs, st.integers(1, 200), st.integers(1, 200),
       st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 50))
def test_multiplicative_padic(p, c, t, u, v, e1, e2, k):
    from lfcalc.fieldchar import generator_orders
    orders = generator_orders(p, c)
    w = padic_char(p, t, c, tuple(Fraction((k + i) % o, o) for i, o in enumerate(orders)))
    if u % p == 0 or v % p == 0:
        return
    x, y = Fraction(u) * Fraction(p) ** e1, Fraction(v) * Fraction(p) ** e2
    assert w(x * y) == pytest.approx(w(x) * w(y), rel=1e-12)
    assert char_inv(w)(x) * w(x) == pytest.approx(1, rel=1e-12)
