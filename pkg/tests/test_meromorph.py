import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lfcalc.fieldchar import (COMPLEX, REAL, QI, AddChar, MultChar, abs_char, char_inv, legendre, padic,
                              padic_char, sgn, trivial)
from lfcalc.meromorph import (GC, GR, NA, MeroFactor, gauss_sum_na, mero_combine, mero_eval,
                              mero_order_at, tate_L, tate_eps, tate_gamma)

fracs = st.fractions(min_value=-2, max_value=2, max_denominator=10)


def real_chars():
    return st.builds(lambda t, d: MultChar(REAL, QI.of(t), delta=d), fracs, st.integers(0, 1))


def complex_chars():
    return st.builds(lambda t, n: MultChar(COMPLEX, QI.of(t), N=n), fracs, st.integers(-3, 3))


def padic_chars():
    from lfcalc.fieldchar import generator_orders

    def build(p, c, t, k):
        orders = generator_orders(p, c)
        return padic_char(p, t, c, tuple(Fraction((k + i) % o, o) for i, o in enumerate(orders)))
    return st.builds(build, st.sampled_from([2, 3, 5]), st.integers(0, 2), fracs, st.integers(0, 20))


any_char = st.one_of(real_chars(), complex_chars(), padic_chars())


def test_tate_L_examples():
    assert tate_L(trivial(REAL)).eval(2) == pytest.approx(1 / math.pi, rel=1e-12)
    assert tate_L(abs_char(padic(3))).eval(0) == pytest.approx(1.5, rel=1e-12)
    assert tate_L(legendre(3)).atoms == ()


def test_eps_examples():
    assert tate_eps(trivial(REAL), AddChar(REAL)).eval(0.3) == pytest.approx(1)
    assert tate_eps(trivial(padic(5)), AddChar(padic(5))).eval(0.7) == pytest.approx(1)
    assert tate_eps(sgn(), AddChar(REAL)).is_exponential


_QK = dict(epsabs=1e-15, epsrel=1e-13, limit=400)


def _quad_tate_sgn(s: float, phi):
    """int phi(x) sgn(x) |x|^s dx/|x| by scipy quadrature (phi odd, negligible past 8)."""
    a, _ = integrate.quad(lambda x: phi(x) * x ** (s - 1), 0, 1, **_QK)
    b, _ = integrate.quad(lambda x: phi(x) * x ** (s - 1), 1, 8, **_QK)
    return 2 * (a + b)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_eps_sgn_matches_quadrature_oracle():
    phi = lambda x: x * math.exp(-math.pi * x * x)

    def fphi(y):
        # odd part of int phi(x) e^{2 pi i x y} dx equals i times this
        v, _ = integrate.quad(lambda x: 2 * phi(x), 0, 8, weight="sin", wvar=2 * math.pi * y, **_QK)
        return v
    s = 0.4
    w = sgn()
    lhs = 1j * _quad_tate_sgn(1 - s, fphi) / tate_L(char_inv(w)).eval(1 - s)
    rhs0 = _quad_tate_sgn(s, phi) / tate_L(w).eval(s)
    assert tate_eps(w, AddChar(REAL)).eval(s) == pytest.approx(lhs / rhs0, abs=1e-8)


def test_gamma_examples():
    assert tate_gamma(trivial(padic(2)), AddChar(padic(2))).eval(0.5) == pytest.approx(1)
    assert tate_gamma(trivial(REAL), AddChar(REAL)).order_at(0) == 1
    w = MultChar(REAL, QI.of(Fraction(1, 3)), delta=1)
    prod = tate_gamma(w, AddChar(REAL)) * tate_gamma(char_inv(w), AddChar(REAL).conj()).reflect()
    assert prod.atoms == ()
    assert prod.eval(0.7 + 0.2j) == pytest.approx(1, abs=1e-12)


def test_gauss_sum_examples():
    assert abs(gauss_sum_na(legendre(5), AddChar(padic(5)))) == pytest.approx(math.sqrt(5), rel=1e-12)
    w3 = legendre(3)
    direct = sum(w3(x) * AddChar(padic(3))(Fraction(x, 3)) for x in (1, 2))
    assert gauss_sum_na(w3, AddChar(padic(3))) == pytest.approx(direct, abs=1e-12)
    with pytest.raises(ValueError):
        gauss_sum_na(trivial(padic(3)), AddChar(padic(3)))


def test_combine_and_order_examples():
    g = MeroFactor.of_atoms(GR(0))
    one = mero_combine(g, g, "div")
    assert one.atoms == () and one.constant == 1
    dup = MeroFactor.of_atoms(GR(Fraction(1, 4))) * MeroFactor.of_atoms(GR(Fraction(5, 4)))
    assert dup.eval(1.3) == pytest.approx(MeroFactor.of_atoms(GC(Fraction(1, 4))).eval(1.3), rel=1e-10)
    assert mero_order_at(g, 0) == -1
    assert mero_order_at(g, 2) == 0
    assert mero_order_at(MeroFactor.of_atoms(NA(2, 0)), 0) == -1


def test_eval_examples():
    assert mero_eval(MeroFactor.of_atoms(GR(0)), 1) == pytest.approx(1)
    assert mero_eval(MeroFactor.of_atoms(GC(0)), 1) == pytest.approx(1 / math.pi)
    assert mero_eval(MeroFactor.of_atoms(NA(2, 0)), 1) == pytest.approx(2)
    with pytest.raises(ValueError):
        mero_eval(MeroFactor.of_atoms(GR(0)), 0)


def test_json_roundtrip():
    f = tate_gamma(MultChar(REAL, QI.of(Fraction(1, 3)), delta=1), AddChar(REAL))
    assert MeroFactor.from_json(f.to_json()) == f


GRID = [0.13 + 0.37j * k + 0.071 * k for k in range(20)]


@settings(max_examples=40, deadline=None)
@given(any_char)
def test_gamma_reciprocity_grid(w):
    psi = AddChar(w.field)
    g1 = tate_gamma(w, psi)
    g2 = tate_gamma(char_inv(w), psi.conj())
    for s in GRID:
        if g1.order_at(QI(Fraction(s.real).limit_denominator(10**6))) != 0:
            continue
        assert g1.eval(s) * g2.eval(1 - s) == pytest.approx(1, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(any_char)
def test_eps_conjugation(w):
    psi = AddChar(w.field)
    lhs = tate_eps(w, psi.conj())
    rhs = tate_eps(w, psi) * MeroFactor(w.sign_value())
    assert lhs.atoms == rhs.atoms and lhs.base == rhs.base
    assert lhs.constant == pytest.approx(rhs.constant, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(any_char, st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_gamma_nonvanishing_strip(w, s0):
    re = w.t.re
    if -re < s0 < 1 - re:
        assert tate_gamma(w, AddChar(w.field)).order_at(s0) == 0


@settings(max_examples=40, deadline=None)
@given(any_char, any_char, st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_order_additivity(a, b, s0):
    fa, fb = tate_gamma(a, AddChar(a.field)), tate_L(b)
    assert (fa * fb).order_at(s0) == fa.order_at(s0) + fb.order_at(s0)


@settings(max_examples=25, deadline=None)
@given(st.one_of(real_chars(), complex_chars()), st.integers(-3, 2))
def test_numeric_order_consistency(w, j):
    f = tate_gamma(w, AddChar(w.field)) * tate_L(w)
    s0 = Fraction(j) - w.t.re
    if w.t.im != 0:
        return
    k = f.order_at(s0)
    num = f.numeric_order(s0)
    assert num == pytest.approx(k, abs=0.05 * max(1, abs(k)))
