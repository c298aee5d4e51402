from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from lfcalc.fieldchar import REAL, AddChar, char_inv, MultChar, QI, abs_char, padic, padic_char, trivial
from lfcalc.factorcalc import (InducedTuple, all_pairs, cross_pairs, d_xi, extsq_L, extsq_gamma_big,
                               extsq_modified_L, fj_factors, gamma_product, high_pairs,
                               in_omega_domain, induction_gamma_identity, is_eta_symmetric,
                               is_whittaker_type, js_gamma_assembled, js_gamma_full,
                               js_gamma_full_conj, low_pairs, modified_L_discrepancy,
                               tuple_from_exponents)
from lfcalc.meromorph import GR, MeroFactor, tate_gamma, tate_L

R = REAL
PSI = AddChar(R)
F = lambda a, b=1: Fraction(a, b)
exps = st.fractions(min_value=-1, max_value=1, max_denominator=13)


def real_tuple(ts, ds=None):
    return tuple_from_exponents(R, ts, ds)


def test_whittaker_examples():
    assert is_whittaker_type(real_tuple([F(3, 10), F(1, 10), F(-1, 10)]))
    assert is_whittaker_type(real_tuple([0, 0, 0]))
    res = is_whittaker_type(real_tuple([F(-1, 10), F(1, 10)]))
    assert not res and "sufficient" in res.note


def test_eta_symmetric_examples():
    chi = MultChar(R, QI.of(F(1, 7)), delta=1)
    eta = MultChar(R, QI.of(F(2, 5)))
    assert is_eta_symmetric(InducedTuple((chi, eta / chi)), eta)
    assert not is_eta_symmetric(real_tuple([0, 0, 0]), trivial(R))
    assert is_eta_symmetric(real_tuple([F(1, 10), F(2, 10), F(-2, 10), F(-1, 10)]), trivial(R))


def test_omega_examples():
    d = in_omega_domain(real_tuple([F(-1, 10), F(1, 10)]), trivial(R))
    assert (d.lower, d.upper, d.nonempty) == (F(1, 5), F(4, 5), True)
    d = in_omega_domain(real_tuple([F(-1, 4), F(1, 4)]), trivial(R))
    assert (d.lower, d.upper, d.nonempty) == (F(1, 2), F(1, 2), False)
    assert not in_omega_domain(real_tuple([F(1, 10), F(-1, 10)]), trivial(R)).nonempty


def test_extsq_L_examples():
    xi = real_tuple([F(1, 3), F(1, 5)])
    assert extsq_L(xi, trivial(R)) == tate_L(xi[1] * xi[2])
    xi3 = real_tuple([F(1, 3), F(1, 5), F(1, 7)])
    assert len(extsq_L(xi3, trivial(R)).atoms) == 3
    sym = real_tuple([F(1, 3), F(1, 5), F(-1, 5), F(-1, 3)])
    L = extsq_L(sym, trivial(R))
    assert dict(L.atoms).get(GR(0), 0) == 2


def test_modified_L_examples():
    xi2 = real_tuple([F(1, 3), F(1, 5)])
    assert extsq_modified_L(xi2, trivial(R), PSI) == extsq_L(xi2, trivial(R))
    assert low_pairs(4) == [(1, 2), (1, 3)]
    xi4 = real_tuple([F(1, 3), F(1, 5), F(1, 7), F(1, 11)])
    disc = modified_L_discrepancy(xi4, trivial(R), PSI)
    assert not disc.identical and abs(disc.sample_ratio - 1) > 1e-6


def test_gamma_big_examples():
    chi = MultChar(R, QI.of(F(1, 7)), delta=1)
    xi = InducedTuple((chi, trivial(R) / chi))
    G, d = extsq_gamma_big(xi, trivial(R), PSI)
    assert G == tate_gamma(trivial(R), PSI) and d == 1
    xi = real_tuple([F(1, 6), F(1, 6)])
    assert d_xi(xi, trivial(R)) == 0
    sym = real_tuple([F(1, 3), F(1, 5), F(-1, 5), F(-1, 3)])
    G, d = extsq_gamma_big(sym, trivial(R), PSI)
    assert cross_pairs(4) == [(1, 4), (2, 3), (2, 4)]
    assert d == 2
    with pytest.raises(ValueError):
        extsq_gamma_big(real_tuple([0, 0, 0]), trivial(R), PSI)


def test_js_gamma_two_routes_m3():
    rng = np.random.default_rng(5)
    xi = real_tuple([F(int(x), 97) for x in rng.integers(-40, 40, 3)], [1, 0, 1])
    eta = MultChar(R, QI.of(F(3, 11)), delta=1)
    a = js_gamma_full(xi, eta, PSI).eval(0.6)
    b = js_gamma_assembled(xi, eta, PSI).eval(0.6)
    assert a == pytest.approx(b, rel=1e-12)
    m2 = real_tuple([F(1, 3), F(1, 5)])
    assert js_gamma_full(m2, eta, PSI) == tate_gamma(m2[1] * m2[2] / eta, PSI)


def test_induction_identity_examples():
    rng = np.random.default_rng(11)
    xi = real_tuple([F(int(x), 89) for x in rng.integers(-30, 30, 2)], [1, 0])
    assert induction_gamma_identity(xi, trivial(R), PSI, 0.4).residual < 1e-10
    Q3 = padic(3)
    xi3 = InducedTuple(tuple(padic_char(3, F(int(x), 17)) for x in rng.integers(-8, 8, 4)))
    assert induction_gamma_identity(xi3, trivial(Q3), AddChar(Q3), 0.5 + 0.3j).residual < 1e-10
    with pytest.raises(ValueError):
        induction_gamma_identity(real_tuple([0, 0]), trivial(R), PSI, 0.0)


def test_fj_examples():
    xi = real_tuple([0, F(1, 3)])
    mod, std = fj_factors(xi, trivial(R), PSI)
    assert mod == tate_gamma(trivial(R), PSI)
    Q2 = padic(2)
    xi2 = tuple_from_exponents(Q2, [F(1, 5), F(2, 5)])
    _, std2 = fj_factors(xi2, trivial(Q2), AddChar(Q2))
    s = 0.7
    expected = 1 / ((1 - 2 ** (-0.2 - s)) * (1 - 2 ** (-0.4 - s)))
    assert std2.eval(s) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(ValueError):
        fj_factors(real_tuple([0, 0, 0]), trivial(R), PSI)


@pytest.mark.parametrize("m", range(1, 13))
def test_index_partition(m):
    parts = [set(low_pairs(m)), set(cross_pairs(m)), set(high_pairs(m))]
    assert sum(len(p) for p in parts) == len(all_pairs(m))
    assert set().union(*parts) == set(all_pairs(m))


@settings(max_examples=40, deadline=None)
@given(st.lists(exps, min_size=2, max_size=3), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_extsq_order_at_zero_symmetric(ts, ds):
    n = len(ts)
    ds = ds[:n]
    first = [MultChar(R, QI.of(t), delta=d) for t, d in zip(ts, ds)]
    chars = first + [trivial(R) / c for c in reversed(first)]
    xi = InducedTuple(tuple(chars))
    others = [xi[i] * xi[j] for i, j in all_pairs(2 * n) if j != 2 * n + 1 - i]
    assume(all(tate_L(w).order_at(0) == 0 for w in others))
    assert extsq_L(xi, trivial(R)).order_at(0) == -n


@settings(max_examples=40, deadline=None)
@given(st.lists(exps, min_size=2, max_size=4).filter(lambda v: len(v) % 2 == 0),
       st.lists(st.integers(0, 1), min_size=4, max_size=4), exps, exps)
def test_d_xi_retwisting(ts, ds, te, u):
    xi = real_tuple(ts, ds[:len(ts)])
    eta = MultChar(R, QI.of(te))
    tw = InducedTuple(tuple(c * abs_char(R, u) for c in xi.chars))
    eta_tw = eta * abs_char(R, 2 * u)
    assert d_xi(tw, eta_tw) == d_xi(xi, eta)


@settings(max_examples=60, deadline=None)
@given(st.lists(exps, min_size=2, max_size=5), exps)
def test_omega_shift_under_dual(ts, te):
    xi, eta = real_tuple(ts), MultChar(R, QI.of(te))
    a = in_omega_domain(xi, eta)
    b = in_omega_domain(xi.dual(), char_inv(eta))
    assert a.nonempty == b.nonempty
    if a.nonempty:
        assert (b.lower, b.upper) == (1 - a.upper, 1 - a.lower)


@settings(max_examples=30, deadline=None)
@given(st.lists(exps, min_size=2, max_size=4).filter(lambda v: len(v) % 2 == 0),
       st.lists(st.integers(0, 1), min_size=4, max_size=4), st.integers(0, 1))
def test_psibar_packaging(ts, ds, de):
    xi = real_tuple(ts, ds[:len(ts)])
    eta = MultChar(R, QI.of(F(1, 3)), delta=de)
    a = js_gamma_full_conj(xi, eta, PSI)
    b = gamma_product(xi, eta, PSI.conj())
    assert a.atoms == b.atoms and a.base == b.base
    assert a.constant == pytest.approx(b.constant, abs=1e-12)
