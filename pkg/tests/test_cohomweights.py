from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfcalc.cohomweights import (InfinityType, PureWeight, character_of, chi_decompose,
                                 critical_places, d_field, d_infty, omega_const, standard_L_dual,
                                 standard_L_pi_mu, symplectic_check, xi_ratio, zeta_mu)
from lfcalc.factorcalc import is_eta_symmetric
from lfcalc.fieldchar import COMPLEX, REAL, MultChar, QI, sgn, trivial
from lfcalc.meromorph import GC, MeroFactor

F = Fraction


def symplectic_weights(n, lo=-3, hi=3):
    """All dominant length-2n vectors in [lo, hi] with constant mirror sums."""
    from itertools import combinations_with_replacement
    out = []
    for v in combinations_with_replacement(range(hi, lo - 1, -1), 2 * n):
        if len({v[i] + v[2 * n - 1 - i] for i in range(n)}) == 1:
            out.append(v)
    return out


def test_symplectic_examples():
    ws, etas = symplectic_check(PureWeight.real((1, 0)))
    assert ws == [1] and etas[0] == MultChar(REAL, QI.of(1), delta=1)
    assert symplectic_check(PureWeight.real((2, 1, 1, 0)))[0] == [2]
    assert symplectic_check(PureWeight.real((2, 1, 1, 1))) is None
    with pytest.raises(ValueError):
        PureWeight.real((2, 0, 1, 0))


def test_zeta_mu_examples():
    z = zeta_mu(PureWeight.real((1, 0)))[0]
    assert (z[1].delta, z[1].t.re, z[2].delta, z[2].t.re) == (1, F(3, 2), 0, F(-1, 2))
    z0 = zeta_mu(PureWeight.real((0, 0)))[0]
    assert [c.t.re for c in z0.chars] == [F(1, 2), F(-1, 2)]
    _, etas = symplectic_check(PureWeight.real((1, 0)))
    assert is_eta_symmetric(z, etas[0])


def test_chi_decompose_examples():
    t = chi_decompose([MultChar(REAL, QI.of(1), delta=1)])
    assert t.dchi == (1,) and t.quad == (1,)
    t = chi_decompose([sgn()])
    assert t.dchi == (0,) and t.quad == (-1,)
    t = chi_decompose([MultChar(COMPLEX, QI.of(1), N=2)])
    assert t.dchi == (2, 0) and t.quad == (1,)
    with pytest.raises(ValueError):
        chi_decompose([MultChar(REAL, QI.of(F(1, 2)))])


def test_omega_examples():
    assert omega_const(PureWeight.real((0, 0)), InfinityType((0,))) == 1
    assert omega_const(PureWeight.real((1, 0)), InfinityType((0,))) == 1j


def test_xi_ratio_examples():
    assert xi_ratio(PureWeight.real((0, 0)), trivial(REAL), 0.3) == pytest.approx(1, abs=1e-12)
    mu = PureWeight.real((1, 0))
    for s in (0.3, 1.7 + 0.4j):
        assert xi_ratio(mu, trivial(REAL), s) == pytest.approx(-1j, abs=1e-8)


def test_standard_L_examples():
    assert standard_L_pi_mu(PureWeight.real((1, 0)), trivial(REAL)) == MeroFactor.of_atoms(GC(F(3, 2)))
    assert standard_L_pi_mu(PureWeight.real((0, 0)), trivial(REAL)) == MeroFactor.of_atoms(GC(F(1, 2)))
    mu = PureWeight.real((3, 1, 0, -2))
    chi = MultChar(REAL, QI.of(2))
    dual = standard_L_dual(mu, chi)
    n, v, d = 2, mu.mu[0], 2
    expect = MeroFactor.one()
    for i in range(1, n + 1):
        expect = expect * MeroFactor.of_atoms(GC(-v[2 * n - i] - d + F(2 * n + 1 - 2 * i, 2)))
    assert dual == expect


def test_critical_examples():
    assert critical_places(PureWeight.real((1, 0)), trivial(REAL)) == [F(-1, 2), F(1, 2)]
    assert critical_places(PureWeight.real((0, 0)), trivial(REAL)) == [F(1, 2)]
    assert critical_places(PureWeight.real((2, 0)), trivial(REAL)) == [F(-3, 2), F(-1, 2), F(1, 2)]


def test_d_field_examples():
    assert d_field("R", 2) == 5 and d_field("C", 2) == 7
    assert d_infty(["real"], 1) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_zeta_mu_always_symmetric(n):
    for v in symplectic_weights(n):
        mu = PureWeight.real(v)
        _, etas = symplectic_check(mu)
        assert is_eta_symmetric(zeta_mu(mu)[0], etas[0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(symplectic_weights(1) + symplectic_weights(1)), min_size=2, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.randoms(use_true_random=False))
def test_omega_permutation_invariance(vs, ds, rnd):
    k = len(vs)
    mu = PureWeight.real(*vs)
    tau = InfinityType(tuple(ds[:k]))
    order = list(range(k))
    rnd.shuffle(order)
    mu2 = PureWeight.real(*[vs[i] for i in order])
    tau2 = InfinityType(tuple(ds[i] for i in order))
    assert omega_const(mu, tau) == omega_const(mu2, tau2)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(symplectic_weights(2)), st.integers(-3, 3), st.integers(-4, 4), st.integers(1, 3))
def test_omega_shift_law(v, d, j, places):
    mu = PureWeight.real(*([v] * places))
    t0 = InfinityType((d,) * places)
    t1 = InfinityType((d + j,) * places)
    assert omega_const(mu, t1) == pytest.approx(1j ** (j * mu.n * places) * omega_const(mu, t0))


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 1))
def test_character_roundtrip(a, b, q):
    chars = [MultChar(REAL, QI.of(a), delta=(a + q) % 2), MultChar(COMPLEX, QI.of(F(a + b, 2)), N=a - b)]
    tau = chi_decompose(chars)
    assert character_of(tau, ["real", "complex"]) == chars
