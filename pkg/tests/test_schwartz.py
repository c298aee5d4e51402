import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lfcalc.fieldchar import COMPLEX, REAL, AddChar, MultChar, QI, padic, padic_char
from lfcalc.schwartz import ShalikaElem, ball, gaussian, hermite, shalika_action

PSI = AddChar(REAL)
ETA = MultChar(REAL, QI.of(Fraction(3, 10)), delta=1)
P = 3
QP = padic(P)
PSI_P = AddChar(QP)
ETA_P = padic_char(P, Fraction(1, 4))


def oracle_fourier(f, y, odd):
    """int f(x) e^{2 pi i x y} dx for an even or odd real f, by scipy."""
    if odd:
        v, _ = integrate.quad(f, 0, 12, weight="sin", wvar=2 * math.pi * y, epsabs=1e-14, limit=400)
        return 2j * v
    v, _ = integrate.quad(f, 0, 12, weight="cos", wvar=2 * math.pi * y, epsabs=1e-14, limit=400)
    return 2 * v


def test_fourier_examples():
    g = gaussian(REAL)
    Fg = g.fourier(PSI)
    for y in np.linspace(-2, 2, 7):
        assert Fg([y]) == pytest.approx(g([y]), abs=1e-14)
    h1 = hermite(REAL, [1])
    Fh = h1.fourier(PSI)
    f = lambda x: h1([x]).real
    for y in np.linspace(-1.7, 1.9, 10):
        assert Fh([y]) == pytest.approx(oracle_fourier(f, y, odd=True), abs=1e-9)
    one = ball(P)
    F1 = one.fourier(PSI_P)
    for x in [Fraction(0), Fraction(1), Fraction(2, 1), Fraction(1, 3), Fraction(5, 9), Fraction(7)]:
        assert F1((x,)) == pytest.approx(one((x,)), abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.5, 2))
def test_fourier_matches_quadrature(k, b, u, a):
    phi = hermite(REAL, [k]).precompose([[a]], [b]).modulate([u])
    Fphi = phi.fourier(PSI)
    y = 0.37
    re, _ = integrate.quad(lambda x: (phi([x]) * np.exp(2j * np.pi * x * y)).real, -15, 15, limit=400)
    im, _ = integrate.quad(lambda x: (phi([x]) * np.exp(2j * np.pi * x * y)).imag, -15, 15, limit=400)
    assert Fphi([y]) == pytest.approx(re + 1j * im, abs=1e-8)


@pytest.mark.parametrize("F", [REAL, COMPLEX])
def test_double_fourier_and_plancherel(F):
    rng = np.random.default_rng(3)
    D = F.degree
    phi = hermite(F, [2] + [0] * (D - 1), coef=0.7).translate([0.3] if D == 1 else [0.3 + 0.1j]) \
        + gaussian(F).modulate([0.4] if D == 1 else [0.4 - 0.2j])
    psi = AddChar(F)
    FF = phi.fourier(psi).fourier(psi)
    for _ in range(5):
        x = rng.normal() if D == 1 else complex(*rng.normal(size=2))
        assert FF([x]) == pytest.approx(phi([-x]), abs=1e-12)
    assert phi.fourier(psi).l2_norm_sq() == pytest.approx(phi.l2_norm_sq(), rel=1e-8)


def test_plancherel_padic_exact():
    phi = ball(P, center=[Fraction(1, 3)], k=-1, coef=2.0) + ball(P, k=2).modulate([Fraction(2, 9)])
    assert phi.fourier(PSI_P).l2_norm_sq() == pytest.approx(phi.l2_norm_sq(), abs=1e-14)
    FF = phi.fourier(PSI_P).fourier(PSI_P)
    for x in [Fraction(1, 3), Fraction(-1, 3), Fraction(4, 3), Fraction(0), Fraction(9)]:
        assert FF((x,)) == pytest.approx(phi((-x,)), abs=1e-14)


def _rand_elem(rng, n, odd):
    g = np.eye(n) + 0.4 * rng.normal(size=(n, n))
    X = rng.normal(size=(n, n))
    if odd:
        return ShalikaElem.make(g, X, 0.6 * rng.normal(size=n), 0.6 * rng.normal(size=n))
    return ShalikaElem.make(g, X)


def _phi(n):
    return hermite(REAL, [1] + [0] * (n - 1)) + gaussian(REAL, n).translate([0.2] * n).scaled(0.5)


def test_shalika_examples():
    phi = _phi(2)
    pts = np.random.default_rng(0).normal(size=(4, 2))
    same = shalika_action(ShalikaElem.make(np.eye(2), np.zeros((2, 2))), phi, ETA, PSI)
    c = 0.23
    tr = shalika_action(ShalikaElem.make(np.eye(2), c * np.eye(2)), phi, ETA, PSI)
    for p in pts:
        assert same(list(p)) == pytest.approx(phi(list(p)), abs=1e-15)
        assert tr(list(p)) == pytest.approx(PSI(2 * c) * phi(list(p)), abs=1e-14)
    with pytest.raises(ValueError):
        shalika_action(ShalikaElem.make(np.zeros((2, 2)), np.zeros((2, 2))), phi, ETA, PSI)


@pytest.mark.parametrize("n,odd", [(1, False), (2, False), (1, True), (2, True)])
def test_shalika_homomorphism(n, odd):
    rng = np.random.default_rng(10 * n + odd)
    phi = _phi(n)
    for _ in range(3):
        h1, h2 = _rand_elem(rng, n, odd), _rand_elem(rng, n, odd)
        a = shalika_action(h1 * h2, phi, ETA, PSI)
        b = shalika_action(h1, shalika_action(h2, phi, ETA, PSI), ETA, PSI)
        for p in rng.normal(size=(5, n)):
            assert a(list(p)) == pytest.approx(b(list(p)), abs=1e-10)


@pytest.mark.parametrize("n,odd", [(1, False), (2, False), (1, True), (2, True)])
def test_shalika_intertwining(n, odd):
    # even lengths pair with F_psi, odd lengths with F_psibar
    rng = np.random.default_rng(7 + n + 5 * odd)
    phi = _phi(n)
    fpsi = PSI.conj() if odd else PSI
    for _ in range(2):
        h = _rand_elem(rng, n, odd)
        scale = abs(np.linalg.det(h.matrix())) ** 0.5
        lhs = shalika_action(h.hat(), phi.fourier(fpsi), ETA, PSI)
        rhs = shalika_action(h, phi, ETA, PSI, inverse=True).fourier(fpsi).scaled(scale)
        for p in 0.8 * rng.normal(size=(10, n)):
            assert lhs(list(p)) == pytest.approx(rhs(list(p)), abs=1e-9)


def _padic_elem(g, X, y=None, x=None):
    wrap = lambda v: np.array([[Fraction(v)]], dtype=object)
    if y is None:
        return ShalikaElem.make(wrap(g), wrap(X))
    return ShalikaElem.make(wrap(g), wrap(X), np.array([Fraction(y)], dtype=object),
                            np.array([Fraction(x)], dtype=object))


PADIC_PTS = [Fraction(0), Fraction(1, 3), Fraction(2), Fraction(-5, 9), Fraction(4, 27), Fraction(6)]


def test_shalika_padic_intertwining_even():
    phi = ball(P, center=[Fraction(1, 3)], k=0) + ball(P, k=1).modulate([Fraction(1, 9)]).scaled(0.5)
    g, X = Fraction(6, 5), Fraction(2, 9)
    h = _padic_elem(g, X)
    hhat = _padic_elem(1 / g, -X)
    scale = float(Fraction(1, 3))  # |det h|^{1/2} = |g|_3 = 1/3
    lhs = shalika_action(hhat, phi.fourier(PSI_P), ETA_P, PSI_P)
    rhs = shalika_action(h, phi, ETA_P, PSI_P, inverse=True).fourier(PSI_P).scaled(scale)
    for v in PADIC_PTS:
        assert lhs((v,)) == pytest.approx(rhs((v,)), abs=1e-12)


def test_shalika_padic_homomorphism_odd():
    phi = ball(P, center=[Fraction(1, 3)], k=0) + ball(P, k=-1).modulate([Fraction(1, 9)]).scaled(0.5)
    g1, X1, y1, x1 = Fraction(3, 2), Fraction(1, 9), Fraction(2, 3), Fraction(-1, 3)
    g2, X2, y2, x2 = Fraction(5, 9), Fraction(-4, 3), Fraction(1, 27), Fraction(7, 3)
    # product in the factored coordinates (n = 1)
    g = g1 * g2
    X = X2 + X1 + y1 * x2 / g1
    y = g1 * y2 + y1
    x = x1 + x2 / g1
    a = shalika_action(_padic_elem(g, X, y, x), phi, ETA_P, PSI_P)
    b = shalika_action(_padic_elem(g1, X1, y1, x1),
                       shalika_action(_padic_elem(g2, X2, y2, x2), phi, ETA_P, PSI_P), ETA_P, PSI_P)
    for v in PADIC_PTS:
        assert a((v,)) == pytest.approx(b((v,)), abs=1e-12)
