import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfcalc.factorcalc import InducedTuple, tuple_from_exponents
from lfcalc.fieldchar import REAL, MultChar, QI
from lfcalc.sections import (CellSection, KSection, bump_cell, check_equivariance, gaussian_cell,
                             group_elements, sigma_matrix)

exps = st.fractions(min_value=-1, max_value=1, max_denominator=9)


def test_group_elements_examples():
    g2 = group_elements(2)
    assert (g2.sigma == np.eye(2)).all() and (g2.z == np.eye(2)).all()
    assert (g2.tau == np.array([[0, 1], [1, 0]])).all()
    g4 = group_elements(4)
    expect = np.zeros((4, 4), dtype=int)
    expect[:2, :2] = np.eye(2)
    expect[2:, 2:] = [[0, 1], [1, 0]]
    assert (g4.z == expect).all()
    assert [int(np.argmax(r)) + 1 for r in sigma_matrix(4)] == [1, 3, 2, 4]
    with pytest.raises(ValueError):
        group_elements(0)


@pytest.mark.parametrize("m", range(1, 9))
def test_group_elements_shape(m):
    ge = group_elements(m)
    mats = [ge.sigma, ge.tau, ge.z, ge.w] + ([ge.gamma, ge.gamma_prime] if m % 2 == 0 else [])
    for M in mats:
        assert set(np.unique(M)) <= {-1, 0, 1}
    for P in (ge.sigma, ge.tau, ge.w):
        assert (P.sum(axis=0) == 1).all() and (P.sum(axis=1) == 1).all()
    assert round(abs(np.linalg.det(ge.z))) == 1


@settings(max_examples=30, deadline=None)
@given(exps, exps, st.integers(0, 1), st.integers(0, 1), st.integers(0, 10**6))
def test_ksection_equivariance(a, b, d1, d2, seed):
    xi = tuple_from_exponents(REAL, [a, b], [d1, d2])
    par = (d1 + d2) % 2
    f = KSection(xi, {par: 1.0, par + 2: 0.4 - 0.2j, par - 4: 0.1})
    rng = np.random.default_rng(seed)
    assert check_equivariance(f, rng) < 1e-12
    assert check_equivariance(f.dual(), rng) < 1e-12
    k = np.array([[0.6, 0.8], [-0.8, 0.6]])
    assert check_equivariance(f.translate(k), rng) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.lists(exps, min_size=2, max_size=3), st.integers(0, 10**6))
def test_cell_equivariance(ts, seed):
    xi = tuple_from_exponents(REAL, ts, [1] + [0] * (len(ts) - 1))
    rng = np.random.default_rng(seed)
    f = gaussian_cell(xi, centers=tuple(0.3 * rng.normal(size=len(ts) * (len(ts) - 1) // 2)))
    assert check_equivariance(f, rng) < 1e-10
    assert check_equivariance(f.dual(), rng) < 1e-10


def test_ksection_parity_and_field_guards():
    xi = tuple_from_exponents(REAL, [0, 0], [1, 0])
    with pytest.raises(ValueError):
        KSection(xi, {0: 1.0})
    with pytest.raises(ValueError):
        KSection(tuple_from_exponents(REAL, [0, 0, 0]), {0: 1.0})
    with pytest.raises(ValueError):
        bump_cell(tuple_from_exponents(REAL, [0, 0, 0]))


def test_bump_flat_at_origin():
    f = bump_cell(tuple_from_exponents(REAL, [0.2, -0.2]))
    assert f.vanishes_at_origin and f(np.eye(2)) == 0
    u = np.array([[1.0, 1e-2], [0.0, 1.0]])
    assert abs(f(u)) < 1e-300 or abs(f(u)) < 1e-100
