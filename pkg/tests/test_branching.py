from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from lfcalc.branching import (RectBranchQuery, balanced_shifts, brute_force_multiplicity,
                              is_balanced, restriction_multiplicity)
from lfcalc.cohomweights import InfinityType, PureWeight, symplectic_check


def dominant(n, lo=0, hi=3):
    return [v for v in combinations_with_replacement(range(hi, lo - 1, -1), 2 * n)]


WINDOW = [(v, a, b, n) for n in (1, 2) for v in dominant(n) for a in range(-4, 5) for b in range(-4, 5)]


def mult(v, a, b, n):
    return restriction_multiplicity(RectBranchQuery(v, a, b, n))


def test_restriction_examples():
    assert mult((1, 0), 0, 1, 1) == 1
    assert mult((1, 0), 2, -1, 1) == 0
    assert mult((1, 1, 0, 0), 1, 0, 2) == 1
    with pytest.raises(ValueError):
        RectBranchQuery((0, 1), 0, 0, 1)


def test_brute_force_examples():
    assert brute_force_multiplicity((1, 1, 0, 0), 0, 1, 2) == mult((1, 1, 0, 0), 0, 1, 2)
    for a in range(-1, 4):
        assert brute_force_multiplicity((3, 0), a, 3 - a, 1) == (1 if 0 <= a <= 3 else 0)
    with pytest.raises(ValueError):
        brute_force_multiplicity((30, 0), 15, 15, 1)


def test_balanced_examples():
    mu10 = PureWeight.real((1, 0))
    assert is_balanced(mu10, InfinityType((0,)))
    assert not is_balanced(mu10, InfinityType((1,)))
    assert is_balanced(PureWeight.real((0, 0)), InfinityType((0,)))
    assert balanced_shifts(mu10, InfinityType((0,))) == [-1, 0]
    assert balanced_shifts(PureWeight.real((2, 0)), InfinityType((0,))) == [-2, -1, 0]
    assert balanced_shifts(PureWeight.real((0, 0)), InfinityType((0,))) == [0]


def test_exhaustive_oracle_and_multiplicity_free():
    bad = [q for q in WINDOW if mult(*q) != brute_force_multiplicity(*q)]
    assert bad == []
    assert {mult(*q) for q in WINDOW} <= {0, 1}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(WINDOW), st.integers(-3, 3))
def test_determinant_shift_invariance(q, c):
    v, a, b, n = q
    assert mult(tuple(x + c for x in v), a + c, b + c, n) == mult(v, a, b, n)


@pytest.mark.parametrize("n", [1, 2])
def test_balanced_shifts_consecutive(n):
    for v in combinations_with_replacement(range(3, -4, -1), 2 * n):
        mu = PureWeight.real(v)
        if symplectic_check(mu) is None:
            continue
        for d in range(-3, 4):
            js = balanced_shifts(mu, InfinityType((d,)))
            assert js == list(range(js[0], js[-1] + 1)) if js else True
