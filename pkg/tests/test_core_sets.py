import pytest
from hypothesis import given, settings, strategies as st

from powmon import core_sets as cs
from powmon.core_sets import FiniteSet, parse_set, format_set

import oracles

small_sets = st.frozensets(st.integers(0, 20), min_size=1, max_size=7)


def F(*xs):
    return FiniteSet(xs)


def test_sumset_worked_example():
    assert F(0, 2, 3) + F(0, 1, 3) == FiniteSet.interval(0, 6)


def test_sumset_basic():
    assert F(0, 1) + F(0, 2) == F(0, 1, 2, 3)
    assert F(5) + F(0, 1) == F(5, 6)


@given(small_sets, small_sets)
def test_sumset_matches_pairwise(a, b):
    assert set(FiniteSet(a) + FiniteSet(b)) == oracles.ssum(a, b)


@given(small_sets, st.integers(0, 6))
@settings(max_examples=60)
def test_k_fold_matches_iteration(a, k):
    assert set(cs.k_fold(FiniteSet(a), k)) == oracles.nfold(a, k)


def test_k_fold_zero_is_identity():
    assert cs.k_fold(F(3, 4), 0) == F(0)


@given(small_sets, small_sets)
def test_reversion_is_homomorphism(a, b):
    a, b = FiniteSet(a), FiniteSet(b)
    assert cs.reversion(a + b) == cs.reversion(a) + cs.reversion(b)
    assert cs.reversion(cs.reversion(a)).shift(a.min) == a


def test_reversion_examples():
    assert cs.reversion(F(0, 1, 3)) == F(0, 2, 3)
    assert cs.reversion(F(2, 3, 7)) == F(0, 4, 5)


def test_delta_and_gap():
    assert cs.delta_set(F(0, 1, 5)) == {1, 4}
    assert cs.max_gap(F(0, 1, 5)) == 4
    assert cs.max_gap(F(7)) == 0
    assert cs.delta_set(F(7)) == frozenset()


def test_normalize():
    assert cs.normalize(F(3, 7, 11)) == (3, 4, F(0, 1, 2))
    assert cs.normalize(F(0, 2, 6)) == (0, 2, F(0, 1, 3))
    assert cs.normalize(F(9)) == (9, 1, F(0))


def test_dilate_and_gcd():
    assert cs.dilate(F(0, 1, 3), 2) == F(0, 2, 6)
    assert cs.set_gcd(F(0, 4, 6)) == 2
    with pytest.raises(ValueError):
        cs.dilate(F(0, 1), 0)


@pytest.mark.parametrize("text,expect", [
    ("{0,2,3}", (0, 2, 3)),
    ("{3, 0 ,2}", (0, 2, 3)),
    ("[2,5]", (2, 3, 4, 5)),
    ("{0}", (0,)),
])
def test_parse(text, expect):
    assert parse_set(text).elements() == expect


@pytest.mark.parametrize("text", ["{0,1", "{}", "{-1,2}", "{1,1}", "[3,2]", "0,1", "{a}"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_set(text)


@given(small_sets)
def test_format_roundtrip(a):
    s = FiniteSet(a)
    assert parse_set(format_set(s)) == s


def test_empty_and_negative_rejected():
    with pytest.raises(ValueError):
        FiniteSet([])
    with pytest.raises(ValueError):
        FiniteSet([-1])


def test_universe_bound():
    old = cs.UNIVERSE_BOUND
    try:
        cs.set_universe_bound(50)
        with pytest.raises(cs.UniverseError):
            FiniteSet([51])
        with pytest.raises(cs.UniverseError):
            cs.k_fold(F(0, 10), 6)
    finally:
        cs.set_universe_bound(old)


def test_subset_order_and_without():
    assert F(0, 1) <= F(0, 1, 2)
    assert F(0, 1) < F(0, 1, 2)
    assert not F(0, 1) < F(0, 1)
    assert F(0, 1, 2).without(1) == F(0, 2)
    assert F(0, 1, 2).sort_key() == (2, (0, 1, 2))
