from itertools import combinations

import pytest

from powmon import sumset_structure as ss
from powmon.core_sets import FiniteSet, k_fold, reversion
from powmon.numerical_monoid import Submonoid, parse_monoid

import oracles


def F(*xs):
    return FiniteSet(xs)


def formula_oracle(a, n):
    """<A> ∩ (n*max A - <rev A>) from knapsack membership tables."""
    top = n * max(a)
    s_ok = oracles.members(sorted(a), top)
    t_ok = oracles.members(sorted(oracles.rev(a)), top)
    return frozenset(x for x in range(top + 1) if s_ok[x] and t_ok[top - x])


def nstar_oracle(a):
    w = max(a) + 2
    n = 1
    while True:
        if all(oracles.nfold(a, m) == formula_oracle(a, m) for m in range(n, n + w + 1)):
            return n
        n += 1


CORPUS = [(0, 1), (0, 2, 3), (0, 1, 3), (0, 1, 4), (0, 3, 5), (0, 1, 5, 8), (0, 3, 4, 7), (0, 4, 7)]


@pytest.mark.parametrize("a", CORPUS)
def test_nstar_matches_oracle(a):
    assert ss.n_star(FiniteSet(a)) == nstar_oracle(frozenset(a))


def test_nstar_known_values():
    assert ss.n_star(F(0, 1)) == 1
    assert ss.n_star(F(0, 2, 3)) == 1
    assert ss.n_star(F(0, 1, 5, 8)) == 4


def test_nstar_dilated_equals_core():
    assert ss.n_star(F(0, 6, 10)) == ss.n_star(F(0, 3, 5))


def test_nstar_errors():
    with pytest.raises(ValueError):
        ss.n_star(F(0))
    with pytest.raises(ValueError):
        ss.n_star(F(1, 2))


def test_formula_bits_against_oracle():
    a = F(0, 1, 3)
    for n in range(1, 8):
        assert set(FiniteSet.from_bits(ss.formula_bits(a, n))) == formula_oracle({0, 1, 3}, n)


@pytest.mark.parametrize("a", CORPUS)
def test_structural_nfold_window(a):
    A = FiniteSet(a)
    n0 = ss.n_star(A)
    for n in range(n0, n0 + 6):
        assert ss.structural_nfold(A, n) == k_fold(A, n)


def test_structural_nfold_interval():
    assert ss.structural_nfold(F(0, 1), 5) == FiniteSet.interval(0, 5)


def test_structural_nfold_dilated():
    assert ss.structural_nfold(F(0, 4, 6), 7) == k_fold(F(0, 4, 6), 7)


def test_structural_nfold_large_n_is_cheap():
    a = F(0, 1, 4)
    r = ss.structural_nfold(a, 1000)
    assert r.max == 4000 and 4000 - 2 not in r and 4000 - 1 not in r and 4000 - 3 in r


def test_structural_nfold_below_threshold():
    with pytest.raises(ValueError):
        ss.structural_nfold(F(0, 1, 5, 8), 2)


def test_head_of_zero_one_four():
    r = ss.structural_nfold(F(0, 1, 4), 10)
    assert set(x for x in r if x <= 10) == set(range(11))


def test_persistence_on_corpus():
    for a in CORPUS:
        assert ss.persistence_failures(FiniteSet(a), 30) == []


def test_divisor_witness_examples():
    assert ss.divisor_witness(F(0, 1), F(0, 1), 3) == F(0, 1, 2)
    c = ss.divisor_witness(F(0, 3), F(0, 1), 10)
    assert c == FiniteSet.interval(0, 7)
    a = F(0, 2, 3)
    N = ss.divisor_bound(a, a)
    c = ss.divisor_witness(a, a, N)
    assert a + c == k_fold(a, N)


def test_divisor_witness_rejects():
    with pytest.raises(ValueError):
        ss.divisor_witness(F(0, 1), F(0, 2, 4), 5)
    with pytest.raises(ValueError):
        ss.divisor_witness(F(0, 1), F(0, 2, 3), 10)
    with pytest.raises(ValueError):
        ss.divisor_witness(F(0, 9), F(0, 1), 3)


def test_divisor_witness_over_closure():
    a = F(0, 2, 5)
    S, T = parse_monoid("<2,5>"), parse_monoid("<3,5>")
    for b in [F(0, 2), F(0, 5), F(0, 2, 5), F(0, 4, 7), F(0, 2, 7)]:
        if not (S.contains_set(b) and T.contains_set(reversion(b))):
            continue
        N = ss.divisor_bound(b, a)
        assert b + ss.divisor_witness(b, a, N) == k_fold(a, N)


@pytest.mark.parametrize("a", [(0, 1), (0, 2, 3), (3, 7, 11), (2, 5), (0, 1, 5, 8)])
def test_cancellation_counterexample(a):
    A = FiniteSet(a)
    n, b = ss.cancellation_counterexample(A)
    assert n >= 2
    assert b < k_fold(A, n)
    assert oracles.ssum(a, set(b)) == oracles.nfold(frozenset(a), n + 1)


def test_cancellation_zero_one():
    assert ss.cancellation_counterexample(F(0, 1)) == (2, F(0, 2))


def test_cancellation_singleton():
    with pytest.raises(ValueError):
        ss.cancellation_counterexample(F(5))


def test_grothendieck_class_values():
    a = F(0, 2, 3)
    assert ss.grothendieck_class(a, a) == (0, 0)
    assert ss.grothendieck_class(a, F(0, 1)) == (2, 0)
    assert ss.grothendieck_class(F(0, 3), F(0, 1), restricted=True) == 2
    with pytest.raises(ValueError):
        ss.grothendieck_class(F(1, 3), F(0, 1), restricted=True)


def test_grothendieck_example_pair():
    n0 = Submonoid.natural()
    args = (F(0, 3), F(0, 1), F(0, 5), F(0, 3))
    e = ss.search_grothendieck_witness(*args, n0, bound=40)
    assert e is not None
    assert ss.grothendieck_witness(*args, n0) is not None


def _corpus_sets(S, limit):
    els = S.elements_upto(limit)
    for r in (1, 2, 3):
        for c in combinations(els, r):
            yield FiniteSet(c)


@pytest.mark.parametrize("gens,restricted", [("<1>", False), ("<2,3>", False), ("<1>", True), ("<2,5>", True)])
def test_grothendieck_both_directions(gens, restricted):
    S = parse_monoid(gens)
    sets = [x for x in _corpus_sets(S, 5) if not restricted or 0 in x]
    pairs = [(a, b) for a in sets[:12] for b in sets[:12]]
    for (a, b) in pairs[::7]:
        for (c, d) in pairs[::11]:
            same = ss.grothendieck_class(a, b, restricted) == ss.grothendieck_class(c, d, restricted)
            found = ss.search_grothendieck_witness(a, b, c, d, S, restricted)
            assert same == (found is not None)
            assert same == (ss.grothendieck_witness(a, b, c, d, S, restricted) is not None)


def test_structural_form_json():
    j = ss.structural_form(F(0, 1, 3)).to_json()
    assert j["n_star"] == 1 and j["S"]["atoms"] == [1] and j["T"]["atoms"] == [2, 3]
