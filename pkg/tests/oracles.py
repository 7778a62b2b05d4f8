"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the algorithms under test; sets are plain frozensets.
"""

from __future__ import annotations

from itertools import chain, combinations
from math import gcd
from functools import reduce


def fs(*xs) -> frozenset:
    return frozenset(xs)


def ssum(a, b) -> frozenset:
    return frozenset(x + y for x in a for y in b)


def nfold(a, n) -> frozenset:
    out = frozenset([0])
    for _ in range(n):
        out = ssum(out, a)
    return out


def rev(a) -> frozenset:
    m = max(a)
    return frozenset(m - x for x in a)


def subsets(items, min_size=0):
    items = sorted(items)
    return chain.from_iterable(combinations(items, r) for r in range(min_size, len(items) + 1))


def members(gens, limit) -> list[bool]:
    """Membership in the monoid generated by ``gens`` on [0, limit] via a knapsack DP."""
    ok = [False] * (limit + 1)
    ok[0] = True
    for n in range(1, limit + 1):
        ok[n] = any(g <= n and ok[n - g] for g in gens if g > 0)
    return ok


def frobenius(gens) -> int:
    """Largest gap, found by scanning until min(gens) consecutive members appear."""
    g = reduce(gcd, gens)
    assert g == 1
    m = min(x for x in gens if x > 0)
    limit = 200 + m * max(gens) * 4
    ok = members(gens, limit)
    gaps = [n for n in range(limit + 1) if not ok[n]]
    return max(gaps) if gaps else 0


def monoid_atoms(gens, limit=200) -> list[int]:
    ok = members(gens, limit)
    els = [n for n in range(1, limit + 1) if ok[n]]
    atoms = []
    for n in els:
        if not any(ok[x] and ok[n - x] for x in range(1, n)):
            atoms.append(n)
    return atoms


def divides(b, a, in_s=lambda n: True) -> bool:
    """Exhaustive over every candidate ``C`` inside ``[0, max A] ∩ S``."""
    pool = [c for c in range(max(a) + 1) if in_s(c)]
    for r in range(1, len(pool) + 1):
        for c in combinations(pool, r):
            if ssum(b, c) == a:
                return True
    return False


def restricted_decompositions(a, in_s=lambda n: True):
    """All (B, C) with 0 in both, both of size >= 2, B + C = A, inside S."""
    pool = [x for x in a if in_s(x)]
    out = []
    for bt in subsets([x for x in pool if x > 0], 1):
        b = frozenset((0,) + bt)
        for ct in subsets([x for x in pool if x > 0], 1):
            c = frozenset((0,) + ct)
            if ssum(b, c) == a:
                out.append((b, c))
    return out


def is_restricted_atom(a, in_s=lambda n: True) -> bool:
    return not restricted_decompositions(a, in_s)


def is_decomposable(a) -> bool:
    """Dec membership: ``A = B + C`` with arbitrary ``B, C`` of size >= 2."""
    if not a:
        return False
    m = min(a)
    core = frozenset(x - m for x in a)
    return not is_restricted_atom(core) if len(core) >= 3 else False


def restricted_factorizations(a, in_s=lambda n: True, _memo=None) -> set:
    """All multisets of atoms summing to ``a``, as sorted tuples of sorted tuples."""
    if _memo is None:
        _memo = {}
    a = frozenset(a)
    if a == frozenset([0]):
        return {()}
    if a in _memo:
        return _memo[a]
    out = set()
    if is_restricted_atom(a, in_s):
        out.add((tuple(sorted(a)),))
    for b, c in restricted_decompositions(a, in_s):
        for zb in restricted_factorizations(b, in_s, _memo):
            for zc in restricted_factorizations(c, in_s, _memo):
                out.add(tuple(sorted(zb + zc)))
    _memo[a] = out
    return out


def multiset_distance(z, w) -> int:
    from collections import Counter
    cz, cw = Counter(z), Counter(w)
    common = cz & cw
    return max(sum((cz - common).values()), sum((cw - common).values()))


def catenary(zs) -> int:
    """Least M connecting all factorizations, by trying M = 0, 1, 2, ..."""
    zs = list(zs)
    if len(zs) <= 1:
        return 0
    for m in range(0, max(len(z) for z in zs) + 1):
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(len(zs)):
                if j not in seen and multiset_distance(zs[i], zs[j]) <= m:
                    seen.add(j)
                    stack.append(j)
        if len(seen) == len(zs):
            return m
    raise AssertionError
