"""Divisibility, atoms and factorizations in power monoids of numerical monoids.

Two ambients are supported: the restricted power monoid (finite sets inside
``S`` that contain 0) and the full power monoid (all finite nonempty subsets
of ``S``).  Both are reduced, so factorizations are multisets of atoms.

Divisibility is decided exactly through the maximal quotient: if any ``C``
satisfies ``B + C = A`` then so does ``{c in S : c + B ⊆ A}``.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .core_sets import (
    FiniteSet,
    delta_set,
    interval_bits,
    iter_bits,
    k_fold,
    sum_bits,
)
from .numerical_monoid import Submonoid, from_generators

DEFAULT_BUDGET = int(os.environ.get("POWMON_BUDGET", 10**7))


class BudgetExceeded(RuntimeError):
    """An enumeration hit its node budget; the result would have been partial."""

    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial


class _Budget:
    __slots__ = ("left", "what")

    def __init__(self, limit: int | None, what: str):
        self.left = DEFAULT_BUDGET if limit is None else limit
        self.what = what

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded(f"{self.what}: node budget exhausted")


@dataclass(frozen=True)
class Ambient:
    """``P_fin,0(S)`` when ``restricted`` else ``P_fin(S)``."""

    monoid: Submonoid = field(default_factory=Submonoid.natural)
    restricted: bool = True

    @property
    def tag(self) -> str:
        kind = "restricted" if self.restricted else "unrestricted"
        return f"{kind}{self.monoid}"

    def contains(self, a: FiniteSet) -> bool:
        if self.restricted and 0 not in a:
            return False
        return self.monoid.contains_set(a)

    def check(self, *sets: FiniteSet) -> None:
        for a in sets:
            if not self.contains(a):
                raise ValueError(f"{a} is not an element of {self.tag}")

    def mask(self, limit: int) -> int:
        return self.monoid.mask(limit)


RESTRICTED_N0 = Ambient()


def restricted(S: Submonoid | None = None) -> Ambient:
    return Ambient(S or Submonoid.natural(), True)


def unrestricted(S: Submonoid | None = None) -> Ambient:
    return Ambient(S or Submonoid.natural(), False)


# divisibility

def _quotient_bits(b: int, a: int, s_mask: int) -> int:
    """``{c in S : c + B ⊆ A}`` as bits."""
    q = s_mask & interval_bits(0, a.bit_length() - 1)
    for x in iter_bits(b):
        q &= a >> x
        if not q:
            break
    return q


def _divides_bits(b: int, a: int, s_mask: int) -> int:
    """The maximal cofactor bits if ``B | A``, else 0."""
    q = _quotient_bits(b, a, s_mask)
    if q and sum_bits(b, q) == a:
        return q
    return 0


def divides(b: FiniteSet, a: FiniteSet, ambient: Ambient = RESTRICTED_N0) -> FiniteSet | None:
    """Some inclusion-minimal ``C`` in the ambient with ``B + C = A``, or None."""
    ambient.check(a, b)
    if b.max > a.max or b.min > a.min:
        return None
    q = _divides_bits(b.bits, a.bits, ambient.mask(a.max))
    if not q:
        return None
    # greedy pruning, ascending
    for x in iter_bits(q):
        trial = q & ~(1 << x)
        if trial and sum_bits(b.bits, trial) == a.bits:
            q = trial
    return FiniteSet.from_bits(q)


def _subsets(universe: list[int], base: int, budget: _Budget) -> Iterator[int]:
    budget.spend(1 << len(universe))
    for mask in range(1 << len(universe)):
        bits = base
        for i, x in enumerate(universe):
            if mask >> i & 1:
                bits |= 1 << x
        yield bits


def divisors(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
             budget: int | None = None) -> list[FiniteSet]:
    """All divisors of ``a`` in the ambient, ascending by (max, elements)."""
    ambient.check(a)
    bud = _Budget(budget, "divisors")
    s_mask = ambient.mask(a.max)
    found = []
    if ambient.restricted:
        universe = [x for x in iter_bits(a.bits) if x > 0]
        for bits in _subsets(universe, 1, bud):
            if _divides_bits(bits, a.bits, s_mask):
                found.append(bits)
    else:
        m = a.min
        for b0 in range(m + 1):
            c0 = m - b0
            if not (ambient.monoid.contains(b0) and ambient.monoid.contains(c0)):
                continue
            # B + c0 ⊆ A, so B ⊆ (A - c0) ∩ S with min B = b0
            cand = (a.bits >> c0) & s_mask
            universe = [x for x in iter_bits(cand) if x > b0]
            for bits in _subsets(universe, 1 << b0, bud):
                if _divides_bits(bits, a.bits, s_mask):
                    found.append(bits)
    out = [FiniteSet.from_bits(x) for x in found]
    out.sort(key=FiniteSet.sort_key)
    return out


def tau(a: FiniteSet, ambient: Ambient = RESTRICTED_N0, budget: int | None = None) -> int:
    """Number of divisors."""
    return len(divisors(a, ambient, budget))


# atoms

def find_decomposition(a_bits: int, b_mask: int, c_mask: int,
                       budget: _Budget | None = None) -> tuple[int, int] | None:
    """Search ``B + C = A`` with ``0`` in both, ``|B|, |C| >= 2``, ``max B <= max A / 2``,
    ``B ⊆ b_mask`` and ``C ⊆ c_mask``.  Small ``B`` are tried first.

    Returns the bits of ``B`` and of the maximal ``C``, or None.
    """
    top = a_bits.bit_length() - 1
    if top < 2:
        return None
    full_c = a_bits & c_mask
    cand = [x for x in iter_bits(a_bits & b_mask & interval_bits(1, top // 2))]
    if not cand or not a_bits & b_mask & 1:
        return None

    # pairs first: cheapest and most frequent
    for x in cand:
        q = full_c & (a_bits >> x)
        if q.bit_count() >= 2 and (q | (q << x)) == a_bits:
            return 1 | (1 << x), q

    def dfs(start: int, bits: int, q: int, left: int):
        if budget is not None:
            budget.spend()
        if left == 0:
            if sum_bits(bits, q) == a_bits:
                return bits, q
            return None
        for i in range(start, len(cand) - left + 1):
            x = cand[i]
            q2 = q & (a_bits >> x)
            if q2.bit_count() < 2:
                continue
            r = dfs(i + 1, bits | (1 << x), q2, left - 1)
            if r:
                return r
        return None

    for size in range(2, len(cand) + 1):
        r = dfs(0, 1, full_c, size)
        if r:
            return r
    return None


def is_atom(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
            budget: int | None = None) -> tuple[bool, tuple[FiniteSet, FiniteSet] | None]:
    """``(True, None)`` for atoms, else ``(False, (B, C))`` with ``B + C = A``
    and neither summand the identity."""
    ambient.check(a)
    if a.bits == 1:
        raise ValueError("{0} is the identity, not an atom candidate")
    bud = _Budget(budget, "is_atom")
    S = ambient.monoid
    if ambient.restricted:
        r = find_decomposition(a.bits, S.mask(a.max), S.mask(a.max), bud)
        if r is None:
            return True, None
        return False, (FiniteSet.from_bits(r[0]), FiniteSet.from_bits(r[1]))

    m = a.min
    if len(a) == 1:
        for x in range(1, m // 2 + 1):
            if S.contains(x) and S.contains(m - x):
                return False, (FiniteSet([x]), FiniteSet([m - x]))
        return True, None
    # singleton summand {k}
    for k in range(1, m + 1):
        if S.contains(k) and S.contains_set(a.shift(-k)):
            return False, (FiniteSet([k]), a.shift(-k))
    core = a.bits >> m
    limit = a.max
    for i in range(m + 1):
        j = m - i
        if not (S.contains(i) and S.contains(j)):
            continue
        b_mask = S.mask(limit) >> i
        c_mask = S.mask(limit) >> j
        r = find_decomposition(core, b_mask, c_mask, bud)
        if r is not None:
            b = FiniteSet.from_bits(r[0] << i)
            c = FiniteSet.from_bits(r[1] << j)
            return False, (b, c)
    return True, None


def atom_test(a: FiniteSet, ambient: Ambient = RESTRICTED_N0) -> bool:
    return is_atom(a, ambient)[0]


# factorizations

@dataclass(frozen=True)
class Factorization:
    """A multiset of atoms, stored as a tuple in non-increasing (max, elements) order."""

    parts: tuple[FiniteSet, ...]

    @classmethod
    def of(cls, parts) -> Factorization:
        return cls(tuple(sorted(parts, key=FiniteSet.sort_key, reverse=True)))

    def __len__(self) -> int:
        return len(self.parts)

    def total(self) -> FiniteSet:
        acc = FiniteSet.from_bits(1)
        for p in self.parts:
            acc = acc + p
        return acc

    def to_json(self) -> list[str]:
        return [str(p) for p in self.parts]

    def __str__(self) -> str:
        return " + ".join(map(str, self.parts)) if self.parts else "{0}"


@dataclass(frozen=True)
class LengthSet:
    lengths: frozenset[int]

    @property
    def delta(self) -> frozenset[int]:
        if len(self.lengths) < 2:
            return frozenset()
        return delta_set(FiniteSet(self.lengths))

    @property
    def min(self) -> int:
        return min(self.lengths)

    @property
    def max(self) -> int:
        return max(self.lengths)

    def to_json(self) -> dict:
        return {"lengths": sorted(self.lengths), "delta": sorted(self.delta)}


def _sort_factorizations(zs) -> list[Factorization]:
    return sorted(zs, key=lambda z: (len(z.parts), [p.sort_key() for p in z.parts]))


def factorizations(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
                   budget: int | None = None) -> list[Factorization]:
    """The complete set of factorizations ``Z(A)``.

    Dynamic programming over the divisor lattice of ``A``: every factor and
    every partial sum of a factorization is itself a divisor.  Raises
    :class:`BudgetExceeded` rather than returning a partial list.
    """
    ambient.check(a)
    if a.bits == 1:
        return [Factorization(())]
    if not ambient.restricted and ambient.monoid.is_naturals and a.min > 0:
        # {1} is a cancellative prime of P_fin(N_0): peel it off
        one = FiniteSet([1])
        m = a.min
        rest = factorizations(a.shift(-m), ambient, budget)
        return _sort_factorizations(Factorization.of(z.parts + (one,) * m) for z in rest)

    bud = _Budget(budget, "factorizations")
    divs = divisors(a, ambient, bud.left)
    index = {d.bits: d for d in divs}
    atoms = []
    for d in divs:
        if d.bits == 1:
            continue
        bud.spend()
        if is_atom(d, ambient, bud.left)[0]:
            atoms.append(d)
    # split[X] = list of (u, R) with u an atom, R a divisor, u + R = X
    split: dict[int, list[tuple[FiniteSet, int]]] = {}
    for u in atoms:
        for r in divs:
            if r.max + u.max > a.max or r.min + u.min > a.min:
                continue
            bud.spend()
            x = sum_bits(u.bits, r.bits)
            if x in index:
                split.setdefault(x, []).append((u, r.bits))
    table: dict[int, set[tuple[FiniteSet, ...]]] = {1: {()}}
    for d in divs:  # ascending max: every R precedes X
        if d.bits == 1:
            continue
        zs = set()
        for u, r in split.get(d.bits, ()):
            for z in table.get(r, ()):
                zs.add(tuple(sorted(z + (u,), key=FiniteSet.sort_key, reverse=True)))
                bud.spend()
        table[d.bits] = zs
    return _sort_factorizations(Factorization(z) for z in table[a.bits])


def length_set(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
               budget: int | None = None) -> LengthSet:
    return LengthSet(frozenset(len(z) for z in factorizations(a, ambient, budget)))


def factorization_distance(z: Factorization, w: Factorization) -> int:
    """Remove the common part, then take the larger leftover length."""
    cz, cw = Counter(z.parts), Counter(w.parts)
    common = cz & cw
    return max(sum((cz - common).values()), sum((cw - common).values()))


def catenary_degree_of(zs: list[Factorization]) -> int:
    """Bottleneck of a minimum spanning tree on the factorization graph."""
    n = len(zs)
    if n <= 1:
        return 0
    edges = sorted(
        (factorization_distance(zs[i], zs[j]), i, j)
        for i in range(n) for j in range(i + 1, n)
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    joined = 1
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            joined += 1
            if joined == n:
                return w
    raise AssertionError("unreachable")


def catenary_degree(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
                    budget: int | None = None) -> int:
    return catenary_degree_of(factorizations(a, ambient, budget))


def one_factorization(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
                      budget: int | None = None) -> Factorization:
    """Some factorization, found by splitting along atom certificates."""
    if a.bits == 1:
        return Factorization(())
    ok, cert = is_atom(a, ambient, budget)
    if ok:
        return Factorization((a,))
    b, c = cert
    return Factorization.of(one_factorization(b, ambient, budget).parts
                            + one_factorization(c, ambient, budget).parts)


# counterexample constructions

class NotFound(RuntimeError):
    """A bounded search ended without a witness."""


@dataclass
class OmegaCertificate:
    """Certified lower bound ``omega(P_fin,0(S), {0,a}) >= n + 2``."""

    a: int
    n: int
    bound: int
    atoms: tuple[FiniteSet, FiniteSet, FiniteSet]
    sums: dict[int, FiniteSet]
    cofactor: FiniteSet
    closed_form_ok: bool
    divides_full_sum: bool
    no_proper_subsum: bool

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "n": self.n,
            "bound": self.bound,
            "witness": {
                "atoms": [str(x) for x in self.atoms],
                "sums": {str(m): str(s) for m, s in self.sums.items()},
                "cofactor": str(self.cofactor),
            },
            "checks": {
                "closed_form": self.closed_form_ok,
                "divides_full_sum": self.divides_full_sum,
                "no_proper_subsum": self.no_proper_subsum,
            },
        }


def omega_closed_form(a: int, m: int, n: int) -> FiniteSet:
    """``a * ([0, 2m+4] ∪ {2n+5} ∪ [2n+7, 2m+2n+8])``."""
    bits = interval_bits(0, 2 * m + 4) | (1 << (2 * n + 5)) | interval_bits(2 * n + 7, 2 * m + 2 * n + 8)
    return FiniteSet(a * x for x in iter_bits(bits))


def omega_lower_bound(S: Submonoid, a: int, n: int) -> OmegaCertificate:
    """Verify that ``{0,a}`` divides a sum of ``n+2`` atoms but no proper subsum."""
    if a <= 0 or not S.contains(a):
        raise ValueError(f"a = {a} must be a positive element of {S}")
    if n < 1:
        raise ValueError("n must be positive")
    amb = restricted(S)
    u1 = FiniteSet([0, 2 * a])
    u2 = FiniteSet([0, 2 * a, 3 * a])
    u3 = FiniteSet([0, a, a * (2 * n + 5)])
    for u in (u1, u2, u3):
        if not is_atom(u, amb)[0]:
            raise AssertionError(f"{u} is not an atom")
    base = u2 + u3
    sums = {}
    closed_ok = True
    for m in range(1, n + 1):
        s = k_fold(u1, m) + base
        sums[m] = s
        closed_ok &= s == omega_closed_form(a, m, n)
    target = sums[n]
    A = FiniteSet([0, a])
    cof = FiniteSet(a * x for x in iter_bits(interval_bits(0, 2 * n + 4) | interval_bits(2 * n + 7, 4 * n + 7)))
    full_ok = A + cof == target and divides(A, target, amb) is not None
    proper_ok = True
    for j in range(n + 1):
        for with_u2 in (0, 1):
            for with_u3 in (0, 1):
                if (j, with_u2, with_u3) == (n, 1, 1):
                    continue
                s = k_fold(u1, j)
                if with_u2:
                    s = s + u2
                if with_u3:
                    s = s + u3
                if divides(A, s, amb) is not None:
                    proper_ok = False
    cert = OmegaCertificate(a, n, n + 2, (u1, u2, u3), sums, cof, closed_ok, full_ok, proper_ok)
    if not (closed_ok and full_ok and proper_ok):
        raise AssertionError(f"omega witness failed: {cert.to_json()['checks']}")
    return cert


@dataclass
class PrimeRefutation:
    """Either ``is_prime`` or sets ``B, C`` with ``A | B + C``, ``A ∤ B``, ``A ∤ C``."""

    a: FiniteSet
    is_prime: bool
    b: FiniteSet | None = None
    c: FiniteSet | None = None
    cofactor: FiniteSet | None = None

    def to_json(self) -> dict:
        out = {"A": str(self.a), "prime": self.is_prime}
        if not self.is_prime:
            out["witness"] = {"B": str(self.b), "C": str(self.c), "cofactor": str(self.cofactor)}
        return out


def _check_prime_witness(a, b, c, amb) -> FiniteSet | None:
    cof = divides(a, b + c, amb)
    if cof is None or divides(a, b, amb) is not None or divides(a, c, amb) is not None:
        return None
    return cof


def prime_counterexample(a: FiniteSet, S: Submonoid | None = None,
                         search_limit: int = 200) -> PrimeRefutation:
    """Show that ``A`` is not prime in ``P_fin(S)``, or report ``{1}`` over ``N_0`` as prime."""
    S = S or Submonoid.natural()
    amb = unrestricted(S)
    amb.check(a)
    if a.bits == 1:
        raise ValueError("{0} is a unit")
    if S.is_naturals and a == FiniteSet([1]):
        return PrimeRefutation(a, True)
    if S.is_naturals and a == FiniteSet([0, 1]):
        b, c = FiniteSet([0, 2, 3]), FiniteSet([0, 1, 3])
        cof = _check_prime_witness(a, b, c, amb)
        if cof is None:
            raise AssertionError("fixed witness for {0,1} failed")
        return PrimeRefutation(a, False, b, c, cof)
    if len(a) == 1:
        k = a.min
        for top in range(1, search_limit):
            for x in range(1, top + 1):
                y = top - x
                if y < x:
                    break
                if not (S.contains(x) and S.contains(y)):
                    continue
                b, c = FiniteSet([x]), FiniteSet([y])
                cof = _check_prime_witness(a, b, c, amb)
                if cof is not None:
                    return PrimeRefutation(a, False, b, c, cof)
        raise NotFound(f"no singleton witness for {a} below {search_limit}")
    gap = a.max - a.min
    for m in range(max(gap, 1), search_limit * max(1, a.max)):
        b = FiniteSet.interval(m, 2 * m).without(m + gap)
        c = FiniteSet.interval(m, 2 * m).without(2 * m - gap)
        if not (S.contains_set(b) and S.contains_set(c)):
            continue
        cof = _check_prime_witness(a, b, c, amb)
        if cof is not None:
            return PrimeRefutation(a, False, b, c, cof)
    raise NotFound(f"no interval witness for {a}")


@dataclass
class StrongAtomRefutation:
    a: FiniteSet
    N: int
    first: Factorization
    second: Factorization

    def to_json(self) -> dict:
        return {"A": str(self.a), "N": self.N,
                "witness": {"first": self.first.to_json(), "second": self.second.to_json()}}


def strong_atom_refuter(a: FiniteSet, ambient: Ambient = RESTRICTED_N0,
                        max_n: int = 30, budget: int | None = None) -> StrongAtomRefutation:
    """Least ``N <= max_n`` for which ``N*A`` has two distinct factorizations.

    ``N*A`` has a second factorization iff it has an atom divisor other than ``A``.
    """
    ambient.check(a)
    if not ambient.restricted and ambient.monoid.is_naturals and a == FiniteSet([1]):
        raise ValueError("{1} is absolutely irreducible in P_fin(N_0)")
    if not is_atom(a, ambient, budget)[0]:
        raise ValueError(f"{a} is not an atom")
    for N in range(2, max_n + 1):
        x = k_fold(a, N)
        for u in divisors(x, ambient, budget):
            if u == a or u.bits == 1 or not is_atom(u, ambient, budget)[0]:
                continue
            r = divides(u, x, ambient)
            if r is None:
                continue
            second = Factorization.of((u,) + one_factorization(r, ambient, budget).parts)
            first = Factorization((a,) * N)
            if second.total() != x or first.total() != x:
                raise AssertionError("factorization does not re-sum")
            return StrongAtomRefutation(a, N, first, second)
    raise BudgetExceeded(f"no second factorization of N*{a} for N <= {max_n}")


@dataclass
class LengthSetSearch:
    target: frozenset[int]
    found: FiniteSet | None
    examined: int
    undetermined: int

    def to_json(self) -> dict:
        return {
            "target": sorted(self.target),
            "found": str(self.found) if self.found is not None else None,
            "status": "found" if self.found is not None else "not found within bounds",
            "examined": self.examined,
            "undetermined": self.undetermined,
        }


def _candidates(ambient: Ambient, max_element: int, max_card: int) -> Iterator[FiniteSet]:
    S = ambient.monoid
    for top in range(1, max_element + 1):
        if not S.contains(top):
            continue
        low = 0 if ambient.restricted else None
        inner = [x for x in S.elements_upto(top - 1) if x > 0 or low is None]
        if ambient.restricted:
            inner = [x for x in inner if x > 0]
        for size in range(0 if ambient.restricted else 1, max_card):
            fixed = 1 << top
            if ambient.restricted:
                fixed |= 1
                if size + 2 > max_card:
                    break
            # ascending (max, cardinality, lex)
            for combo in combinations(inner, size):
                bits = fixed
                for x in combo:
                    bits |= 1 << x
                yield FiniteSet.from_bits(bits)


def search_length_set(target, ambient: Ambient = RESTRICTED_N0, max_element: int = 12,
                      max_card: int = 8, budget: int | None = 10**5) -> LengthSetSearch:
    """First ``A`` (by max, then cardinality, then elements) with ``L(A) = target``.

    Not finding one is inconclusive.  Sets whose factorization exceeds the
    per-set budget are counted as undetermined.
    """
    target = frozenset(int(x) for x in target)
    if not target or min(target) < 2:
        raise ValueError("target must be a nonempty set of integers >= 2")
    examined = undetermined = 0
    for a in _candidates(ambient, max_element, max_card):
        if max(target) > a.max:
            continue
        examined += 1
        try:
            ls = length_set(a, ambient, budget)
        except BudgetExceeded:
            undetermined += 1
            continue
        if ls.lengths == target:
            return LengthSetSearch(target, a, examined, undetermined)
    return LengthSetSearch(target, None, examined, undetermined)
