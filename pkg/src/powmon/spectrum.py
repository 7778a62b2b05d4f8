"""Divisor-closed submonoids of the restricted power monoid of N_0.

Each nontrivial one is ``d * (P_fin,0(S) ∩ rev(P_fin,0(T)))`` for numerical
monoids ``S`` and ``T``; :class:`DcsDescriptor` names it by ``(d, S, T)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .core_sets import FiniteSet, dilate, normalize, reversion
from .numerical_monoid import (
    Submonoid,
    from_generators,
    maximal_submonoids,
    span,
)
from .sumset_structure import VerificationError

MAX_FINGERPRINT_DEPTH = 4


@dataclass(frozen=True)
class DcsDescriptor:
    """``d * (P_fin,0(S) ∩ rev(P_fin,0(T)))``; ``d == 0`` is the trivial submonoid ``{{0}}``."""

    d: int
    S: Submonoid
    T: Submonoid

    @classmethod
    def trivial(cls) -> DcsDescriptor:
        t = Submonoid.trivial()
        return cls(0, t, t)

    @classmethod
    def full(cls) -> DcsDescriptor:
        n0 = Submonoid.natural()
        return cls(1, n0, n0)

    @classmethod
    def of_monoid(cls, S: Submonoid) -> DcsDescriptor:
        """``P_fin,0(S)`` itself, i.e. ``T = N_0``."""
        if not S.is_numerical:
            raise ValueError("S must be numerical")
        return cls(1, S, Submonoid.natural())

    @property
    def is_trivial(self) -> bool:
        return self.d == 0

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.d > 0 and not (self.S.is_numerical and self.T.is_numerical):
            raise ValueError("S and T must be numerical monoids")

    def __str__(self) -> str:
        if self.is_trivial:
            return "(trivial)"
        return f"({self.d}, {self.S}, {self.T})"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "S": {"generators": list(self.S.generators)},
            "T": {"generators": list(self.T.generators)},
        }


def descriptor_from_json(obj: dict) -> DcsDescriptor:
    d = obj["d"]
    if d == 0:
        return DcsDescriptor.trivial()
    return DcsDescriptor(d, from_generators(obj["S"]["generators"]),
                         from_generators(obj["T"]["generators"]))


def dcs_of(a: FiniteSet) -> DcsDescriptor:
    """The descriptor of the divisor-closed submonoid generated by ``a`` (``0 in a``)."""
    if 0 not in a:
        raise ValueError(f"{a} does not contain 0; use reduce_unrestricted")
    if a.bits == 1:
        return DcsDescriptor.trivial()
    _, d, core = normalize(a)
    return DcsDescriptor(d, span(core), span(reversion(core)))


def reduce_unrestricted(a: FiniteSet) -> tuple[int, DcsDescriptor]:
    """Split ``a`` in ``P_fin(N_0)`` as the unit-free shift ``min a`` plus a restricted part."""
    shift = a.min
    return shift, dcs_of(a.shift(-shift))


def dcs_contains(D: DcsDescriptor, b: FiniteSet) -> bool:
    if 0 not in b:
        raise ValueError(f"{b} does not contain 0")
    if b.bits == 1:
        return True
    if D.is_trivial:
        return False
    if any(x % D.d for x in b):
        return False
    core = FiniteSet(x // D.d for x in b)
    return D.S.contains_set(core) and D.T.contains_set(reversion(core))


def is_full(a: FiniteSet) -> bool:
    """Whether ``a`` generates all of ``P_fin,0(N_0)`` as a divisor-closed submonoid."""
    if 0 not in a:
        raise ValueError(f"{a} does not contain 0")
    return 1 in a and a.max - 1 in a


def mdcs(D: DcsDescriptor) -> list[DcsDescriptor]:
    """Maximal divisor-closed submonoids: shrink ``S`` by one atom, then ``T``."""
    if D.is_trivial:
        raise ValueError("the trivial submonoid has no maximal divisor-closed submonoids")
    out = [DcsDescriptor(D.d, s2, D.T) for s2 in maximal_submonoids(D.S)]
    out += [DcsDescriptor(D.d, D.S, t2) for t2 in maximal_submonoids(D.T)]
    return out


def mdcs_count(D: DcsDescriptor) -> int:
    return len(D.S.atoms) + len(D.T.atoms)


@dataclass(frozen=True)
class Fingerprint:
    """Tree of MDCS counts; children are kept in canonical order."""

    count: int
    children: tuple[Fingerprint, ...] = ()

    def key(self):
        return (self.count, tuple(c.key() for c in self.children))

    def to_json(self) -> dict:
        out = {"root": self.count}
        if self.children:
            out["children"] = [c.to_json() if c.children else c.count for c in self.children]
        return out

    def nested(self):
        """Nested-array form ``[count, [child, ...]]``."""
        return [self.count, [c.nested() for c in self.children]]

    def child_counts(self) -> list[int]:
        return [c.count for c in self.children]


@lru_cache(maxsize=None)
def _fingerprint(D: DcsDescriptor, depth: int) -> Fingerprint:
    count = mdcs_count(D)
    if depth <= 1:
        return Fingerprint(count)
    kids = sorted((_fingerprint(c, depth - 1) for c in mdcs(D)), key=Fingerprint.key)
    return Fingerprint(count, tuple(kids))


def mdcs_fingerprint(D: DcsDescriptor, depth: int = 2,
                     max_depth: int = MAX_FINGERPRINT_DEPTH) -> Fingerprint:
    """MDCS counts to the given depth.  Different fingerprints imply
    non-isomorphic monoids; equal ones prove nothing."""
    if depth < 1:
        raise ValueError("depth must be positive")
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the budget {max_depth}")
    if D.is_trivial:
        raise ValueError("the trivial submonoid has no fingerprint")
    return _fingerprint(D, depth)


def dcs_generator(D: DcsDescriptor, m_limit: int = 10_000) -> FiniteSet:
    """Some ``A`` with ``dcs_of(A) == D``, checked before it is returned.

    Scans ``M`` upward with ``A = {0} ∪ atoms(S) ∪ (M - ({0} ∪ atoms(T)))``.
    For ``M`` beyond both Frobenius numbers and the atoms the spans are forced,
    so the scan terminates.
    """
    if D.is_trivial:
        return FiniteSet([0])
    S, T = D.S, D.T
    start = max(S.atoms + T.atoms)
    for M in range(start, m_limit):
        if not S.contains(M) or not T.contains(M):
            continue
        if any(not S.contains(M - t) for t in T.atoms):
            continue
        a = FiniteSet([0, *S.atoms, M, *(M - t for t in T.atoms)])
        if span(a) == S and span(reversion(a)) == T:
            out = dilate(a, D.d) if D.d > 1 else a
            if dcs_of(out) != D:
                raise VerificationError(f"generator {out} does not name {D}")
            return out
    raise RuntimeError(f"no generator for {D} with M < {m_limit}")


@dataclass
class WitnessRecord:
    descriptor: DcsDescriptor
    n: int
    n_star: int
    B: FiniteSet
    C: FiniteSet
    D: FiniteSet
    F: FiniteSet
    A: FiniteSet
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "n": self.n,
            "n_star": self.n_star,
            "witness": {k: str(getattr(self, k)) for k in "BCDFA"},
            "checks": dict(self.checks),
        }


def witness_threshold(D: DcsDescriptor) -> int:
    """Least ``n`` for which the families below lie in ``D``."""
    return max(D.S.frobenius, D.T.frobenius) + 1


def noncancellative_witnesses(D: DcsDescriptor, n: int | None = None) -> WitnessRecord:
    """Sets in ``D`` showing it is neither transfer-friendly nor torsion-free.

    ``B = {0} ∪ d[n,3n] ∪ {4dn}``, ``C = {0,2dn}``, ``D = {0,dn}``,
    ``F = {0} ∪ d[n,5n] ∪ {6dn}``, and ``A = B \\ {2dn}``.
    Checks ``F = B + C = B + D + D`` and ``A + A = B + B`` with ``A != B``.
    """
    if D.is_trivial:
        raise ValueError("the trivial submonoid is cancellative")
    ns = witness_threshold(D)
    if n is None:
        n = ns
    if n < ns:
        raise ValueError(f"n = {n} is below the threshold {ns}")
    d = D.d
    b = FiniteSet([0, *range(d * n, 3 * d * n + 1, d), 4 * d * n])
    c = FiniteSet([0, 2 * d * n])
    dd = FiniteSet([0, d * n])
    f = FiniteSet([0, *range(d * n, 5 * d * n + 1, d), 6 * d * n])
    a = b.without(2 * d * n)
    checks = {
        "members": all(dcs_contains(D, x) for x in (b, c, dd, f, a)),
        "F=B+C": b + c == f,
        "F=B+D+D": b + dd + dd == f,
        "A+A=B+B": a + a == b + b and a != b,
    }
    rec = WitnessRecord(D, n, ns, b, c, dd, f, a, checks)
    if not rec.ok:
        raise VerificationError(f"witness checks failed: {checks}")
    return rec


# chains

def chain_descriptor(n: int) -> DcsDescriptor:
    """``(1, {0} ∪ N_{>=n}, N_0)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return DcsDescriptor(1, from_generators(range(n, 2 * n)), Submonoid.natural())


def _scaled_in(k: int, small: Submonoid, big: Submonoid) -> bool:
    return all(big.contains(k * g) for g in small.atoms)


def descriptor_le(d1: DcsDescriptor, d2: DcsDescriptor) -> bool:
    """Containment of the named submonoids."""
    if d1.is_trivial:
        return True
    if d2.is_trivial:
        return False
    if d1.d % d2.d:
        return False
    k = d1.d // d2.d
    return _scaled_in(k, d1.S, d2.S) and _scaled_in(k, d1.T, d2.T)


def _add_frobenius(s: Submonoid) -> Submonoid:
    return from_generators([*s.atoms, s.frobenius])


def parent(D: DcsDescriptor) -> DcsDescriptor | None:
    """A strictly larger descriptor, or None at the full monoid."""
    if D.is_trivial:
        return DcsDescriptor.full()
    if D.d > 1:
        return DcsDescriptor(1, D.S, D.T)
    if not D.S.is_naturals:
        return DcsDescriptor(1, _add_frobenius(D.S), D.T)
    if not D.T.is_naturals:
        return DcsDescriptor(1, D.S, _add_frobenius(D.T))
    return None


def ascending_chain(D: DcsDescriptor) -> list[DcsDescriptor]:
    out = [D]
    while (p := parent(out[-1])) is not None:
        out.append(p)
    return out


def swap(D: DcsDescriptor) -> DcsDescriptor:
    return D if D.is_trivial else DcsDescriptor(D.d, D.T, D.S)


def descriptor_gcd_ok(a: FiniteSet) -> bool:
    """Whether ``a`` (containing 0) has gcd 1."""
    g = 0
    for x in a:
        g = gcd(g, x)
    return g == 1
