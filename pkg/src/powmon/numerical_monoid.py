"""Additive submonoids of the nonnegative integers.

Every nontrivial submonoid is stored as ``d * S'`` with ``S'`` a numerical
monoid (cofinite, gcd 1).  Frobenius numbers follow the convention
``F(N_0) = 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable

from .core_sets import FiniteSet, interval_bits, iter_bits


def _closure_bits(gens: tuple[int, ...], limit: int) -> int:
    """Bit vector of the monoid generated by ``gens`` restricted to [0, limit]."""
    mask = interval_bits(0, limit)
    bits = 1
    while True:
        new = bits
        for g in gens:
            new |= (bits << g) & mask
        if new == bits:
            return bits
        bits = new


def _frobenius(gens: tuple[int, ...]) -> int:
    """Largest gap of a numerical monoid (shortest paths over residues mod min gen)."""
    m = min(gens)
    if m == 1:
        return 0
    # Dijkstra-free relaxation: residues mod m, weights are generators
    inf = float("inf")
    dist = [inf] * m
    dist[0] = 0
    changed = True
    while changed:
        changed = False
        for r in range(m):
            if dist[r] == inf:
                continue
            for g in gens:
                t = (r + g) % m
                v = dist[r] + g
                if v < dist[t]:
                    dist[t] = v
                    changed = True
    return int(max(dist)) - m


@dataclass(frozen=True)
class Submonoid:
    """``d * S'`` where ``S'`` is numerical; ``d == 0`` encodes the trivial monoid ``{0}``.

    Equality compares ``d`` and the atoms of ``S'`` only.
    """

    d: int
    reduced_generators: tuple[int, ...] = field(compare=False)
    frobenius: int = field(compare=False)
    atoms: tuple[int, ...]
    genus: int = field(compare=False)
    membership_table: int = field(compare=False, repr=False)
    table_limit: int = field(compare=False, repr=False)

    @classmethod
    def trivial(cls) -> Submonoid:
        return cls(0, (), 0, (), 0, 1, 0)

    @classmethod
    def natural(cls) -> Submonoid:
        return from_generators([1])

    @property
    def is_trivial(self) -> bool:
        return self.d == 0

    @property
    def is_numerical(self) -> bool:
        return self.d == 1

    @property
    def is_naturals(self) -> bool:
        return self.d == 1 and self.atoms == (1,)

    def reduced(self) -> Submonoid:
        """The numerical monoid ``S'`` with ``self = d * S'``."""
        if self.d <= 1:
            return self
        return from_generators(self.atoms)

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        if self.is_trivial:
            return n == 0
        if n % self.d:
            return False
        n //= self.d
        if n > self.frobenius:
            return True
        return bool(self.membership_table >> n & 1)

    __contains__ = contains

    def mask(self, limit: int) -> int:
        """Bit vector of ``self`` intersected with [0, limit]."""
        if limit < 0:
            return 0
        if self.is_trivial:
            return 1
        if self.d == 1:
            if limit <= self.table_limit:
                return self.membership_table & interval_bits(0, limit)
            return self.membership_table | interval_bits(self.table_limit + 1, limit)
        bits = 0
        for k in range(limit // self.d + 1):
            if self.contains(k * self.d):
                bits |= 1 << (k * self.d)
        return bits

    def contains_set(self, a: FiniteSet) -> bool:
        return a.bits & ~self.mask(a.max) == 0

    def elements_upto(self, limit: int) -> list[int]:
        return list(iter_bits(self.mask(limit)))

    @property
    def generators(self) -> tuple[int, ...]:
        """Minimal generators at the original scale."""
        return tuple(self.d * a for a in self.atoms)

    def __str__(self) -> str:
        return format_monoid(self)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "generators": list(self.reduced_generators),
            "frobenius": self.frobenius,
            "atoms": list(self.atoms),
            "genus": self.genus,
        }


def _build(d: int, reduced: tuple[int, ...]) -> Submonoid:
    f = _frobenius(reduced)
    limit = f + max(reduced) + 1
    table = _closure_bits(reduced, limit)
    atoms = []
    for n in iter_bits(table):
        if n == 0:
            continue
        # n is an atom iff it is not a sum of two nonzero elements
        below = table & interval_bits(1, n - 1)
        if not any(below >> (n - x) & 1 for x in iter_bits(below) if x <= n - x):
            atoms.append(n)
        if n > f + min(reduced):
            break
    genus = sum(1 for n in range(f + 1) if not table >> n & 1)
    return Submonoid(d, reduced, f, tuple(atoms), genus, table, limit)


def from_generators(gens: Iterable[int], allow_trivial: bool = False) -> Submonoid:
    """The submonoid generated by ``gens``; zeros are ignored.

    An empty (or all-zero) generator list is an error unless ``allow_trivial``.
    """
    gens = [int(g) for g in gens]
    if any(g < 0 for g in gens):
        raise ValueError("generators must be nonnegative")
    pos = sorted(set(g for g in gens if g > 0))
    if not pos:
        if allow_trivial:
            return Submonoid.trivial()
        raise ValueError("empty generator list")
    d = reduce(gcd, pos)
    return _build(d, tuple(g // d for g in pos))


def contains(s: Submonoid, n: int) -> bool:
    return s.contains(n)


def span(a: FiniteSet, allow_trivial: bool = False) -> Submonoid:
    """``<a>``, the submonoid generated by the elements of ``a``."""
    if a.bits == 1 and not allow_trivial:
        raise ValueError("span of {0} is the trivial monoid")
    return from_generators(a, allow_trivial=True)


def remove_atom(s: Submonoid, a: int) -> Submonoid:
    """``S \\ {a}`` for an atom ``a`` of a numerical monoid ``S``."""
    if not s.is_numerical:
        raise ValueError("remove_atom needs a numerical monoid")
    if a not in s.atoms:
        raise ValueError(f"{a} is not an atom of {s}")
    f_new = max(s.frobenius, a)
    limit = f_new + 2 * max(s.atoms) + 1
    gens = [n for n in s.elements_upto(limit) if n > 0 and n != a]
    return from_generators(gens)


def maximal_submonoids(s: Submonoid) -> list[Submonoid]:
    """The maximal submonoids ``S \\ {a}``, one per atom, in increasing atom order.

    A monoid ``d * S'`` with ``d > 1`` is handled through ``S'`` and re-dilated.
    """
    if s.is_trivial:
        raise ValueError("the trivial monoid has no maximal submonoids")
    core = s.reduced()
    out = []
    for a in core.atoms:
        sub = remove_atom(core, a)
        if s.d > 1:
            sub = from_generators(s.d * g for g in sub.atoms)
        out.append(sub)
    return out


def m_of(s: Submonoid) -> int:
    """Least ``m >= max atom`` with both ``m - 1`` and ``m`` in ``S``."""
    if not s.is_numerical:
        raise ValueError("m(S) is defined for numerical monoids only")
    m = max(s.atoms)
    while not (s.contains(m) and s.contains(m - 1)):
        m += 1
    return m


_MONOID_RE = re.compile(r"^<\s*(\d+(?:\s*,\s*\d+)*)\s*>$")


def parse_monoid(text: str) -> Submonoid:
    """Parse ``<2,5>``; ``<0>`` is the trivial monoid."""
    m = _MONOID_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed monoid literal {text!r}")
    return from_generators((int(v) for v in m.group(1).split(",")), allow_trivial=True)


def format_monoid(s: Submonoid) -> str:
    if s.is_trivial:
        return "<0>"
    return "<" + ",".join(map(str, s.generators)) + ">"


def monoid_from_json(obj: dict) -> Submonoid:
    d = obj.get("d", 1)
    gens = obj["generators"]
    if d == 0 or not gens:
        return Submonoid.trivial()
    return from_generators(d * g for g in gens)
