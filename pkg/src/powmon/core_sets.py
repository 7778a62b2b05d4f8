"""Finite subsets of the nonnegative integers and the set-addition calculus.

A :class:`FiniteSet` is stored as a Python ``int`` used as a bit vector: bit
``i`` is set iff ``i`` is an element.  Sumsets are shift-OR convolutions, which
CPython performs a machine word at a time.
"""

from __future__ import annotations

import re
from functools import reduce
from math import gcd
from typing import Iterable, Iterator

UNIVERSE_BOUND = 4096


class UniverseError(ValueError):
    """An element exceeded the configured universe bound."""


def set_universe_bound(bound: int) -> None:
    global UNIVERSE_BOUND
    if bound < 1:
        raise ValueError("universe bound must be positive")
    UNIVERSE_BOUND = bound


def _check_bits(bits: int) -> None:
    if bits.bit_length() - 1 > UNIVERSE_BOUND:
        raise UniverseError(
            f"element {bits.bit_length() - 1} exceeds universe bound {UNIVERSE_BOUND}"
        )


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def sum_bits(x: int, y: int) -> int:
    """Shift-OR convolution of two bit vectors (the raw sumset)."""
    if x.bit_count() > y.bit_count():
        x, y = y, x
    out = 0
    for i in iter_bits(x):
        out |= y << i
    return out


def interval_bits(lo: int, hi: int) -> int:
    """Bits of the discrete interval [lo, hi]; empty when hi < lo."""
    if hi < lo:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << lo


def reverse_bits(bits: int, top: int) -> int:
    """Bits of ``top - X`` for X given by ``bits`` (all elements must be <= top)."""
    out = 0
    for i in iter_bits(bits):
        out |= 1 << (top - i)
    return out


class FiniteSet:
    """A finite nonempty set of nonnegative integers (immutable, hashable)."""

    __slots__ = ("bits",)

    def __init__(self, elements: Iterable[int]) -> None:
        bits = 0
        for e in elements:
            e = int(e)
            if e < 0:
                raise ValueError(f"negative element {e}")
            bits |= 1 << e
        if not bits:
            raise ValueError("a FiniteSet must be nonempty")
        _check_bits(bits)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_bits(cls, bits: int) -> FiniteSet:
        if bits <= 0:
            raise ValueError("a FiniteSet must be nonempty")
        _check_bits(bits)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "bits", bits)
        return obj

    @classmethod
    def interval(cls, lo: int, hi: int) -> FiniteSet:
        if lo < 0 or hi < lo:
            raise ValueError(f"bad interval [{lo},{hi}]")
        return cls.from_bits(interval_bits(lo, hi))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteSet is immutable")

    # container protocol

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, n: object) -> bool:
        return isinstance(n, int) and n >= 0 and bool(self.bits >> n & 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteSet) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __le__(self, other: FiniteSet) -> bool:
        """Subset test."""
        return self.bits & ~other.bits == 0

    def __lt__(self, other: FiniteSet) -> bool:
        return self.bits != other.bits and self <= other

    def __add__(self, other: FiniteSet) -> FiniteSet:
        return sumset(self, other)

    def __repr__(self) -> str:
        return f"FiniteSet({format_set(self)})"

    def __str__(self) -> str:
        return format_set(self)

    @property
    def min(self) -> int:
        return (self.bits & -self.bits).bit_length() - 1

    @property
    def max(self) -> int:
        return self.bits.bit_length() - 1

    def elements(self) -> tuple[int, ...]:
        return tuple(self)

    def shift(self, k: int) -> FiniteSet:
        """Translate by ``k`` (which may be negative as long as the result stays >= 0)."""
        if k >= 0:
            return FiniteSet.from_bits(self.bits << k)
        if self.min + k < 0:
            raise ValueError("shift would produce a negative element")
        return FiniteSet.from_bits(self.bits >> -k)

    def without(self, n: int) -> FiniteSet:
        return FiniteSet.from_bits(self.bits & ~(1 << n))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical order: by max, then lexicographically by elements."""
        return (self.max, self.elements())


def sumset(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    return FiniteSet.from_bits(sum_bits(a.bits, b.bits))


def k_fold(a: FiniteSet, k: int) -> FiniteSet:
    """The k-fold sumset ``a + ... + a``; ``k_fold(a, 0)`` is ``{0}``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    result = 1
    base = a.bits
    # binary powering
    while k:
        if k & 1:
            result = sum_bits(result, base)
            _check_bits(result)
        k >>= 1
        if k:
            base = sum_bits(base, base)
            _check_bits(base)
    return FiniteSet.from_bits(result)


def dilate(a: FiniteSet, k: int) -> FiniteSet:
    if k < 1:
        raise ValueError("dilation factor must be positive")
    return FiniteSet(k * x for x in a)


def reversion(a: FiniteSet) -> FiniteSet:
    """``max(a) - a``."""
    return FiniteSet.from_bits(reverse_bits(a.bits, a.max))


def delta_set(a: FiniteSet) -> frozenset[int]:
    els = a.elements()
    return frozenset(y - x for x, y in zip(els, els[1:]))


def max_gap(a: FiniteSet) -> int:
    """Largest consecutive gap, 0 for singletons."""
    return max(delta_set(a), default=0)


def set_gcd(a: FiniteSet) -> int:
    return reduce(gcd, a, 0)


def normalize(a: FiniteSet) -> tuple[int, int, FiniteSet]:
    """Write ``a = shift + d * core`` with ``0 in core`` and ``gcd(core) = 1``.

    Singletons get ``d = 1`` and ``core = {0}``.
    """
    shift = a.min
    if len(a) == 1:
        return shift, 1, FiniteSet.from_bits(1)
    d = reduce(gcd, (x - shift for x in a))
    return shift, d, FiniteSet((x - shift) // d for x in a)


# text form

_SET_RE = re.compile(r"^\{\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\}$")
_INTERVAL_RE = re.compile(r"^\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]$")


def parse_set(text: str) -> FiniteSet:
    """Parse ``{0,2,3}`` (any order, no duplicates) or an interval ``[a,b]``."""
    s = text.strip()
    m = _INTERVAL_RE.match(s)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo < 0:
            raise ValueError(f"negative element in {text!r}")
        if hi < lo:
            raise ValueError(f"empty interval {text!r}")
        return FiniteSet.interval(lo, hi)
    m = _SET_RE.match(s)
    if not m:
        raise ValueError(f"malformed set literal {text!r}")
    values = [int(v) for v in m.group(1).split(",")]
    if any(v < 0 for v in values):
        raise ValueError(f"negative element in {text!r}")
    if len(set(values)) != len(values):
        raise ValueError(f"duplicate element in {text!r}")
    return FiniteSet(values)


def format_set(a: FiniteSet) -> str:
    return "{" + ",".join(map(str, a)) + "}"
