"""Structure of iterated sumsets ``nA`` for large ``n``.

For ``0 in A`` the n-fold sumset eventually equals
``<A> ∩ (n*max(A) - <rev(A)>)``: a head of small elements of ``<A>``, a full
middle interval, and a reflected tail.  This module finds the threshold by
direct search, evaluates the closed form, builds explicit cofactors, and
produces the cancellation-failure and Grothendieck-group witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core_sets import (
    FiniteSet,
    dilate,
    interval_bits,
    k_fold,
    max_gap,
    normalize,
    reversion,
    sum_bits,
)
from .numerical_monoid import Submonoid, span

DEFAULT_NSTAR_LIMIT = 2000


class VerificationError(AssertionError):
    """An internally constructed witness failed its own check (an implementation bug)."""


@dataclass(frozen=True)
class StructuralForm:
    n_star: int
    S: Submonoid
    T: Submonoid

    def to_json(self) -> dict:
        return {"n_star": self.n_star, "S": self.S.to_json(), "T": self.T.to_json()}


def _require_zero(a: FiniteSet) -> None:
    if 0 not in a:
        raise ValueError(f"{a} does not contain 0; normalize first")
    if a.bits == 1:
        raise ValueError("A = {0} has no structural threshold")


def formula_bits(a: FiniteSet, n: int, S: Submonoid | None = None,
                 T: Submonoid | None = None) -> int:
    """Bits of ``<a> ∩ (n*max(a) - <rev(a)>)`` (``0 in a`` assumed)."""
    S = S or span(a)
    T = T or span(reversion(a))
    top = n * a.max
    s_bits = S.mask(top)
    t_bits = T.mask(top)
    # reflect T inside [0, top]
    refl = int(format(t_bits, f"0{top + 1}b")[::-1], 2)
    return s_bits & refl


def structural_form(a: FiniteSet, window: int | None = None,
                    limit: int = DEFAULT_NSTAR_LIMIT) -> StructuralForm:
    _require_zero(a)
    return StructuralForm(n_star(a, window, limit), span(a), span(reversion(a)))


def n_star(a: FiniteSet, window: int | None = None,
           limit: int = DEFAULT_NSTAR_LIMIT) -> int:
    """Least ``n`` from which ``nA`` matches the closed form on ``window`` more steps.

    The window defaults to ``max(core) + 2`` where ``core`` is ``a`` divided by
    its gcd.  Raises ``RuntimeError`` if no threshold is found below ``limit``.
    """
    _require_zero(a)
    _, d, core = normalize(a)
    if window is None:
        window = core.max + 2
    S = span(core)
    T = span(reversion(core))
    run = 0
    start = 1
    cur = 0
    for n in range(1, limit + window + 1):
        cur = sum_bits(cur, core.bits) if n > 1 else core.bits
        if cur == formula_bits(core, n, S, T):
            if run == 0:
                start = n
            run += 1
            if run > window:
                return start
        else:
            run = 0
    raise RuntimeError(f"no structural threshold found for {a} below {limit}")


def persistence_failures(a: FiniteSet, n_max: int) -> list[int]:
    """All ``n < n_max`` where the closed form holds at ``n`` but not at ``n + 1``."""
    _require_zero(a)
    _, _, core = normalize(a)
    S = span(core)
    T = span(reversion(core))
    out = []
    cur = core.bits
    prev_ok = None
    for n in range(1, n_max + 1):
        if n > 1:
            cur = sum_bits(cur, core.bits)
        ok = cur == formula_bits(core, n, S, T)
        if prev_ok and not ok:
            out.append(n - 1)
        prev_ok = ok
    return out


def structural_nfold(a: FiniteSet, n: int, threshold: int | None = None) -> FiniteSet:
    """``nA`` through the head/middle/tail closed form, valid for ``n >= n_star(a)``.

    Cost does not grow with repeated convolution: only membership masks of
    ``<A>`` and ``<rev A>`` are consulted.
    """
    _require_zero(a)
    _, d, core = normalize(a)
    if threshold is None:
        threshold = n_star(a)
    if n < threshold:
        raise ValueError(f"n = {n} is below the threshold {threshold}")
    S = span(core)
    T = span(reversion(core))
    top = n * core.max
    fs, ft = S.frobenius, T.frobenius
    if top - ft > fs:
        head = S.mask(fs)
        middle = interval_bits(fs + 1, top - ft - 1)
        tail = 0
        for g in T.elements_upto(ft):
            tail |= 1 << (top - g)
        bits = head | middle | tail
    else:
        bits = formula_bits(core, n, S, T)
    out = FiniteSet.from_bits(bits)
    return dilate(out, d) if d > 1 else out


def divisor_bound(b: FiniteSet, a: FiniteSet) -> int:
    """Least ``N >= n_star(a)`` satisfying the gap inequality for ``B | N*A``."""
    _, _, core = normalize(a)
    S = span(core)
    T = span(reversion(core))
    need = max_gap(b) + S.frobenius + T.frobenius + b.max
    n = need // core.max + 1
    return max(n, n_star(core))


def divisor_witness(b: FiniteSet, a: FiniteSet, N: int) -> FiniteSet:
    """Explicit ``C`` with ``B + C = N*A`` for ``B`` in the closure of ``A``.

    Requires ``gcd(A) = 1``, ``0 in A``, ``B`` inside ``<A>`` with ``rev(B)``
    inside ``<rev A>``, ``N >= n_star(A)`` and
    ``max gap(B) < N*max(A) - F(<A>) - F(<rev A>) - max(B)``.
    The result is checked against ``k_fold(A, N)`` before it is returned.
    """
    _require_zero(a)
    shift, d, _ = normalize(a)
    if d != 1:
        raise ValueError("divisor_witness needs gcd(A) = 1")
    if 0 not in b:
        raise ValueError("B must contain 0")
    S = span(a)
    T = span(reversion(a))
    if not S.contains_set(b) or not T.contains_set(reversion(b)):
        raise ValueError(f"{b} is outside the closure of {a}")
    threshold = n_star(a)
    if N < threshold:
        raise ValueError(f"N = {N} is below n_star = {threshold}")
    top = N * a.max
    fs, ft, bmax = S.frobenius, T.frobenius, b.max
    if not max_gap(b) < top - fs - ft - bmax:
        raise ValueError("gap condition fails; increase N")
    head = S.mask(fs)
    middle = interval_bits(fs + 1, top - ft - bmax - 1)
    tail = 0
    for g in T.elements_upto(ft):
        tail |= 1 << (top - bmax - g)
    c = FiniteSet.from_bits(head | middle | tail)
    if b + c != k_fold(a, N):
        raise VerificationError(f"B + C != {N}A for B={b}, A={a}")
    return c


def cancellation_counterexample(a: FiniteSet, limit: int = DEFAULT_NSTAR_LIMIT
                                ) -> tuple[int, FiniteSet]:
    """``(n, B)`` with ``B`` a proper subset of ``nA`` and ``A + B = (n+1)A``.

    ``B`` is ``nA`` minus the element ``(n-1)*min(A) + max(A)`` (for ``0 in A``
    that is just ``max(A)``).
    """
    if len(a) < 2:
        raise ValueError("singletons are cancellative")
    shift, d, core = normalize(a)
    n = max(2, n_star(core))
    while n <= limit:
        nc = k_fold(core, n)
        b = nc.without(core.max)
        if core + b == k_fold(core, n + 1):
            break
        n += 1
    else:
        raise RuntimeError("no cancellation witness found")
    b_orig = dilate(b, d).shift(n * shift) if d > 1 else b.shift(n * shift)
    na = k_fold(a, n)
    if not (b_orig < na and a + b_orig == k_fold(a, n + 1)):
        raise VerificationError(f"cancellation witness failed for {a}")
    return n, b_orig


# Grothendieck group

def grothendieck_class(a: FiniteSet, b: FiniteSet, restricted: bool = False):
    """Image of the pair ``(A, B)``: ``(max A - max B, min A - min B)``, or just
    the max difference in the restricted monoid."""
    if restricted:
        if 0 not in a or 0 not in b:
            raise ValueError("restricted classes need 0 in both sets")
        return a.max - b.max
    return (a.max - b.max, a.min - b.min)


def grothendieck_witness(a: FiniteSet, b: FiniteSet, c: FiniteSet, d: FiniteSet,
                         S: Submonoid, restricted: bool = False) -> FiniteSet | None:
    """The explicit ``E`` with ``A + D + E = C + B + E``, or None if the classes differ."""
    if grothendieck_class(a, b, restricted) != grothendieck_class(c, d, restricted):
        return None
    ad = a + d
    cb = c + b
    f = S.frobenius
    M = ad.max
    if restricted:
        e = FiniteSet.from_bits(S.mask(M + f + 1))
    else:
        m = ad.min
        e = FiniteSet.interval(f + 1, M - m + f + 1)
    if ad + e != cb + e:
        raise VerificationError("Grothendieck witness failed")
    return e


def search_grothendieck_witness(a: FiniteSet, b: FiniteSet, c: FiniteSet,
                                d: FiniteSet, S: Submonoid, restricted: bool = False,
                                bound: int | None = None) -> FiniteSet | None:
    """Brute-force search for ``E`` among intervals inside ``S`` (and, for the
    restricted monoid, among ``S ∩ [0, t]``) with max up to ``bound``.

    Independent of the class computation; used to cross-check it.
    """
    if bound is None:
        bound = 2 * (a.max + b.max + c.max + d.max) + S.frobenius + 2
    ad = a + d
    cb = c + b
    if restricted:
        for t in range(bound + 1):
            e = FiniteSet.from_bits(S.mask(t))
            if ad + e == cb + e:
                return e
        return None
    for lo, hi in combinations(range(bound + 2), 2):
        hi -= 1
        e = FiniteSet.interval(lo, hi)
        if not S.contains_set(e):
            continue
        if ad + e == cb + e:
            return e
    return None
