"""How rare genuine sumsets are: exact counts and seeded Monte Carlo estimates.

Three universes are supported and always named in reports:

``restricted``
    sets in ``P_fin,0(S)`` with max at most ``N`` (``2^|S ∩ [1,N]|`` of them).
``all``
    all subsets of ``[0,N]``, including the empty set.  A set is decomposable
    when it equals ``B + C`` with ``|B|, |C| >= 2``; atoms are not reported.
``unrestricted``
    nonempty sets in ``P_fin(S)`` with max at most ``N``; "decomposables"
    counts every non-atom other than ``{0}``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core_sets import FiniteSet, iter_bits
from .factorization import find_decomposition, is_atom, unrestricted
from .numerical_monoid import Submonoid, from_generators

EXACT_BUDGET = 22
MC_BLOCK = 4096
VARIANTS = ("restricted", "all", "unrestricted")
PROVEN_BRACKET = (1.754, 2.0)

CSV_COLUMNS = ["N", "variant", "mode", "total", "atoms", "decomposables",
               "estimate", "stderr", "seed"]


@dataclass
class DensityReport:
    N: int
    variant: str
    mode: str
    total: int
    atoms: int | None
    decomposables: int
    identity_count: int
    monoid: str = "<1>"
    trials: int | None = None
    seed: int | None = None
    estimate: float | None = None
    stderr: float | None = None

    def to_json(self) -> dict:
        return asdict(self)

    def csv_row(self) -> dict:
        return {k: ("" if getattr(self, k) is None else getattr(self, k)) for k in CSV_COLUMNS}


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def is_decomposable(bits: int) -> bool:
    """``bits`` (any nonempty set) is ``B + C`` with ``|B|, |C| >= 2``."""
    if not bits:
        return False
    bits >>= (bits & -bits).bit_length() - 1
    if bits.bit_count() < 3:
        return False
    return find_decomposition(bits, -1, -1) is not None


def decomposition(a: FiniteSet) -> tuple[FiniteSet, FiniteSet] | None:
    """A certificate ``(B, C)`` for membership in Dec, in original coordinates."""
    m = a.min
    r = find_decomposition(a.bits >> m, -1, -1)
    if r is None:
        return None
    return FiniteSet.from_bits(r[0] << m), FiniteSet.from_bits(r[1])


# exact enumeration

def _restricted_block(args) -> tuple[int, list[int]]:
    """Atoms, and decomposables bucketed by max, for subset indices in [lo, hi)."""
    positions, lo, hi, mask, N = args
    atoms = 0
    dec_by_max = [0] * (N + 1)
    for idx in range(lo, hi):
        bits = 1
        for i in iter_bits(idx):
            bits |= 1 << positions[i]
        if bits == 1:
            continue
        if find_decomposition(bits, mask, mask) is None:
            atoms += 1
        else:
            dec_by_max[bits.bit_length() - 1] += 1
    return atoms, dec_by_max


def _unrestricted_block(args) -> tuple[int, int]:
    positions, lo, hi, gens = args
    amb = unrestricted(from_generators(gens))
    atoms = nonatoms = 0
    for idx in range(lo, hi):
        bits = 0
        for i in iter_bits(idx):
            bits |= 1 << positions[i]
        if bits <= 1:
            continue
        if is_atom(FiniteSet.from_bits(bits), amb)[0]:
            atoms += 1
        else:
            nonatoms += 1
    return atoms, nonatoms


def _blocks(total: int, workers: int) -> list[tuple[int, int]]:
    n = max(1, workers * 4)
    step = max(1, -(-total // n))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def _run(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def restricted_dec_by_max(N: int, S: Submonoid | None = None, workers: int = 1,
                          budget: int = EXACT_BUDGET) -> tuple[int, list[int]]:
    """Atom count and per-max decomposable counts over ``P_fin,0(S)`` with max <= N."""
    S = S or Submonoid.natural()
    positions = [x for x in S.elements_upto(N) if x > 0]
    if len(positions) > budget:
        raise ValueError(f"2^{len(positions)} sets exceed the exact budget 2^{budget}")
    mask = S.mask(N)
    tasks = [(positions, lo, hi, mask, N) for lo, hi in _blocks(1 << len(positions), workers)]
    atoms = 0
    dec = [0] * (N + 1)
    for a, d in _run(_restricted_block, tasks, workers):
        atoms += a
        dec = [x + y for x, y in zip(dec, d)]
    return atoms, dec


def count_exact(N: int, variant: str = "restricted", S: Submonoid | None = None,
                workers: int = 1, budget: int = EXACT_BUDGET) -> DensityReport:
    """Classify every admissible set with max at most ``N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    S = S or Submonoid.natural()
    tag = str(S)
    if variant == "restricted":
        atoms, dec = restricted_dec_by_max(N, S, workers, budget)
        total = 1 << len([x for x in S.elements_upto(N) if x > 0])
        return DensityReport(N, variant, "exact", total, atoms, sum(dec), 1, tag)
    if variant == "all":
        if not S.is_naturals:
            raise ValueError("the 'all' universe is over N_0 only")
        # every set is a shift of a 0-containing one: Dec_all(N) = sum_j R(j)
        _, dec = restricted_dec_by_max(N, None, workers, budget)
        running = 0
        total_dec = 0
        for j in range(N + 1):
            running += dec[j]
            total_dec += running
        return DensityReport(N, variant, "exact", 1 << (N + 1), None, total_dec, 0, tag)
    positions = S.elements_upto(N)
    if len(positions) > budget:
        raise ValueError(f"2^{len(positions)} sets exceed the exact budget 2^{budget}")
    tasks = [(positions, lo, hi, S.generators) for lo, hi in _blocks(1 << len(positions), workers)]
    atoms = nonatoms = 0
    for a, n in _run(_unrestricted_block, tasks, workers):
        atoms += a
        nonatoms += n
    total = (1 << len(positions)) - 1
    return DensityReport(N, variant, "exact", total, atoms, nonatoms, 1, tag)


# Monte Carlo

def _sample_block(args) -> int:
    N, size, child = args
    rng = np.random.Generator(np.random.PCG64(child))
    words = -(-(N + 1) // 32)
    draws = rng.integers(0, 1 << 32, size=(size, words), dtype=np.uint64)
    top = (1 << (N + 1)) - 1
    memo: dict[int, bool] = {}
    hits = 0
    for row in draws.tolist():
        bits = 0
        for k, w in enumerate(row):
            bits |= w << (32 * k)
        bits &= top
        if not bits:
            continue
        key = bits >> ((bits & -bits).bit_length() - 1)
        r = memo.get(key)
        if r is None:
            r = memo[key] = is_decomposable(key)
        hits += r
    return hits


def sample_decomposable(N: int, trials: int, seed: int = 0, workers: int = 1) -> DensityReport:
    """Estimate the probability that a uniform subset of ``[0,N]`` is in Dec(N).

    Trials are split into blocks of fixed size; block ``i`` draws from
    ``PCG64(SeedSequence(seed).spawn(...)[i])`` so results do not depend on
    the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if N < 0:
        raise ValueError("N must be nonnegative")
    n_blocks = -(-trials // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    tasks = []
    left = trials
    for child in children:
        size = min(MC_BLOCK, left)
        left -= size
        tasks.append((N, size, child))
    hits = sum(_run(_sample_block, tasks, workers))
    p = hits / trials
    stderr = math.sqrt(p * (1 - p) / trials)
    return DensityReport(N, "all", "monte_carlo", trials, None, hits, 0, "<1>",
                         trials, seed, p, stderr)


# growth constant

@dataclass
class GrowthReport:
    N: list[int]
    dec_counts: list[int]
    slopes: list[float]
    proven_bracket: tuple[float, float] = PROVEN_BRACKET

    @property
    def empirical_base(self) -> float | None:
        """``2^slope`` at the largest N; data, not a value of the constant."""
        return 2 ** self.slopes[-1] if self.slopes else None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "dec_counts": self.dec_counts,
            "slopes": self.slopes,
            "empirical_base": self.empirical_base,
            "proven_bracket": list(self.proven_bracket),
        }


def dec_counts(N_max: int, workers: int = 1, budget: int = EXACT_BUDGET) -> list[int]:
    """``|Dec(N)|`` over all subsets of ``[0,N]`` for ``N = 0..N_max``."""
    _, dec = restricted_dec_by_max(N_max, None, workers, budget)
    out = []
    r = total = 0
    for j in range(N_max + 1):
        r += dec[j]
        total += r
        out.append(total)
    return out


def growth_constant_bounds(N_max: int, workers: int = 1,
                           budget: int = EXACT_BUDGET) -> GrowthReport:
    """Slopes ``log2 |Dec(N)| / N`` from exact counts, next to the proven bracket."""
    counts = dec_counts(N_max, workers, budget)
    ns, cs, slopes = [], [], []
    for n, c in enumerate(counts):
        if n >= 1 and c > 0:
            ns.append(n)
            cs.append(c)
            slopes.append(math.log2(c) / n)
    return GrowthReport(ns, cs, slopes)


# limit density in P_fin(S)

def second_kind_nonatoms(S: Submonoid, limit: int) -> int:
    """``|H' ∩ P([0, limit])|`` where ``H'`` is the union of ``P_fin(a + S) \\ {{a}}``."""
    elems = [x for x in S.elements_upto(limit) if x > 0]
    shifted = [S.mask(limit) << a for a in S.atoms]
    count = 0
    for r in range(1, len(elems) + 1):
        for combo in combinations(elems, r):
            bits = 0
            for x in combo:
                bits |= 1 << x
            for a, m in zip(S.atoms, shifted):
                if bits & ~m == 0 and bits != 1 << a:
                    count += 1
                    break
    return count


def density_limit_pfin(S: Submonoid) -> Fraction:
    """Limit proportion of atoms among sets of ``P_fin(S)`` with bounded max.

    Non-atoms are, up to density zero, the sets ``{a} + B`` with ``a`` an atom
    of ``S``.  Past ``d = max atoms + F(S)`` every element lies in all ``a + S``,
    so only the trace on ``[0, d]`` matters.  That trace must be empty, a
    singleton atom, or a set in ``H'``.
    """
    if not S.is_numerical:
        raise ValueError("S must be numerical")
    if S.is_naturals:
        return Fraction(1, 2)
    d = max(S.atoms) + S.frobenius
    h = second_kind_nonatoms(S, d)
    size = len(S.elements_upto(d))
    nonatom = Fraction(1 + h + len(S.atoms), 2 ** size)
    value = 1 - nonatom
    if not Fraction(1, 2) <= value < 1:
        raise AssertionError(f"limit {value} outside [1/2, 1)")
    return value
