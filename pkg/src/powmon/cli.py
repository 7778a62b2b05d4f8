"""``powmon`` command line: one subcommand per library operation.

Exit codes: 0 success, 1 domain error (bad input value, exhausted budget,
failed search), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import density, factorization as fz, spectrum, sumset_structure as ss
from .core_sets import (
    FiniteSet,
    UniverseError,
    delta_set,
    format_set,
    k_fold,
    max_gap,
    parse_set,
    reversion,
)
from .numerical_monoid import (
    Submonoid,
    format_monoid,
    m_of,
    maximal_submonoids,
    parse_monoid,
    span,
)


@dataclass
class Result:
    data: object
    plain: str
    rows: list[dict] | None = None
    columns: list[str] = field(default_factory=list)


def _set(text: str) -> FiniteSet:
    try:
        return parse_set(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _monoid(text: str) -> Submonoid:
    try:
        return parse_monoid(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _ambient(args) -> fz.Ambient:
    return fz.Ambient(args.monoid, not args.unrestricted)


def _descriptor(args) -> spectrum.DcsDescriptor:
    if args.set is not None:
        return spectrum.dcs_of(args.set)
    if not args.monoid.is_numerical or not args.rev_monoid.is_numerical:
        raise ValueError("descriptor monoids must be numerical")
    return spectrum.DcsDescriptor(args.d, args.monoid, args.rev_monoid)


def _strs(sets) -> list[str]:
    return [format_set(x) for x in sets]


# handlers

def cmd_sumset(args):
    acc = args.sets[0]
    for b in args.sets[1:]:
        acc = acc + b
    return Result({"result": str(acc)}, str(acc))


def cmd_nfold(args):
    if args.structural:
        r = ss.structural_nfold(args.A, args.n)
    else:
        r = k_fold(args.A, args.n)
    return Result({"n": args.n, "result": str(r)}, str(r))


def cmd_rev(args):
    r = reversion(args.A)
    return Result({"result": str(r)}, str(r))


def cmd_delta(args):
    d = sorted(delta_set(args.A))
    return Result({"delta": d, "max_gap": max_gap(args.A)},
                  "{" + ",".join(map(str, d)) + "}" if d else "{}")


def cmd_monoid_info(args):
    s = args.monoid
    data = s.to_json()
    lines = [f"monoid {s}", f"d {s.d}", f"frobenius {s.frobenius}", f"genus {s.genus}",
             f"atoms {list(s.atoms)}"]
    if s.is_numerical:
        subs = maximal_submonoids(s)
        data["maximal_submonoids"] = [format_monoid(x) for x in subs]
        data["m"] = m_of(s)
        lines.append("maximal " + " ".join(map(str, subs)))
        lines.append(f"m {data['m']}")
    return Result(data, "\n".join(lines))


def cmd_span(args):
    s = span(args.A)
    return Result(s.to_json(), str(s))


def cmd_atom(args):
    ok, cert = fz.is_atom(args.A, _ambient(args), args.budget)
    data = {"A": str(args.A), "atom": ok}
    plain = f"{args.A} is an atom" if ok else f"{args.A} is not an atom"
    if cert:
        data["witness"] = {"B": str(cert[0]), "C": str(cert[1])}
        plain += f": {cert[0]} + {cert[1]}"
    return Result(data, plain)


def cmd_divisors(args):
    divs = fz.divisors(args.A, _ambient(args), args.budget)
    return Result({"A": str(args.A), "tau": len(divs), "divisors": _strs(divs)},
                  "\n".join(_strs(divs)),
                  [{"divisor": str(d)} for d in divs], ["divisor"])


def cmd_factorize(args):
    zs = fz.factorizations(args.A, _ambient(args), args.budget)
    ls = fz.LengthSet(frozenset(len(z) for z in zs))
    return Result({"A": str(args.A), "factorizations": [z.to_json() for z in zs],
                   "lengths": sorted(ls.lengths)},
                  "\n".join(str(z) for z in zs),
                  [{"length": len(z), "factorization": " + ".join(z.to_json())} for z in zs],
                  ["length", "factorization"])


def cmd_lengths(args):
    ls = fz.length_set(args.A, _ambient(args), args.budget)
    data = {"A": str(args.A), **ls.to_json()}
    return Result(data, " ".join(map(str, sorted(ls.lengths))))


def cmd_catenary(args):
    c = fz.catenary_degree(args.A, _ambient(args), args.budget)
    return Result({"A": str(args.A), "catenary": c}, str(c))


def cmd_prime_refute(args):
    r = fz.prime_counterexample(args.A, args.monoid)
    plain = (f"{args.A} is prime" if r.is_prime else
             f"{args.A} | {r.b} + {r.c} but divides neither")
    return Result(r.to_json(), plain)


def cmd_strong_atom_refute(args):
    r = fz.strong_atom_refuter(args.A, _ambient(args), args.max_n, args.budget)
    plain = f"N={r.N}: {r.first} = {r.second}"
    return Result(r.to_json(), plain)


def cmd_omega_bound(args):
    c = fz.omega_lower_bound(args.monoid, args.a, args.n)
    return Result(c.to_json(), f"omega >= {c.bound}")


def cmd_dcs(args):
    if 0 in args.A:
        d = spectrum.dcs_of(args.A)
        shift = 0
    else:
        shift, d = spectrum.reduce_unrestricted(args.A)
    data = {"shift": shift, "descriptor": d.to_json(), "full": spectrum.is_full(args.A.shift(-shift))}
    return Result(data, f"{d}" + (f" shifted by {shift}" if shift else ""))


def cmd_mdcs(args):
    kids = spectrum.mdcs(_descriptor(args))
    return Result({"count": len(kids), "children": [k.to_json() for k in kids]},
                  "\n".join(map(str, kids)))


def cmd_fingerprint(args):
    fp = spectrum.mdcs_fingerprint(_descriptor(args), args.depth)
    return Result(fp.to_json(), json.dumps(fp.nested(), separators=(",", ":")))


def cmd_gen_dcs(args):
    a = spectrum.dcs_generator(_descriptor(args))
    return Result({"A": str(a)}, str(a))


def cmd_witnesses(args):
    r = spectrum.noncancellative_witnesses(_descriptor(args), args.n)
    lines = [f"n {r.n}"] + [f"{k} {getattr(r, k)}" for k in "BCDFA"]
    lines += [f"{k} {v}" for k, v in r.checks.items()]
    return Result(r.to_json(), "\n".join(lines))


def _density_result(reports):
    data = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    plain = "\n".join(
        f"N={r.N} {r.variant} {r.mode}: total={r.total} atoms={r.atoms} "
        f"decomposables={r.decomposables}"
        + (f" estimate={r.estimate:.6f} stderr={r.stderr:.6f}" if r.estimate is not None else "")
        for r in reports)
    return Result(data, plain, [r.csv_row() for r in reports], density.CSV_COLUMNS)


def cmd_density_exact(args):
    ns = range(args.N, args.N + 1) if args.upto is None else range(args.N, args.upto + 1)
    reps = [density.count_exact(n, args.variant, args.monoid, args.threads) for n in ns]
    return _density_result(reps)


def cmd_density_sample(args):
    return _density_result([density.sample_decomposable(args.N, args.trials, args.seed, args.threads)])


def cmd_density_limit(args):
    v = density.density_limit_pfin(args.monoid)
    return Result({"monoid": str(args.monoid), "limit": str(v), "value": float(v)}, str(v))


def cmd_growth(args):
    g = density.growth_constant_bounds(args.N_max, args.threads)
    rows = [{"N": n, "dec": c, "slope": s} for n, c, s in zip(g.N, g.dec_counts, g.slopes)]
    plain = "\n".join(f"N={r['N']} |Dec|={r['dec']} slope={r['slope']:.6f}" for r in rows)
    plain += "\nproven bracket [1.754, 2)"
    return Result(g.to_json(), plain, rows, ["N", "dec", "slope"])


def cmd_find_lengthset(args):
    r = fz.search_length_set(args.L, _ambient(args), args.max_element, args.max_card,
                             args.budget if args.budget is not None else 10**5)
    plain = str(r.found) if r.found is not None else "not found within bounds"
    return Result(r.to_json(), plain)


def cmd_nstar(args):
    f = ss.structural_form(args.A, args.window)
    return Result(f.to_json(), str(f.n_star))


def cmd_cancel_refute(args):
    n, b = ss.cancellation_counterexample(args.A)
    return Result({"A": str(args.A), "n": n, "B": str(b)},
                  f"n={n} B={b}")


def cmd_groth_class(args):
    cls = ss.grothendieck_class(args.A, args.B, args.restricted)
    data = {"class": list(cls) if isinstance(cls, tuple) else cls}
    plain = str(cls)
    if args.C is not None:
        if args.D is None:
            raise ValueError("give both C and D")
        e = ss.grothendieck_witness(args.A, args.B, args.C, args.D, args.monoid, args.restricted)
        data["equivalent"] = e is not None
        data["witness"] = str(e) if e is not None else None
        plain += f"\nequivalent {e is not None}" + (f" E={e}" if e is not None else "")
    return Result(data, plain)


# parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["plain", "json", "csv"], default="plain",
                   help="output format (default plain)")
    p.add_argument("--monoid", type=_monoid, default=Submonoid.natural(),
                   help="ambient numerical monoid, e.g. '<2,5>' (default <1>)")
    p.add_argument("--budget", type=int, default=None,
                   help="enumeration node cap (default $POWMON_BUDGET or 10^7)")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="powmon",
                                     description="Arithmetic of power monoids of numerical monoids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(fn=fn)
        return p

    def ambient_flag(p):
        p.add_argument("--unrestricted", action="store_true",
                       help="work in P_fin(S) instead of P_fin,0(S)")

    def descriptor_args(p):
        p.add_argument("--set", type=_set, default=None,
                       help="name the submonoid generated by this set (overrides --monoid)")
        p.add_argument("--rev-monoid", type=_monoid, default=Submonoid.natural(),
                       help="T in (d, S, T); S is --monoid (default <1>)")
        p.add_argument("--d", type=int, default=1, help="dilation d (default 1)")

    p = add("sumset", cmd_sumset, "sumset of two or more sets")
    p.add_argument("sets", type=_set, nargs="+")
    p = add("nfold", cmd_nfold, "n-fold sumset nA")
    p.add_argument("A", type=_set)
    p.add_argument("n", type=int)
    p.add_argument("--structural", action="store_true", help="use the closed form (n >= n_star)")
    p = add("rev", cmd_rev, "reversion max(A) - A")
    p.add_argument("A", type=_set)
    p = add("delta", cmd_delta, "set of consecutive differences")
    p.add_argument("A", type=_set)
    add("monoid-info", cmd_monoid_info, "Frobenius number, genus, atoms, maximal submonoids")
    p = add("span", cmd_span, "monoid generated by a set")
    p.add_argument("A", type=_set)
    for name, fn, help in [("atom", cmd_atom, "atom test with certificate"),
                           ("divisors", cmd_divisors, "all divisors and their count"),
                           ("factorize", cmd_factorize, "all factorizations"),
                           ("lengths", cmd_lengths, "set of lengths and its distances"),
                           ("catenary", cmd_catenary, "catenary degree")]:
        p = add(name, fn, help)
        p.add_argument("A", type=_set)
        ambient_flag(p)
    p = add("prime-refute", cmd_prime_refute, "witness that A is not prime in P_fin(S)")
    p.add_argument("A", type=_set)
    p = add("strong-atom-refute", cmd_strong_atom_refute,
            "least N with two factorizations of N*A")
    p.add_argument("A", type=_set)
    p.add_argument("--max-n", type=int, default=30)
    ambient_flag(p)
    p = add("omega-bound", cmd_omega_bound, "certified lower bound for omega of {0,a}")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("dcs", cmd_dcs, "descriptor (d, S, T) of the divisor-closed submonoid of A")
    p.add_argument("A", type=_set)
    for name, fn, help in [("mdcs", cmd_mdcs, "maximal divisor-closed submonoids"),
                           ("fingerprint", cmd_fingerprint, "tree of MDCS counts"),
                           ("gen-dcs", cmd_gen_dcs, "a generating set for a descriptor"),
                           ("witnesses", cmd_witnesses, "non-cancellativity identities")]:
        p = add(name, fn, help)
        descriptor_args(p)
        if name == "fingerprint":
            p.add_argument("--depth", type=int, default=2)
        if name == "witnesses":
            p.add_argument("--n", type=int, default=None)
    p = add("density-exact", cmd_density_exact, "exact atom and decomposable counts")
    p.add_argument("N", type=int)
    p.add_argument("--upto", type=int, default=None, help="also run N+1..UPTO")
    p.add_argument("--variant", choices=density.VARIANTS, default="restricted")
    p = add("density-sample", cmd_density_sample, "Monte Carlo estimate over all subsets of [0,N]")
    p.add_argument("N", type=int)
    p.add_argument("--trials", type=int, default=10_000)
    add("density-limit", cmd_density_limit, "limit atom density in P_fin(S)")
    p = add("growth", cmd_growth, "slopes log2|Dec(N)|/N from exact counts")
    p.add_argument("N_max", type=int)
    p = add("find-lengthset", cmd_find_lengthset, "search a set with a given set of lengths")
    p.add_argument("L", type=_set)
    p.add_argument("--max-element", type=int, default=12)
    p.add_argument("--max-card", type=int, default=8)
    ambient_flag(p)
    p = add("nstar", cmd_nstar, "structural threshold n_star(A)")
    p.add_argument("A", type=_set)
    p.add_argument("--window", type=int, default=None)
    p = add("cancel-refute", cmd_cancel_refute, "B with A + B = (n+1)A, B a proper subset of nA")
    p.add_argument("A", type=_set)
    p = add("groth-class", cmd_groth_class, "Grothendieck class of (A, B), optionally compared to (C, D)")
    for name in "AB":
        p.add_argument(name, type=_set)
    for name in "CD":
        p.add_argument(name, type=_set, nargs="?", default=None)
    p.add_argument("--restricted", action="store_true")
    return parser


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.data, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        if result.rows is not None:
            w = csv.DictWriter(buf, fieldnames=result.columns, lineterminator="\n")
            w.writeheader()
            w.writerows(result.rows)
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            items = result.data.items() if isinstance(result.data, dict) else enumerate(result.data)
            for k, v in items:
                w.writerow([k, v if isinstance(v, (int, float, str)) else json.dumps(v, sort_keys=True)])
        return buf.getvalue().rstrip("\n")
    return result.plain


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is None and "POWMON_BUDGET" in os.environ:
        args.budget = int(os.environ["POWMON_BUDGET"])
    try:
        result = args.fn(args)
    except fz.BudgetExceeded as e:
        print(f"powmon: budget exhausted: {e}", file=sys.stderr)
        return 1
    except fz.NotFound as e:
        print(f"powmon: not found: {e}", file=sys.stderr)
        return 1
    except UniverseError as e:
        print(f"powmon: universe bound exceeded: {e}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as e:
        print(f"powmon: error: {e}", file=sys.stderr)
        return 1
    print(render(result, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
