"""Command-line surface: exact counts, identity verification, asymptotics.

Three subcommands:

    latgrow counts <spec> <tree|animal> <n_max>
    latgrow verify <spec> <identity> <n_max>
    latgrow asymptotics <spec | d=N> [--penrose --series --z0 --g1 N]

Reports are JSON by default, CSV with --csv, and contain no timestamps,
paths, or timings, so identical invocations against identical cache state
produce byte-identical output.  Exact values are serialized as decimal
integer or "p/q" strings; high-precision reals carry --digits significant
digits.

Exit codes: 0 success / all checks pass, 1 verification or cache-integrity
failure, 2 usage error, 3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from . import asymptotics as asy
from . import cuttree as ct
from . import meanfield as mf
from . import planetree as pt
from .enumeration import (
    DEFAULT_NODE_BUDGET,
    CountTable,
    count_up_to,
    cycles,
    enumerate_subgraphs,
)
from .errors import (
    BudgetExceededError,
    CacheIntegrityError,
    IdentityError,
    SpecParseError,
)
from .lattice import Family, degree, parse_spec
from .meanfield import DEFAULT_MAP_BUDGET

DEFAULT_CACHE = "./latgrow-cache.csv"
CACHE_ENV = "LATGROW_CACHE"

IDENTITIES = (
    "mnsum",
    "nu-product",
    "cut-bijection",
    "sandwich",
    "f-closed-form",
    "f-series",
)

BUDGET_MARK = "budget-exceeded"


@dataclass
class Record:
    name: str
    value: str
    provenance: str  # "exact" or "high-precision"
    pass_fail: bool | None = None


@dataclass
class RunReport:
    command: str
    spec: str
    parameters: dict
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, value, provenance, pass_fail=None):
        self.results.append(Record(name, value, provenance, pass_fail))

    def any_failure(self) -> bool:
        return any(r.pass_fail is False for r in self.results)

    def any_budget_hit(self) -> bool:
        return any(r.value == BUDGET_MARK for r in self.results)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "spec": self.spec,
            "parameters": self.parameters,
            "results": [
                {
                    "name": r.name,
                    "value": r.value,
                    "provenance": r.provenance,
                    "pass_fail": r.pass_fail,
                }
                for r in self.results
            ],
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        doc = json.loads(text)
        rep = cls(doc["command"], doc["spec"], dict(doc["parameters"]))
        for r in doc["results"]:
            rep.add(r["name"], r["value"], r["provenance"], r["pass_fail"])
        rep.notes = list(doc["notes"])
        return rep

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", self.command])
        w.writerow(["spec", self.spec])
        for k, v in self.parameters.items():
            w.writerow([f"param:{k}", v])
        for note in self.notes:
            w.writerow(["note", note])
        w.writerow(["name", "value", "provenance", "pass_fail"])
        for r in self.results:
            pf = "" if r.pass_fail is None else str(r.pass_fail).lower()
            w.writerow([r.name, r.value, r.provenance, pf])
        return buf.getvalue()


def _real_str(x, digits: int) -> str:
    return mp.nstr(x, digits)


def _cache_path(args) -> str:
    if args.cache is not None:
        return args.cache
    return os.environ.get(CACHE_ENV, DEFAULT_CACHE)


# ---------------------------------------------------------------------------
# counts

def cmd_counts(args) -> RunReport:
    spec = parse_spec(args.spec)
    table = CountTable(_cache_path(args))
    trees, animals = count_up_to(
        spec, args.n_max, table=table, budget=args.budget, jobs=args.jobs
    )
    counts = trees if args.kind == "tree" else animals
    prefix = "t" if args.kind == "tree" else "a"
    rep = RunReport(
        "counts",
        spec.spec_string(),
        {"kind": args.kind, "n_max": str(args.n_max), "digits": str(args.digits)},
    )
    for n, c in enumerate(counts):
        rep.add(f"{prefix}_{n}", str(c), "exact")
    est = asy.growth_estimates(counts, dps=args.digits)
    for i, r in enumerate(est.root_estimates):
        rep.add(f"root_{i + 1}", _real_str(r, args.digits), "high-precision")
    for i, r in enumerate(est.ratio_estimates):
        rep.add(f"ratio_{i}_{i + 1}", _real_str(r, args.digits), "high-precision")
    return rep


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> RunReport:
    spec = parse_spec(args.spec)
    rep = RunReport(
        "verify",
        spec.spec_string(),
        {
            "identity": args.identity,
            "n_max": str(args.n_max),
            "digits": str(args.digits),
        },
    )
    handler = {
        "mnsum": _verify_mnsum,
        "nu-product": _verify_nu_product,
        "cut-bijection": _verify_cut_bijection,
        "sandwich": _verify_sandwich,
        "f-closed-form": _verify_f_closed_form,
        "f-series": _verify_f_series,
    }[args.identity]
    handler(spec, args, rep)
    return rep


def _verify_mnsum(spec, args, rep):
    # weight sum over configurations covering each lattice tree is 1
    for n in range(args.n_max + 1):
        try:
            checked = 0
            ok = True
            for tree in enumerate_subgraphs(spec, n, "tree", budget=args.budget):
                if mf.maps_onto_tree(spec, tree, budget=args.map_budget) != 1:
                    ok = False
                checked += 1
            rep.add(f"mnsum_n{n}", f"{checked} trees", "exact", ok)
        except BudgetExceededError as exc:
            rep.add(f"mnsum_n{n}", BUDGET_MARK, "exact", None)
            rep.notes.append(f"mnsum_n{n}: {exc}")


def _verify_nu_product(spec, args, rep):
    # counted matchings onto each cut-tree equal the forward-degree
    # factorial product, and the root recursion gives the same number
    for n in range(args.n_max + 1):
        try:
            checked = 0
            ok = True
            for animal in enumerate_subgraphs(spec, n, "animal", budget=args.budget):
                x = ct.cut_tree(spec, animal)
                nu = mf.maps_onto_cuttree(spec, x, budget=args.map_budget)
                if nu != ct.nu_product(x) or nu != ct.nu_recursive(x):
                    ok = False
                checked += 1
            rep.add(f"nu_n{n}", f"{checked} cut-trees", "exact", ok)
        except BudgetExceededError as exc:
            rep.add(f"nu_n{n}", BUDGET_MARK, "exact", None)
            rep.notes.append(f"nu_n{n}: {exc}")


def _verify_cut_bijection(spec, args, rep):
    for n in range(args.n_max + 1):
        try:
            seen = set()
            count = 0
            ok = True
            for animal in enumerate_subgraphs(spec, n, "animal", budget=args.budget):
                x = ct.cut_tree(spec, animal)
                if ct.reconstruct(spec, x) != animal:
                    ok = False
                if len(x.half_bonds) != cycles(animal):
                    ok = False
                seen.add(x)
                count += 1
            if len(seen) != count:
                ok = False
            rep.add(f"cut_trees_n{n}", str(len(seen)), "exact", ok)
        except BudgetExceededError as exc:
            rep.add(f"cut_trees_n{n}", BUDGET_MARK, "exact", None)
            rep.notes.append(f"cut_trees_n{n}: {exc}")


def _verify_sandwich(spec, args, rep):
    table = CountTable(_cache_path(args))
    K = degree(spec)
    try:
        trees, _ = count_up_to(
            spec, args.n_max, table=table, budget=args.budget, jobs=args.jobs
        )
    except BudgetExceededError as exc:
        rep.add("sandwich", BUDGET_MARK, "exact", None)
        rep.notes.append(f"sandwich: {exc}")
        return
    for n in range(args.n_max + 1):
        w = pt.w_sum(n)
        lower = mf.falling(K, n) * w
        upper = Fraction(K**n) * w
        t_n = trees[n]
        ok = lower <= t_n <= upper
        # corollary of the sandwich: the deficit of t_n/K^n below w_n
        ok = ok and (w - Fraction(t_n, K**n)) <= w * Fraction(n * (n - 1), 2 * K)
        rep.add(f"sandwich_n{n}", f"{lower};{t_n};{upper}", "exact", ok)


def _verify_f_closed_form(spec, args, rep):
    for n in range(args.n_max + 1):
        w_enum = pt.w_sum_by_enumeration(n)
        w_closed = pt.w_sum(n)
        catalan = math.comb(2 * n, n) // (n + 1)
        cardinality = sum(1 for _ in pt.enumerate_plane_trees(n))
        ok = w_enum == w_closed and cardinality == catalan
        rep.add(f"w_n{n}", str(w_closed), "exact", ok)


def _verify_f_series(spec, args, rep):
    z = asy.z0(spec, dps=args.digits)
    with mp.workdps(args.digits):
        e_val = +mp.e
        prev = None
        ok = True
        for N in range(args.n_max + 1):
            s = pt.f_partial_sum(spec, N, z, dps=args.digits)
            if prev is not None and not s >= prev:
                ok = False
            if not s < e_val:
                ok = False
            prev = s
            rep.add(f"f_partial_N{N}", _real_str(s, args.digits), "high-precision", ok)
        rep.add(
            "f_partial_gap_to_e",
            _real_str(e_val - prev, args.digits),
            "high-precision",
        )


# ---------------------------------------------------------------------------
# asymptotics

def cmd_asymptotics(args) -> RunReport:
    target = args.target
    spec = None
    if target.startswith("d="):
        tail = target[2:]
        if not tail.isdigit() or int(tail) < 1:
            raise SpecParseError(f"bad dimension target {target!r} (want d=<positive int>)")
        d = int(tail)
        K = 2 * d  # nearest-neighbour degree convention for bare dimensions
    else:
        spec = parse_spec(target)
        d = spec.d
        K = degree(spec)
    series_allowed = spec is None or spec.family is Family.NEAREST_NEIGHBOUR
    want_any = args.penrose or args.series or args.z0 or args.g1 is not None
    want_penrose = args.penrose or not want_any
    want_z0 = args.z0 or not want_any
    want_series = args.series or (not want_any and series_allowed)
    if args.series and not series_allowed:
        raise SpecParseError(
            "--series needs a nearest-neighbour spec or a d=N target "
            "(the degree series is indexed by dimension)"
        )
    if args.g1 is not None and spec is None:
        raise SpecParseError("--g1 needs a full lattice spec, not a bare dimension")
    if not 0 <= args.order <= asy.MAX_SERIES_ORDER:
        raise ValueError(
            f"--order must be in 0..{asy.MAX_SERIES_ORDER}; "
            "no series coefficients beyond that exist"
        )

    rep = RunReport(
        "asymptotics",
        target,
        {"order": str(args.order), "digits": str(args.digits)},
    )
    digits = args.digits
    if want_z0:
        with mp.workdps(digits):
            z0_val = +(1 / (K * mp.e))
        rep.add("z0", _real_str(z0_val, digits), "high-precision")
    if want_penrose:
        upper_exact = Fraction(K**K, (K - 1) ** (K - 1))
        pb = asy.penrose_bounds(K, dps=digits)
        with mp.workdps(digits):
            ratio = +(pb.upper / pb.main_term)
        rep.add("penrose_upper_exact", str(upper_exact), "exact")
        rep.add("penrose_upper", _real_str(pb.upper, digits), "high-precision")
        rep.add("penrose_main_term", _real_str(pb.main_term, digits), "high-precision")
        rep.add("penrose_ratio", _real_str(ratio, digits), "high-precision")
    if want_series:
        tau = asy.tau_series(d, args.order, dps=digits)
        alpha = asy.alpha_series(d, args.order, dps=digits)
        rep.add("sigma", str(tau.sigma), "exact")
        rep.add(f"tau_order{args.order}", _real_str(tau.value, digits), "high-precision")
        rep.add(f"alpha_order{args.order}", _real_str(alpha.value, digits), "high-precision")
        if args.order == asy.MAX_SERIES_ORDER and d >= 2:
            rep.add("alpha_gt_tau", str(bool(alpha.value > tau.value)).lower(),
                    "exact", bool(alpha.value > tau.value))
    if args.g1 is not None:
        table = CountTable(_cache_path(args))
        val = asy.g1_diagnostic(
            spec, args.g1, args.kind,
            table=table, dps=digits, budget=args.budget, jobs=args.jobs,
        )
        rep.add(f"g1_finite_n_N{args.g1}", _real_str(val, digits), "high-precision")
        rep.notes.append(
            f"g1_finite_n_N{args.g1} is a finite-n diagnostic; "
            "no convergence claim is made"
        )
    return rep


# ---------------------------------------------------------------------------
# wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    common.add_argument("--digits", type=int, default=50, metavar="D",
                        help="significant digits for real output (default 50)")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for enumeration (default 1)")
    common.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, metavar="B",
                        help="enumeration search-node budget")
    common.add_argument("--map-budget", type=int, default=DEFAULT_MAP_BUDGET,
                        metavar="B", help="configuration-matcher step budget")
    common.add_argument("--cache", default=None, metavar="PATH",
                        help=f"count cache file (default {DEFAULT_CACHE}, "
                             f"or ${CACHE_ENV}; this flag wins)")

    parser = argparse.ArgumentParser(
        prog="latgrow",
        description="Exact lattice tree/animal counts and identity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counts", parents=[common],
                       help="exact counts plus growth estimators")
    p.add_argument("spec", help="lattice spec, e.g. nn:d=2 or so:d=2:L=3")
    p.add_argument("kind", choices=("tree", "animal"))
    p.add_argument("n_max", type=int)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("verify", parents=[common],
                       help="exhaustively verify an exact identity")
    p.add_argument("spec")
    p.add_argument("identity", choices=IDENTITIES)
    p.add_argument("n_max", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asymptotics", parents=[common],
                       help="reference activity, degree bounds, series values")
    p.add_argument("target", help="lattice spec or bare dimension d=N")
    p.add_argument("--penrose", action="store_true")
    p.add_argument("--series", action="store_true")
    p.add_argument("--z0", action="store_true")
    p.add_argument("--g1", type=int, default=None, metavar="N",
                   help="finite-n diagnostic from counts up to N+1")
    p.add_argument("--kind", choices=("tree", "animal"), default="tree")
    p.add_argument("--order", type=int, default=asy.MAX_SERIES_ORDER)
    p.set_defaults(func=cmd_asymptotics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        report = args.func(args)
    except (SpecParseError, ValueError) as exc:
        print(f"latgrow: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"latgrow: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (CacheIntegrityError, IdentityError) as exc:
        print(f"latgrow: integrity failure: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.to_csv() if args.csv else report.to_json())
    if report.any_failure():
        return 1
    if report.any_budget_hit():
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
