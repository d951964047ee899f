"""Command-line front end: analyze scenarios, check the built-in solution
tables, sweep eta, and cross-check the numeric oracle.

Exit codes: 0 success, 1 a check failed, 2 bad arguments, 3 search budget
exceeded.  COALITION_FORGE_THREADS caps the sweep worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import regimes, report
from .equilibrium import (
    BudgetExceeded,
    multi_partition_profile_count,
    no_multi_partition_nash,
    no_weak_ne_partition,
)
from .model import alone_profile, make_config
from .partitions import all_partitions, is_weak_criterion, is_weak_exact
from .solver import (
    NonConvergence,
    adamant_action,
    adamant_value,
    aggregate_action,
    coalition_value,
    numeric_equilibrium,
    oracle_deviation,
)

POA_TOL = 1e-9


def _threads() -> int:
    raw = os.environ.get("COALITION_FORGE_THREADS", "")
    if raw.strip():
        return max(1, int(raw))
    return min(8, os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coalition-forge",
        description="Coalition formation over proportional resource sharing "
        "with an adamant outsider.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def stability_flags(sp):
        sp.add_argument("--symmetry", action=argparse.BooleanOptionalAction,
                        default=True, help="use relabeling symmetry in searches")
        sp.add_argument("--seed", type=int, default=None,
                        help="accepted for interface stability; all paths are deterministic")

    a = sub.add_parser("analyze", help="equilibrium partitions, social optimum, price of anarchy")
    a.add_argument("--n", type=int, required=True, help="number of cooperating players")
    a.add_argument("--eta", type=float, default=0.0, help="outsider strength (0 = absent)")
    a.add_argument("--no-adamant", action="store_true", help="drop the outsider (requires eta 0)")
    a.add_argument("--format", choices=("json", "csv", "text"), default="text")
    a.add_argument("--out", default=None, help="write to this path instead of stdout")
    stability_flags(a)

    t = sub.add_parser("tables", help="check the built-in solution tables row by row")
    t.add_argument("--which", choices=("n2", "n3", "n4", "large", "noadamant"), required=True)
    t.add_argument("--n", type=int, default=5, help="player count for --which large")
    t.add_argument("--tolerance", type=float, default=1e-4,
                   help="offset of the edge sample points inside each row")
    stability_flags(t)

    s = sub.add_parser("sweep", help="one record per eta sample, for plotting")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eta-min", type=float, required=True)
    s.add_argument("--eta-max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.add_argument("--log", action="store_true", help="space the samples geometrically")
    stability_flags(s)

    o = sub.add_parser("oracle", help="closed forms vs the numeric best-response solver")
    o.add_argument("--k", type=int, required=True, help="number of coalitions")
    o.add_argument("--eta", type=float, required=True)
    o.add_argument("--gamma", type=float, default=1.0)
    o.add_argument("--tolerance", type=float, default=1e-6)
    stability_flags(o)

    v = sub.add_parser("verify", help="run the fast property battery")
    v.add_argument("--n", type=int, default=None, help="restrict to one player count")
    v.add_argument("--tolerance", type=float, default=1e-6)
    stability_flags(v)

    return p


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        print(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _config_from_args(parser, n, eta, no_adamant):
    if n < 1:
        parser.error("--n must be at least 1")
    if eta < 0:
        parser.error("--eta must be nonnegative")
    if no_adamant and eta != 0:
        parser.error("--no-adamant requires --eta 0")
    if not no_adamant and eta == 0:
        parser.error("eta 0 means the outsider is absent; pass --no-adamant to confirm")
    return make_config(n, eta)


def cmd_analyze(parser, args) -> int:
    config = _config_from_args(parser, args.n, args.eta, args.no_adamant)
    try:
        record = report.analyze(config)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        _emit(report.to_json(record), args.out)
    elif args.format == "csv":
        _emit(report.CSV_HEADER + "\n" + report.to_csv_row(record), args.out)
    else:
        _emit(report.to_text(record), args.out)
    return 0


def _check_row(row: regimes.RegimeRow, delta: float) -> tuple[bool, list[str]]:
    details = []
    ok = True
    if row.table == "noadamant":
        samples = (0.0,)
    else:
        samples = row.samples(delta)
    for eta in samples:
        config = make_config(row.n, eta)
        rec = report.analyze(config)
        got_ne, got_so = set(rec.ne_partitions), set(rec.so_partitions)
        want_poa = row.poa(eta)
        if got_ne != set(row.ne):
            ok = False
            details.append(f"eta={eta:.6g}: equilibrium classes {sorted(got_ne)} "
                           f"!= expected {sorted(row.ne)}")
        if got_so != set(row.so):
            ok = False
            details.append(f"eta={eta:.6g}: optimum classes {sorted(got_so)} "
                           f"!= expected {sorted(row.so)}")
        if abs(rec.poa - want_poa) > POA_TOL:
            ok = False
            details.append(f"eta={eta:.6g}: poa {rec.poa!r} != expected {want_poa!r}")
    return ok, details


def cmd_tables(parser, args) -> int:
    if args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    try:
        rows = regimes.rows(args.which, args.n)
    except ValueError as exc:
        parser.error(str(exc))
    if args.which == "large" and args.n > 6:
        print(f"error: exhaustive search supports n <= 6, got n={args.n}", file=sys.stderr)
        return 3
    failures = 0
    for row in rows:
        ok, details = _check_row(row, args.tolerance)
        rng = ("" if row.table == "noadamant"
               else f"  eta in ({row.lo:.6g}, {row.hi:.6g})")
        print(f"{row.table} row {row.row:>2}  {'PASS' if ok else 'FAIL'}{rng}")
        for flag in row.flags:
            print(f"    note: {flag}")
        for d in details:
            print(f"    {d}")
        if not ok:
            failures += 1
    total = len(rows)
    print(f"{total - failures}/{total} rows pass")
    return 0 if failures == 0 else 1


def cmd_sweep(parser, args) -> int:
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.eta_min < 0 or args.eta_max < args.eta_min:
        parser.error("need 0 <= eta-min <= eta-max")
    if args.log and args.eta_min <= 0:
        parser.error("--log needs eta-min > 0")
    if args.log:
        ratio = (args.eta_max / args.eta_min) ** (1.0 / (args.steps - 1))
        etas = [args.eta_min * ratio**i for i in range(args.steps)]
    else:
        step = (args.eta_max - args.eta_min) / (args.steps - 1)
        etas = [args.eta_min + step * i for i in range(args.steps)]

    def run(eta: float) -> report.ReportRecord:
        return report.analyze(make_config(args.n, eta))

    try:
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            records = list(pool.map(run, etas))
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        body = "\n".join(report.to_json(r) for r in records)
    else:
        body = report.CSV_HEADER + "\n" + "\n".join(report.to_csv_row(r) for r in records)
    try:
        _emit(body, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_oracle(parser, args) -> int:
    if args.k < 1:
        parser.error("--k must be at least 1")
    if args.eta < 0:
        parser.error("--eta must be nonnegative")
    if args.gamma <= 0:
        parser.error("--gamma must be positive")
    if args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    config = make_config(args.k, args.eta, gamma=args.gamma)
    solver_tol = min(1e-9, args.tolerance / 100.0)
    try:
        numeric = numeric_equilibrium(args.k, config, tol=solver_tol)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    k = args.k
    closed_u = coalition_value(k, config)
    closed_a = aggregate_action(k, config)
    num_u = next(iter(numeric.per_coalition_utility.values()))
    num_a = next(iter(numeric.aggregate_actions.values()))
    print(f"k={k} eta={args.eta:g} gamma={args.gamma:g} "
          f"({'significant' if numeric.significant else 'insignificant'} outsider)")
    print(f"{'':24}{'closed form':>16}{'numeric':>16}")
    print(f"{'coalition utility':<24}{closed_u:>16.10f}{num_u:>16.10f}")
    print(f"{'coalition action':<24}{closed_a:>16.10f}{num_a:>16.10f}")
    print(f"{'adamant utility':<24}{adamant_value(k, config):>16.10f}"
          f"{numeric.adamant_utility:>16.10f}")
    print(f"{'adamant action':<24}{adamant_action(k, config):>16.10f}"
          f"{numeric.adamant_action:>16.10f}")
    deviation = oracle_deviation(k, config, tol=solver_tol)
    print(f"max absolute deviation: {deviation:.3e}")
    if deviation >= args.tolerance:
        print(f"FAIL: deviation {deviation:.3e} >= tolerance {args.tolerance:g}")
        return 1
    print("PASS")
    return 0


def _verify_checks(ns: list[int], tol: float):
    eta_grid = (1e-3, 0.1, 0.3, 0.45, 0.55, 0.72, 1.0, 2.0, 5.0, 1e3)

    def alone_is_ne():
        from .equilibrium import is_nash
        for n in ns:
            for eta in eta_grid:
                if not is_nash(alone_profile(n), make_config(n, eta)):
                    return False, f"all-alone profile not an equilibrium at n={n}, eta={eta}"
        return True, ""

    def single_partition_ne():
        for n in [x for x in ns if x >= 5]:
            for eta in eta_grid:
                if not no_multi_partition_nash(make_config(n, eta)):
                    return False, f"multi-partition equilibrium at n={n}, eta={eta}"
        return True, ""

    def weak_never_ne():
        for n in ns:
            for eta in eta_grid:
                if not no_weak_ne_partition(make_config(n, eta)):
                    return False, f"weak equilibrium partition at n={n}, eta={eta}"
        return True, ""

    def criterion_implies_exact():
        for n in ns:
            for eta in eta_grid:
                config = make_config(n, eta)
                for p in all_partitions(n):
                    if is_weak_criterion(p) and not is_weak_exact(p, config):
                        return False, f"criterion without exact weakness: {p} eta={eta}"
        return True, ""

    def oracle_matches():
        for k in range(1, max(ns) + 1):
            for eta in (0.1, 1.0, 2.0):
                config = make_config(max(ns), eta)
                if oracle_deviation(k, config) >= tol:
                    return False, f"oracle deviation >= {tol} at k={k}, eta={eta}"
        return True, ""

    def multi_profiles_exist():
        counts = {n: multi_partition_profile_count(n) for n in ns if 3 <= n <= 4}
        bad = [n for n, c in counts.items() if c == 0]
        if bad:
            return False, f"expected multi-partition profiles at n={bad}"
        return True, ", ".join(f"n={n}: {c} profiles" for n, c in counts.items())

    return (
        ("all-alone profile is always an equilibrium", alone_is_ne),
        ("n>4: no equilibrium forms multiple partitions", single_partition_ne),
        ("weak partitions never appear at equilibrium", weak_never_ne),
        ("size criterion implies definitional weakness", criterion_implies_exact),
        ("numeric oracle matches the closed forms", oracle_matches),
        ("multiple-partition profiles exist (n=3,4)", multi_profiles_exist),
    )


def cmd_verify(parser, args) -> int:
    ns = [args.n] if args.n else [2, 3, 4, 5]
    if any(n < 1 for n in ns):
        parser.error("--n must be at least 1")
    if any(n > 6 for n in ns):
        print("error: exhaustive search supports n <= 6", file=sys.stderr)
        return 3
    failures = 0
    for name, check in _verify_checks(ns, args.tolerance):
        ok, detail = check()
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            failures += 1
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "tables": cmd_tables,
        "sweep": cmd_sweep,
        "oracle": cmd_oracle,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](parser, args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
