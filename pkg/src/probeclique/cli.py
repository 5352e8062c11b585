"""Command-line entry point.

Every option can also be supplied through an environment variable named
``PROBECLIQUE_<OPTION>`` (upper case, dashes as underscores); explicit flags win.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import bounds, extremal
from .clique_solver import ExplicitGraph
from .graph_oracle import HiddenGraph
from .harness import ExperimentConfig, run_experiment, to_csv, to_json, verify_all

ENV_PREFIX = "PROBECLIQUE_"


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _add(parser, flag: str, **kwargs):
    dest = flag.lstrip("-").replace("-", "_")
    value = _env(dest, kwargs.get("default"))
    if "nargs" in kwargs and isinstance(value, str):
        value = [kwargs.get("type", str)(x) for x in value.split(",")]
    kwargs["default"] = value
    parser.add_argument(flag, dest=dest, **kwargs)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off", ""):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def cmd_simulate(args) -> int:
    config = ExperimentConfig(
        algorithm=args.algorithm, n=args.n, delta=args.delta, c=args.c, trials=args.trials,
        seed=args.seed, out=args.out, format=args.format, p=args.p, stop_size=args.stop_size,
        workers=args.workers, timing=args.timing,
    )
    records, summary = run_experiment(config)
    text = to_csv(records) if config.format == "csv" else to_json(config, records, summary) + "\n"
    _emit(text, config.out)
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def cmd_verify_matching(args) -> int:
    rows, failed = [], False
    for k in range(args.kmin, args.kmax + 1):
        for row in extremal.matching_minmax_table(k):
            low = extremal.mu_floor(k, row.beta)
            failed |= not low <= row.value <= low + 1
            edges = " ".join(f"{u}-{v}" for u, v in row.witness.edges())
            rows.append([k, row.t, str(row.beta), row.value, low, edges])
    _emit(_table(["k", "t", "beta", "M", "floor_mu", "witness_edges"], rows), args.out)
    return 1 if failed else 0


def cmd_count_covered(args) -> int:
    beta_hint = Fraction(args.beta) if args.beta is not None else None
    if args.construction == "random":
        hidden = HiddenGraph(args.n, args.seed)
        edges = [(u, v) for u in range(args.n) for v in range(u + 1, args.n) if hidden.edge(u, v)]
        g = ExplicitGraph.from_edges(args.n, edges)
    elif args.construction == "split":
        g = extremal.tight_example_split(args.n, args.m, args.k, beta_hint).graph
    else:
        g = extremal.tight_example_clique(args.m, args.k, beta_hint, args.n).graph
    hist = extremal.covered_profile(g, args.k)
    total = math.comb(args.k, 2)
    betas = [beta_hint] if beta_hint is not None else [Fraction(t, total) for t in range(total + 1)]
    rows = []
    for beta in betas:
        count = extremal.covered_from_profile(hist, args.k, beta)
        m = g.edge_count
        enc = extremal.n_cover_encoding_bound(g.n, m, args.k, beta) if args.k < g.n else None
        closed = extremal.n_cover_closed_form(g.n, m, args.k, beta) if args.k < g.n and m else None
        rows.append([g.n, m, args.k, str(beta), count, _fmt(enc), _fmt(closed)])
    header = ["n", "m", "k", "beta", "count", "log2_encoding_bound", "log2_closed_form_bound"]
    _emit(_table(header, rows), args.out)
    return 0


def cmd_bounds_table(args) -> int:
    rows = []
    for delta in args.delta:
        for ell in range(1, args.lmax + 1):
            res = bounds.optimize_beta(delta, ell)
            corollary = bounds.corollary_bound(ell) if delta == 1 else None
            rows.append([_fmt(delta), ell, _fmt(res.value), _fmt(bounds.explicit_bound(delta, ell)),
                         _fmt(corollary), ";".join(_fmt(b) for b in res.beta)])
    header = ["delta", "ell", "optimized", "explicit_bound", "corollary", "beta"]
    _emit(_table(header, rows), args.out)
    return 0


def cmd_verify_all(args) -> int:
    failures = verify_all(kmax=args.kmax, random_graphs=args.random_graphs)
    print(json.dumps({"passed": not failures, "failures": failures}, indent=2, default=str))
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probeclique", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run seeded trials of a probe algorithm")
    _add(sim, "--algorithm", choices=["one", "two", "three", "greedy"], default="one")
    _add(sim, "--n", type=int, default=1 << 16)
    _add(sim, "--delta", type=float, default=1.0)
    _add(sim, "--c", type=float, default=2.0)
    _add(sim, "--trials", type=int, default=20)
    _add(sim, "--seed", type=int, default=0)
    _add(sim, "--out", default=None)
    _add(sim, "--format", choices=["csv", "json"], default="csv")
    _add(sim, "--p", type=float, default=0.5, help="edge probability: 0, 0.5 or 1")
    _add(sim, "--stop-size", type=int, default=None)
    _add(sim, "--workers", type=int, default=1)
    _add(sim, "--timing", type=_bool, default=False, help="record wall time (breaks byte-identical output)")
    sim.set_defaults(func=cmd_simulate)

    ext = sub.add_parser("extremal", help="brute-force extremal checks")
    ext_sub = ext.add_subparsers(dest="extremal_command", required=True)
    vm = ext_sub.add_parser("verify-matching", help="tabulate M(k, t) against floor(mu)")
    _add(vm, "--kmax", type=int, default=7)
    _add(vm, "--kmin", type=int, default=3)
    _add(vm, "--out", default=None)
    vm.set_defaults(func=cmd_verify_matching)
    cc = ext_sub.add_parser("count-covered", help="count beta-covered k-sets in a graph")
    _add(cc, "--construction", choices=["random", "split", "clique"], default="random")
    _add(cc, "--n", type=int, default=20)
    _add(cc, "--m", type=int, default=40)
    _add(cc, "--k", type=int, default=5)
    _add(cc, "--beta", default=None, help="threshold as a fraction, e.g. 1/2; all t/C(k,2) if omitted")
    _add(cc, "--seed", type=int, default=0)
    _add(cc, "--out", default=None)
    cc.set_defaults(func=cmd_count_covered)

    bnd = sub.add_parser("bounds", help="upper-bound optimisation")
    bnd_sub = bnd.add_subparsers(dest="bounds_command", required=True)
    tbl = bnd_sub.add_parser("table", help="optimised, explicit and corollary bounds")
    _add(tbl, "--delta", type=float, nargs="+", default=[1.0])
    _add(tbl, "--lmax", type=int, default=5)
    _add(tbl, "--out", default=None)
    tbl.set_defaults(func=cmd_bounds_table)

    ver = sub.add_parser("verify", help="verification suites")
    ver_sub = ver.add_subparsers(dest="verify_command", required=True)
    va = ver_sub.add_parser("all", help="run every suite; nonzero exit on failure")
    _add(va, "--kmax", type=int, default=7)
    _add(va, "--random-graphs", type=int, default=10_000)
    va.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
