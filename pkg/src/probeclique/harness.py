"""Seeded experiment batches and the all-in-one verification run."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import bounds, extremal
from .clique_solver import ExplicitGraph
from .graph_oracle import HiddenGraph, ProbeError
from .probe_algorithms import ALGORITHMS, AlgorithmParams

__all__ = [
    "ExperimentConfig",
    "algorithm_violations",
    "TrialRecord",
    "cover_chain_violations",
    "optimizer_violations",
    "run_experiment",
    "run_trial",
    "summarize",
    "to_csv",
    "to_json",
    "verify_all",
]


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str = "one"
    n: int = 1 << 16
    delta: float = 1.0
    c: float = 2.0
    trials: int = 20
    seed: int = 0
    out: Optional[str] = None
    format: str = "csv"
    p: float = 0.5
    stop_size: Optional[int] = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


@dataclass
class TrialRecord:
    seed: int
    n: int
    delta: float
    algorithm: str
    clique_size: int
    predicted_size: float
    probes_used: int
    rounds_used: int
    verified: bool
    degenerate: bool
    wall_time: Optional[float]
    error: str = ""


def run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    seed = config.seed + index
    graph = HiddenGraph(config.n, seed, Fraction(config.p))
    params = AlgorithmParams(config.delta, config.c, config.stop_size)
    start = time.perf_counter()
    try:
        report = ALGORITHMS[config.algorithm](graph, params)
    except ProbeError as exc:
        return TrialRecord(seed, config.n, config.delta, config.algorithm, 0, math.nan, 0, 0,
                           False, False, None, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start if config.timing else None
    return TrialRecord(seed, config.n, config.delta, config.algorithm, report.size,
                       report.predicted_size, report.probes_used, report.rounds_used,
                       report.verified, report.degenerate, elapsed)


def _run_indexed(args):
    config, index = args
    return index, run_trial(config, index)


def run_experiment(config: ExperimentConfig) -> tuple[list[TrialRecord], dict]:
    jobs = [(config, i) for i in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_indexed, jobs))
    else:
        results = [_run_indexed(job) for job in jobs]
    records = [rec for _, rec in sorted(results, key=lambda item: item[0])]
    return records, summarize(records)


def summarize(records: list[TrialRecord]) -> dict:
    ok = [r for r in records if not r.error]
    sizes = [r.clique_size for r in ok]
    residuals = [r.clique_size - r.predicted_size for r in ok]
    if not ok:
        return {"trials": len(records), "failed": len(records)}
    return {
        "trials": len(records),
        "failed": len(records) - len(ok),
        "mean": statistics.fmean(sizes),
        "stddev": statistics.stdev(sizes) if len(sizes) > 1 else 0.0,
        "min": min(sizes),
        "max": max(sizes),
        "mean_predicted": statistics.fmean(r.predicted_size for r in ok),
        "mean_residual": statistics.fmean(residuals),
        "within_one": sum(abs(x) <= 1 for x in residuals) / len(ok),
        "all_verified": all(r.verified or r.degenerate for r in ok),
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(TrialRecord)])
    for rec in records:
        writer.writerow([_cell(getattr(rec, f.name)) for f in fields(TrialRecord)])
    return buf.getvalue()


def to_json(config: ExperimentConfig, records: list[TrialRecord], summary: dict) -> str:
    def clean(x):
        return None if isinstance(x, float) and math.isnan(x) else x

    rows = [{k: clean(v) for k, v in asdict(r).items()} for r in records]
    return json.dumps({"config": asdict(config), "records": rows, "summary": summary},
                      indent=2, sort_keys=True)


# -- verification -----------------------------------------------------------

@lru_cache(maxsize=None)
def _chain_bounds(n: int, m: int, k: int, t: int) -> tuple[int, float, Optional[float]]:
    beta = Fraction(t, math.comb(k, 2))
    enc = extremal.n_cover_encoding_count(n, m, k, beta)
    enc_log = math.log2(enc) if enc else -math.inf
    closed = extremal.n_cover_closed_form(n, m, k, beta) if m >= 1 else None
    return enc, enc_log, closed


def _check_chain(g: ExplicitGraph, ks, bad: list) -> None:
    m = g.edge_count
    if m < 1:
        return  # covered-set counts are only bounded for graphs with edges
    for k in ks:
        if k >= g.n:
            continue
        hist = extremal.covered_profile(g, k)
        count = 0
        for t in range(len(hist) - 1, -1, -1):
            count += hist[t]
            enc, enc_log, closed = _chain_bounds(g.n, m, k, t)
            if not (count <= enc and enc_log <= closed):
                bad.append({"check": "cover_chain", "n": g.n, "edges": g.edges(), "k": k,
                            "t": t, "count": count, "encoding": enc_log, "closed_form": closed})


def cover_chain_violations(max_exhaustive_n: int = 6, random_graphs: int = 10_000,
                           max_random_n: int = 10, ks=(3, 4, 5), seed: int = 0) -> list[dict]:
    """count <= 2**encoding <= 2**closed_form on every threshold t / C(k, 2)."""
    bad: list[dict] = []
    for n in range(min(ks) + 1, max_exhaustive_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = ExplicitGraph.from_edges(n, (p for b, p in enumerate(pairs) if mask >> b & 1))
            _check_chain(g, ks, bad)
    rng = np.random.default_rng(seed)
    lo = max(min(ks) + 1, 2)
    for _ in range(random_graphs):
        n = int(rng.integers(lo, max_random_n + 1))
        density = rng.random()
        pairs = list(itertools.combinations(range(n), 2))
        keep = rng.random(len(pairs)) < density
        g = ExplicitGraph.from_edges(n, (p for p, on in zip(pairs, keep) if on))
        _check_chain(g, ks, bad)
    return bad


def optimizer_violations(ells=(2, 3, 4, 5), deltas=(1.0, 1.2, 1.5, 1.8), resolution: int = 64,
                         refine: bool = True) -> list[dict]:
    bad = []
    for ell in ells:
        res = bounds.optimize_beta(1.0, ell, resolution=resolution, refine=refine)
        target = bounds.corollary_bound(ell)
        if abs(res.value - target) > 1e-4:
            bad.append({"check": "optimizer_closed_form", "ell": ell, "value": res.value,
                        "expected": target})
        closed = bounds.closed_form_beta_delta1(ell)
        if max(abs(a - b) for a, b in zip(res.beta, closed)) > 1e-3:
            bad.append({"check": "optimizer_beta", "ell": ell, "beta": res.beta,
                        "expected": closed})
    for delta in deltas:
        for ell in range(1, 6):
            cap = bounds.explicit_bound(delta, ell)
            witness = bounds.upper_bound_alpha(bounds.BoundSpec(delta, bounds.explicit_beta(delta, ell)))
            res = bounds.optimize_beta(delta, ell, resolution=resolution, refine=refine)
            if witness.value > cap + 1e-9 or res.value > cap + 1e-9 or res.value >= 2 - 1e-6:
                bad.append({"check": "explicit_bound", "delta": delta, "ell": ell,
                            "witness": witness.value, "optimized": res.value, "cap": cap})
    return bad


def algorithm_violations(n: int = 4096, seeds=range(10)) -> list[dict]:
    # Greedy spends about 2n probes before its final batch of about q/2 pairs
    # (stop size floor(sqrt(q))), so it needs c > 4.
    budgets = {"one": 2.0, "two": 2.0, "three": 2.0, "greedy": 5.0}
    limits = {"one": 1, "two": 2, "three": 3, "greedy": None}
    bad = []
    for name, c in budgets.items():
        params = AlgorithmParams(1.0, c)
        for seed in seeds:
            try:
                rep = ALGORITHMS[name](HiddenGraph(n, seed), params)
            except ProbeError as exc:
                bad.append({"check": "algorithm", "algorithm": name, "seed": seed, "error": str(exc)})
                continue
            over_rounds = limits[name] is not None and rep.rounds_used > limits[name]
            if not rep.verified or rep.probes_used > params.budget(n) or over_rounds:
                bad.append({"check": "algorithm", "algorithm": name, "seed": seed,
                            "verified": rep.verified, "probes": rep.probes_used,
                            "rounds": rep.rounds_used})
    return bad


def verify_all(kmax: int = 7, mu_fn=None, optimizer_resolution: int = 64, refine: bool = True,
               random_graphs: int = 10_000, algorithm_seeds=range(10)) -> list[dict]:
    """Run every verification suite; an empty list means everything passed."""
    failures = [{"check": "matching_sandwich", **row}
                for row in extremal.matching_sandwich_violations(kmax, mu_fn=mu_fn)]
    failures += cover_chain_violations(random_graphs=random_graphs)
    failures += optimizer_violations(resolution=optimizer_resolution, refine=refine)
    failures += algorithm_violations(seeds=algorithm_seeds)
    return failures
