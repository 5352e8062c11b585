"""Clique-finding strategies that see the hidden graph only through probes.

Each run owns a fresh :class:`ProbeLedger` sized to ``ceil(c * n**delta)``
and returns a :class:`CliqueReport`. Vertex choices are always the lowest
available indices so a run is a pure function of the graph and parameters.

Size predictions are compositional: the clique found in each stage is
estimated with Matula's formula on the set sizes that actually occurred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .clique_solver import CliqueReport, ExplicitGraph, matula_omega, max_clique
from .graph_oracle import HiddenGraph, ProbeLedger, probe_budget, verify_clique

__all__ = [
    "AlgorithmParams",
    "ALGORITHMS",
    "run_greedy_adaptive",
    "run_one_round",
    "run_three_round",
    "run_two_round",
    "stage_prediction",
]

_EPS = 1e-9


@dataclass(frozen=True)
class AlgorithmParams:
    delta: float = 1.0
    c: float = 2.0
    stop_size: Optional[int] = None  # greedy only; None means floor(sqrt(q))

    def __post_init__(self):
        if not 1 <= self.delta < 2:
            raise ValueError(f"delta must lie in [1, 2), got {self.delta}")
        if self.c <= 0:
            raise ValueError("budget constant must be positive")
        if self.stop_size is not None and self.stop_size < 1:
            raise ValueError("stop_size must be at least 1")

    def budget(self, n: int) -> int:
        return probe_budget(n, self.delta, self.c)


def stage_prediction(m: int) -> float:
    """Expected clique number of G(m, 1/2); exact for the trivial sizes below 3."""
    return matula_omega(m) if m >= 3 else float(m)


def _floor_pow(n: int, exponent: float) -> int:
    return math.floor(n**exponent + _EPS)


def _ceil_pow(n: int, exponent: float) -> int:
    return math.ceil(n**exponent - _EPS)


def _probe_within(ledger: ProbeLedger, graph: HiddenGraph, vertices: np.ndarray) -> ExplicitGraph:
    """Probe every pair inside ``vertices`` (ascending) as one round."""
    m = len(vertices)
    ii, jj = np.triu_indices(m, 1)
    pairs = np.stack([vertices[ii], vertices[jj]], axis=1)
    answers = ledger.probe(graph, pairs)
    return _induced(answers, vertices, ii, jj)


def _induced(answers, vertices, ii, jj) -> ExplicitGraph:
    m = len(vertices)
    vs = vertices.tolist()
    bits = np.fromiter((answers[(vs[a], vs[b])] for a, b in zip(ii.tolist(), jj.tolist())),
                       dtype=bool, count=len(ii))
    mat = np.zeros((m, m), dtype=bool)
    mat[ii, jj] = bits
    mat[jj, ii] = bits
    return ExplicitGraph.from_matrix(mat)


def _common_neighbours(answers, sources: list[int], targets: np.ndarray) -> np.ndarray:
    keep = np.ones(len(targets), dtype=bool)
    for s in sources:
        keep &= np.fromiter(
            (answers[(s, t) if s < t else (t, s)] for t in targets.tolist()),
            dtype=bool, count=len(targets),
        )
    return targets[keep]


def _finish(ledger, vertices, predicted, degenerate, stages) -> CliqueReport:
    vertices = tuple(sorted(int(v) for v in vertices))
    return CliqueReport(
        vertices=vertices,
        probes_used=ledger.probes_used,
        rounds_used=ledger.rounds_used,
        predicted_size=predicted,
        verified=verify_clique(ledger, vertices),
        degenerate=degenerate,
        stages=stages,
    )


def run_one_round(graph: HiddenGraph, params: AlgorithmParams = AlgorithmParams()) -> CliqueReport:
    q = params.budget(graph.n)
    ledger = ProbeLedger(q, max_rounds=1)
    m = min(graph.n, math.isqrt(2 * q))
    S = np.arange(m, dtype=np.int64)
    sub = _probe_within(ledger, graph, S)
    clique = S[list(max_clique(sub))]
    return _finish(ledger, clique, stage_prediction(m), False, {"S": m})


def _two_round_sizes(n: int, delta: float) -> tuple[int, int]:
    if delta <= 6 / 5:
        s = max(1, _floor_pow(n, delta / 6))
        t = math.floor(n**delta / s + _EPS)
    else:
        s = max(1, _floor_pow(n, 0.5 - delta / 4))
        t = math.floor(n**delta / s + _EPS)
    s = min(s, n)
    return s, min(n - s, t)


def _second_stage(ledger, graph, S_prime, T, answers, cap):
    """Shared tail of the multi-round algorithms: T', its clique, the report."""
    T_common = _common_neighbours(answers, S_prime, T)
    T_prime = T_common[:cap]
    sub = _probe_within(ledger, graph, T_prime)
    tail = T_prime[list(max_clique(sub))] if len(T_prime) else np.zeros(0, dtype=np.int64)
    predicted = len(S_prime) + stage_prediction(len(T_prime))
    stages = {"S_prime": len(S_prime), "T": len(T), "T_common": len(T_common),
              "T_prime": len(T_prime)}
    return _finish(ledger, list(S_prime) + tail.tolist(), predicted, len(T_prime) == 0, stages)


def run_two_round(graph: HiddenGraph, params: AlgorithmParams = AlgorithmParams()) -> CliqueReport:
    n, delta = graph.n, params.delta
    ledger = ProbeLedger(params.budget(n), max_rounds=2)
    s, t = _two_round_sizes(n, delta)
    S = np.arange(s, dtype=np.int64)
    T = np.arange(s, s + t, dtype=np.int64)

    ii, jj = np.triu_indices(s, 1)
    within = np.stack([S[ii], S[jj]], axis=1)
    across = np.stack([np.repeat(S, t), np.tile(T, s)], axis=1)
    answers = ledger.probe(graph, np.concatenate([within, across]))

    S_prime = S[list(max_clique(_induced(answers, S, ii, jj)))].tolist()
    report = _second_stage(ledger, graph, S_prime, T, answers, _ceil_pow(n, delta / 2))
    report.stages["S"] = s
    return report


def run_three_round(graph: HiddenGraph, params: AlgorithmParams = AlgorithmParams()) -> CliqueReport:
    n, delta = graph.n, params.delta
    ledger = ProbeLedger(params.budget(n), max_rounds=3)
    s = min(n, max(1, _floor_pow(n, (1 - delta / 2) / 2)))
    S = np.arange(s, dtype=np.int64)
    sub = _probe_within(ledger, graph, S)
    S_prime = S[list(max_clique(sub))].tolist()

    t = min(n - s, math.floor(n / math.log2(n))) if n >= 2 else 0
    T = np.arange(s, s + t, dtype=np.int64)
    across = np.stack([np.repeat(np.array(S_prime, dtype=np.int64), t),
                       np.tile(T, len(S_prime))], axis=1)
    answers = ledger.probe(graph, across)

    report = _second_stage(ledger, graph, S_prime, T, answers, _ceil_pow(n, delta / 2))
    report.stages["S"] = s
    return report


def run_greedy_adaptive(graph: HiddenGraph, params: AlgorithmParams = AlgorithmParams()) -> CliqueReport:
    q = params.budget(graph.n)
    stop = params.stop_size if params.stop_size is not None else max(1, math.isqrt(q))
    ledger = ProbeLedger(q)
    K = np.arange(graph.n, dtype=np.int64)
    chosen: list[int] = []
    while len(K) > stop:
        v, rest = int(K[0]), K[1:]
        answers = ledger.probe(graph, np.stack([np.full(len(rest), v), rest], axis=1))
        keep = np.fromiter((answers[(v, u)] for u in rest.tolist()), dtype=bool, count=len(rest))
        K = rest[keep]
        chosen.append(v)
    sub = _probe_within(ledger, graph, K)
    tail = K[list(max_clique(sub))].tolist() if len(K) else []
    predicted = len(chosen) + stage_prediction(len(K))
    stages = {"steps": len(chosen), "K_final": len(K), "stop_size": stop}
    return _finish(ledger, chosen + tail, predicted, False, stages)


ALGORITHMS = {
    "one": run_one_round,
    "two": run_two_round,
    "three": run_three_round,
    "greedy": run_greedy_adaptive,
}
