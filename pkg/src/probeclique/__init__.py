"""Clique finding in G(n, 1/2) under a probe budget, with the matching bounds
and the simplex optimisation that limit what few-round algorithms can do."""

from .bounds import (
    BoundResult,
    BoundSpec,
    closed_form_beta_delta1,
    corollary_bound,
    explicit_beta,
    explicit_bound,
    f_bound,
    log_failure_bound,
    optimize_beta,
    upper_bound_alpha,
)
from .clique_solver import CliqueReport, ExplicitGraph, matula_omega, max_clique
from .graph_oracle import (
    BudgetExceeded,
    HiddenGraph,
    InvalidPair,
    ProbeLedger,
    RoundLimitExceeded,
    export_transcript,
    new_hidden_graph,
    probe_batch,
    verify_clique,
)
from .probe_algorithms import (
    AlgorithmParams,
    run_greedy_adaptive,
    run_one_round,
    run_three_round,
    run_two_round,
)

__version__ = "0.1.0"
