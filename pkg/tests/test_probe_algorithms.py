import math

import pytest

from oracles import matula
from probeclique.graph_oracle import HiddenGraph
from probeclique.probe_algorithms import (
    ALGORITHMS,
    AlgorithmParams,
    _two_round_sizes,
    run_greedy_adaptive,
    run_one_round,
    run_three_round,
    run_two_round,
    stage_prediction,
)

ROUND_LIMITS = {"one": 1, "two": 2, "three": 3, "greedy": None}
# Greedy's default stop size leaves a final batch of about q/2 pairs on top of
# about 2n probes spent walking down, so it gets a larger constant.
BUDGET_C = {"one": 2.0, "two": 2.0, "three": 2.0, "greedy": 5.0}


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
@pytest.mark.parametrize("seed", range(0, 100, 10))
def test_verified_within_budget(name, seed):
    n = 4096
    params = AlgorithmParams(1.0, BUDGET_C[name])
    report = ALGORITHMS[name](HiddenGraph(n, seed), params)
    assert report.verified
    assert report.probes_used <= params.budget(n)
    if ROUND_LIMITS[name] is not None:
        assert report.rounds_used <= ROUND_LIMITS[name]


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_deterministic(name):
    params = AlgorithmParams(1.0, BUDGET_C[name])
    a = ALGORITHMS[name](HiddenGraph(2048, 4), params)
    b = ALGORITHMS[name](HiddenGraph(2048, 4), params)
    assert a == b


@pytest.mark.parametrize("name", ["one", "two", "three"])
def test_empty_graph_gives_single_vertex(name):
    report = ALGORITHMS[name](HiddenGraph(1024, 0, 0), AlgorithmParams())
    assert report.size == 1
    assert report.verified or report.degenerate


def test_greedy_empty_graph():
    report = run_greedy_adaptive(HiddenGraph(1024, 0, 0), AlgorithmParams())
    assert report.size == 1 and report.verified


def test_complete_graph_one_round_takes_all_probed():
    n = 1024
    params = AlgorithmParams()
    report = run_one_round(HiddenGraph(n, 0, 1), params)
    assert report.size == math.isqrt(2 * params.budget(n))
    assert report.probes_used == math.comb(report.size, 2)


def test_complete_graph_multi_round():
    n = 4096
    for fn in (run_two_round, run_three_round):
        report = fn(HiddenGraph(n, 0, 1), AlgorithmParams())
        assert report.verified
        assert report.size == report.stages["S"] + math.ceil(n**0.5)


def test_greedy_complete_graph_respects_stop_size():
    report = run_greedy_adaptive(HiddenGraph(200, 0, 1), AlgorithmParams(1.0, 120.0, stop_size=20))
    assert report.size == 200
    assert report.stages["K_final"] == 20


def test_monotone_in_budget_constant():
    # Larger c only enlarges the probed set, which can only grow the clique.
    n = 4096
    for seed in range(5):
        sizes = [run_one_round(HiddenGraph(n, seed), AlgorithmParams(1.0, c)).size
                 for c in (0.5, 1.0, 2.0)]
        assert sizes == sorted(sizes)


def test_multi_round_unchanged_when_sizes_unchanged():
    n = 4096
    for fn in (run_two_round, run_three_round):
        for seed in range(3):
            a = fn(HiddenGraph(n, seed), AlgorithmParams(1.0, 2.0))
            b = fn(HiddenGraph(n, seed), AlgorithmParams(1.0, 3.0))
            assert b.size >= a.size


def test_two_round_regime_continuity():
    for n in (2**10, 2**15, 2**20, 10**6):
        below = max(1, math.floor(n ** (1.2 / 6) + 1e-9))
        above = max(1, math.floor(n ** (0.5 - 1.2 / 4) + 1e-9))
        assert below == above == math.floor(n ** 0.2 + 1e-9)
        assert _two_round_sizes(n, 1.2)[0] == below
        assert abs(_two_round_sizes(n, 1.2 + 1e-12)[0] - below) <= 1


def test_two_round_sizes_positive():
    for n in (64, 1000, 4096, 2**16):
        for delta in (1.0, 1.1, 1.2, 1.5, 1.9):
            s, t = _two_round_sizes(n, delta)
            assert s >= 1 and t >= 1 and s + t <= n


def test_stage_prediction():
    assert stage_prediction(0) == 0 and stage_prediction(2) == 2
    assert stage_prediction(362) == pytest.approx(matula(362))


def test_predictions_are_compositional():
    report = run_two_round(HiddenGraph(4096, 1), AlgorithmParams())
    st = report.stages
    assert report.predicted_size == pytest.approx(st["S_prime"] + stage_prediction(st["T_prime"]))
    assert st["T_prime"] <= math.ceil(4096**0.5)


def test_bad_params():
    with pytest.raises(ValueError):
        AlgorithmParams(2.0)
    with pytest.raises(ValueError):
        AlgorithmParams(1.0, 0)
    with pytest.raises(ValueError):
        AlgorithmParams(1.0, 1.0, 0)
