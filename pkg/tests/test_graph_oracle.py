import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probeclique.graph_oracle import (
    BudgetExceeded,
    HiddenGraph,
    InvalidPair,
    ProbeLedger,
    RoundLimitExceeded,
    export_transcript,
    probe_budget,
    verify_clique,
)


def test_density_near_half():
    g = HiddenGraph(1000, 7)
    i, j = np.triu_indices(1000, 1)
    density = g.edges(i, j).mean()
    assert 0.47 <= density <= 0.53


def test_symmetric_and_deterministic():
    a, b = HiddenGraph(300, 11), HiddenGraph(300, 11)
    i, j = np.triu_indices(300, 1)
    assert np.array_equal(a.edges(i, j), a.edges(j, i))
    assert np.array_equal(a.edges(i, j), b.edges(i, j))


def test_seeds_differ():
    i, j = np.triu_indices(200, 1)
    assert not np.array_equal(HiddenGraph(200, 1).edges(i, j), HiddenGraph(200, 2).edges(i, j))


def test_trivial_probabilities():
    assert HiddenGraph(10, 0, 0).edge(2, 3) is False
    assert HiddenGraph(10, 0, 1).edge(2, 3) is True
    with pytest.raises(ValueError):
        HiddenGraph(10, 0, 0.3)


@pytest.mark.parametrize("pair", [(3, 3), (-1, 2), (0, 10)])
def test_invalid_pairs(pair):
    g = HiddenGraph(10, 0)
    with pytest.raises(InvalidPair):
        g.edge(*pair)
    with pytest.raises(InvalidPair):
        ProbeLedger(100).probe(g, [pair])


def test_budget_formula():
    assert probe_budget(65536, 1.0, 1.0) == 65536
    assert probe_budget(65536, 1.0) == 131072
    assert probe_budget(100, 1.5, 1.0) == 1000
    assert probe_budget(10, 1.0, 0.25) == 3


def test_duplicates_count_once():
    g = HiddenGraph(50, 3)
    ledger = ProbeLedger(3)
    ledger.probe(g, [(0, 1), (1, 0), (0, 1), (2, 3)])
    assert ledger.probes_used == 2
    ledger.probe(g, [(0, 1), (3, 2), (4, 5)])
    assert ledger.probes_used == 3
    assert ledger.rounds_used == 2


def test_budget_exceeded_leaves_ledger_untouched():
    g = HiddenGraph(50, 3)
    ledger = ProbeLedger(2)
    ledger.probe(g, [(0, 1)])
    with pytest.raises(BudgetExceeded):
        ledger.probe(g, [(0, 2), (0, 3)])
    assert ledger.probes_used == 1
    assert ledger.rounds_used == 1
    assert ledger.status(0, 2) is None


def test_round_limit():
    g = HiddenGraph(20, 0)
    ledger = ProbeLedger(100, max_rounds=1)
    ledger.probe(g, [(0, 1)])
    with pytest.raises(RoundLimitExceeded):
        ledger.probe(g, [(0, 2)])


def test_verify_clique_needs_probes():
    g = HiddenGraph(10, 0, 1)
    ledger = ProbeLedger(10)
    ledger.probe(g, [(0, 1), (0, 2)])
    assert not verify_clique(ledger, [0, 1, 2])
    ledger.probe(g, [(1, 2)])
    assert verify_clique(ledger, [2, 0, 1])
    assert verify_clique(ledger, [4])


def test_transcript_roundtrip():
    g = HiddenGraph(30, 9)
    ledger = ProbeLedger(10)
    ledger.probe(g, [(0, 1), (5, 2)])
    ledger.probe(g, [(3, 4)])
    doc = json.loads(json.dumps(export_transcript(ledger, g)))
    assert doc["n"] == 30 and doc["seed"] == 9 and doc["p"] == 0.5 and doc["budget"] == 10
    assert [len(r) for r in doc["rounds"]] == [2, 1]
    for rnd in doc["rounds"]:
        for i, j, bit in rnd:
            assert i < j and bit == int(g.edge(i, j))


def test_revealed_matrix_matches_graph():
    g = HiddenGraph(40, 5)
    ledger = ProbeLedger(1000)
    vs = [3, 7, 11, 20]
    ledger.probe(g, [(a, b) for a in vs for b in vs if a < b])
    mat = ledger.revealed.adjacency_matrix(vs)
    for a in range(4):
        for b in range(4):
            if a != b:
                assert mat[a, b] == g.edge(vs[a], vs[b])
    assert ledger.revealed.vertices == set(vs)


batches = st.lists(
    st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)).filter(lambda p: p[0] != p[1]),
             max_size=12),
    max_size=6,
)


@settings(max_examples=200, deadline=None)
@given(batches, st.integers(0, 2**32))
def test_conservation_and_consistency(batch_list, seed):
    g = HiddenGraph(15, seed)
    ledger = ProbeLedger(10**6)
    seen = set()
    previous = 0
    for batch in batch_list:
        answers = ledger.probe(g, batch)
        seen.update(tuple(sorted(p)) for p in batch)
        assert ledger.probes_used == len(seen)
        assert ledger.probes_used >= previous
        previous = ledger.probes_used
        for (i, j), bit in answers.items():
            assert bit == g.edge(i, j) == ledger.status(j, i)


@settings(max_examples=100, deadline=None)
@given(batches, st.integers(0, 20))
def test_budget_never_exceeded(batch_list, budget):
    g = HiddenGraph(15, 1)
    ledger = ProbeLedger(budget)
    for batch in batch_list:
        try:
            ledger.probe(g, batch)
        except BudgetExceeded:
            pass
        assert ledger.probes_used <= budget
