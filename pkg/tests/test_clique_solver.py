import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bk_max_clique, matula, subsets_max_clique
from probeclique.clique_solver import ExplicitGraph, clique_number, is_clique, matula_omega, max_clique
from probeclique.graph_oracle import HiddenGraph


def _random_graph(n, density, seed):
    rng = np.random.default_rng(seed)
    return [p for p in itertools.combinations(range(n), 2) if rng.random() < density]


@pytest.mark.parametrize("seed", range(6))
def test_matches_subset_enumeration(seed):
    n = 14
    edges = _random_graph(n, 0.5 + 0.05 * seed, seed)
    assert max_clique(ExplicitGraph.from_edges(n, edges)) == subsets_max_clique(n, edges)


@pytest.mark.parametrize("seed", range(10))
def test_matches_bron_kerbosch_at_24(seed):
    n = 24
    edges = _random_graph(n, [0.3, 0.5, 0.7, 0.9][seed % 4], 100 + seed)
    g = ExplicitGraph.from_edges(n, edges)
    assert max_clique(g) == bk_max_clique(n, edges)


def test_hidden_graph_instance():
    hidden = HiddenGraph(24, 3)
    edges = [(u, v) for u, v in itertools.combinations(range(24), 2) if hidden.edge(u, v)]
    assert max_clique(ExplicitGraph.from_edges(24, edges)) == bk_max_clique(24, edges)


def test_word_boundaries():
    # Cliques straddling the 64-bit word edge.
    n = 130
    members = [0, 63, 64, 65, 127, 128, 129]
    g = ExplicitGraph.from_edges(n, itertools.combinations(members, 2))
    assert max_clique(g) == tuple(members)


def test_special_graphs():
    assert max_clique(ExplicitGraph.complete(9)) == tuple(range(9))
    assert max_clique(ExplicitGraph.empty(5)) == (0,)
    assert max_clique(ExplicitGraph.empty(0)) == ()
    assert max_clique(ExplicitGraph.cycle(5)) == (0, 1)
    assert clique_number(ExplicitGraph.cycle(3)) == 3


def test_lexicographic_tie_break():
    g = ExplicitGraph.from_edges(6, [(4, 5), (3, 5), (3, 4), (0, 2), (1, 2), (0, 1)])
    assert max_clique(g) == (0, 1, 2)


def test_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        ExplicitGraph(2, (0b10, 0b00))
    with pytest.raises(ValueError):
        ExplicitGraph(1, (0b1,))
    with pytest.raises(ValueError):
        ExplicitGraph.from_edges(3, [(1, 1)])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 18), st.data())
def test_output_is_maximum_clique(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    mask = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, keep in zip(pairs, mask) if keep]
    g = ExplicitGraph.from_edges(n, edges)
    found = max_clique(g)
    assert is_clique(g, found)
    assert found == bk_max_clique(n, edges)


def test_matula_values():
    assert matula_omega(1024) == pytest.approx(15.2415, abs=1e-4)
    assert matula_omega(4) == pytest.approx(3.8854, abs=1e-4)
    for n in (3, 10, 362, 512, 65536):
        assert matula_omega(n) == pytest.approx(matula(n), rel=1e-12)
    with pytest.raises(ValueError):
        matula_omega(2)


def test_matula_monotone_from_eight():
    values = [matula_omega(n) for n in range(8, 5000)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_matula_known_table_entry():
    assert math.floor(matula_omega(512)) == 13
