"""Extremal quantities behind the covered-set counting bound.

* ``M(k, t)``: the smallest maximum-matching size over k-vertex graphs with
  t edges, computed by enumerating every labeled graph.
* ``mu(k, beta)``: the closed-form proxy that sandwiches ``M``.
* ``N_{n,m,k,beta}``: covered k-sets, counted exhaustively and bounded two ways.

Thresholds that come from integer edge counts are carried as ``Fraction`` so
covered/not-covered decisions never depend on float rounding.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import networkx as nx
import numpy as np

from .clique_solver import ExplicitGraph

__all__ = [
    "CROSSOVER",
    "CoverCount",
    "InfeasibleScale",
    "InvalidConstruction",
    "MatchingExtremum",
    "TightExample",
    "count_beta_covered_bruteforce",
    "covered_profile",
    "is_beta_covered",
    "matching_minmax_bruteforce",
    "matching_minmax_table",
    "matching_sandwich_violations",
    "max_matching",
    "mu",
    "mu_floor",
    "n_cover_closed_form",
    "n_cover_encoding_bound",
    "n_cover_encoding_count",
    "tight_example_clique",
    "tight_example_split",
]

CROSSOVER = Fraction(16, 25)
MAX_ENUM_K = 8
MAX_SUBSETS = 2_000_000


class InfeasibleScale(ValueError):
    pass


class InvalidConstruction(ValueError):
    pass


def _frac(beta) -> Fraction:
    beta = Fraction(beta)
    if not 0 <= beta <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    return beta


# -- mu ---------------------------------------------------------------------

def mu(k: int, beta) -> float:
    b = float(_frac(beta))
    return min(math.sqrt(b) / 2, 1 - math.sqrt(1 - b)) * k


def _isqrt_frac(x: Fraction) -> int:
    # floor(sqrt(p/q)) = floor(isqrt(p*q) / q)
    return math.isqrt(x.numerator * x.denominator) // x.denominator


def mu_floor(k: int, beta) -> int:
    """``floor(mu(k, beta))`` in exact arithmetic."""
    b = _frac(beta)
    half_clique = _isqrt_frac(b * k * k / 4)
    x = (1 - b) * k * k
    r = _isqrt_frac(x)
    ceil_root = r if Fraction(r * r) == x else r + 1
    return min(half_clique, k - ceil_root)


# -- matchings --------------------------------------------------------------

def max_matching(g: ExplicitGraph) -> int:
    """Exact maximum matching size."""
    if g.n > 16:
        G = nx.Graph()
        G.add_nodes_from(range(g.n))
        G.add_edges_from(g.edges())
        return len(nx.max_weight_matching(G, maxcardinality=True))

    adj = g.adj

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        # Lowest vertex is either left unmatched or matched to a neighbour.
        while mask and not adj[(mask & -mask).bit_length() - 1] & mask:
            mask &= mask - 1
        if not mask:
            return 0
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        out = best(rest)
        nbrs = adj[v] & rest
        while nbrs:
            ub = nbrs & -nbrs
            out = max(out, 1 + best(rest ^ ub))
            nbrs ^= ub
        return out

    return best((1 << g.n) - 1)


def _pairs(k: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(k), 2))


def _graph_from_mask(k: int, mask: int) -> ExplicitGraph:
    return ExplicitGraph.from_edges(k, (p for b, p in enumerate(_pairs(k)) if mask >> b & 1))


@lru_cache(maxsize=2)
def _matching_table(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Matching number and edge count of every labeled graph on k vertices.

    Entry ``mask`` describes the graph whose edges are the set bits of
    ``mask`` over ``_pairs(k)``. With e the highest edge,
    nu(G) = max(nu(G - e), 1 + nu(G minus every edge touching e)).
    """
    pairs = _pairs(k)
    E = len(pairs)
    nu = np.zeros(1 << E, dtype=np.uint8)
    pc = np.zeros(1 << E, dtype=np.uint8)
    chunk = 1 << 22
    for b, (u, v) in enumerate(pairs):
        clash = 0
        for c, (x, y) in enumerate(pairs[:b]):
            if {x, y} & {u, v}:
                clash |= 1 << c
        keep = np.uint32(((1 << b) - 1) & ~clash)
        lo = 1 << b
        for start in range(0, lo, chunk):
            stop = min(lo, start + chunk)
            low = np.arange(start, stop, dtype=np.uint32)
            nu[lo + start:lo + stop] = np.maximum(nu[start:stop], nu[low & keep] + 1)
            pc[lo + start:lo + stop] = pc[start:stop] + 1
    return nu, pc


@dataclass(frozen=True)
class MatchingExtremum:
    k: int
    t: int
    value: int
    witness: ExplicitGraph

    @property
    def beta(self) -> Fraction:
        return Fraction(self.t, math.comb(self.k, 2))


def _check_k(k: int) -> None:
    if k > MAX_ENUM_K:
        raise InfeasibleScale(f"enumerating all graphs on {k} vertices is not supported (k <= {MAX_ENUM_K})")
    if k < 2:
        raise ValueError("need at least two vertices")


def matching_minmax_table(k: int) -> list[MatchingExtremum]:
    """``M(k, t)`` with a witness for every t in 1..C(k, 2)."""
    _check_k(k)
    nu, pc = _matching_table(k)
    out = []
    for t in range(1, math.comb(k, 2) + 1):
        sel = pc == t
        value = int(nu[sel].min())
        mask = int(np.flatnonzero(sel & (nu == value))[0])
        out.append(MatchingExtremum(k, t, value, _graph_from_mask(k, mask)))
    return out


def matching_minmax_bruteforce(k: int, t: int) -> MatchingExtremum:
    _check_k(k)
    if not 1 <= t <= math.comb(k, 2):
        raise ValueError(f"t must lie in 1..{math.comb(k, 2)}")
    return matching_minmax_table(k)[t - 1]


def matching_sandwich_violations(kmax: int = 7, kmin: int = 3, mu_fn=None) -> list[dict]:
    """Every (k, t) where ``floor(mu) <= M(k, t) <= floor(mu) + 1`` fails.

    ``mu_fn`` swaps in another mu (floored in floating point); by default the
    exact ``mu_floor`` is used.
    """
    bad = []
    for k in range(kmin, kmax + 1):
        for row in matching_minmax_table(k):
            beta = row.beta
            lower = mu_floor(k, beta) if mu_fn is None else math.floor(mu_fn(k, beta))
            if not lower <= row.value <= lower + 1:
                bad.append({"k": k, "t": row.t, "M": row.value, "floor_mu": lower})
    return bad


# -- covered sets -----------------------------------------------------------

def is_beta_covered(g: ExplicitGraph, subset, beta) -> bool:
    vs = set(subset)
    if len(vs) < 2:
        raise ValueError("a covered set needs at least two vertices")
    mask = 0
    for v in vs:
        mask |= 1 << v
    return g.induced_edge_count(mask) >= _frac(beta) * math.comb(len(vs), 2)


def covered_profile(g: ExplicitGraph, k: int) -> list[int]:
    """``hist[e]`` = number of k-subsets inducing exactly e edges."""
    if math.comb(g.n, k) > MAX_SUBSETS:
        raise InfeasibleScale(f"C({g.n}, {k}) subsets is too many to enumerate")
    hist = [0] * (math.comb(k, 2) + 1)
    adj = g.adj
    for combo in itertools.combinations(range(g.n), k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        hist[sum((adj[v] & mask).bit_count() for v in combo) // 2] += 1
    return hist


def covered_from_profile(hist: list[int], k: int, beta) -> int:
    need = math.ceil(_frac(beta) * math.comb(k, 2))
    return sum(hist[need:])


def n_cover_encoding_count(n: int, m: int, k: int, beta) -> int:
    """The matching-encoding bound as an exact integer.

    Uses both matching sizes allowed by the mu sandwich and keeps the larger
    product, which is at least the bound for the true ``M(k, beta)``.
    """
    lo = mu_floor(k, beta)
    hi = min(lo + 1, k // 2)
    return max(math.comb(m, M) * math.comb(n, k - 2 * M) for M in {lo, hi})


def n_cover_encoding_bound(n: int, m: int, k: int, beta) -> float:
    count = n_cover_encoding_count(n, m, k, beta)
    return math.log2(count) if count else -math.inf


def n_cover_closed_form(n: int, m: int, k: int, beta) -> float:
    """log2 of the branch-appropriate closed-form bound on covered k-sets."""
    if m < 1 or n < 1:
        raise ValueError("the closed form needs at least one vertex and one edge")
    b = _frac(beta)
    lm, ln = math.log2(m), math.log2(n)
    if b <= CROSSOVER:
        root = math.sqrt(1 - float(b))
        return ((1 - root) * k + 1) * lm + ((2 * root - 1) * k + 2) * ln
    root = math.sqrt(float(b))
    return (root * k / 2 + 1) * lm + ((1 - root) * k + 2) * ln


@dataclass(frozen=True)
class CoverCount:
    n: int
    m: int
    k: int
    beta: Fraction
    count: int
    encoding_bound: Optional[float]
    closed_form_bound: Optional[float]


def count_beta_covered_bruteforce(g: ExplicitGraph, k: int, beta) -> CoverCount:
    b = _frac(beta)
    count = covered_from_profile(covered_profile(g, k), k, b)
    m = g.edge_count
    in_domain = k < g.n
    return CoverCount(
        n=g.n,
        m=m,
        k=k,
        beta=b,
        count=count,
        encoding_bound=n_cover_encoding_bound(g.n, m, k, b) if in_domain else None,
        closed_form_bound=n_cover_closed_form(g.n, m, k, b) if in_domain and m >= 1 else None,
    )


# -- tightness constructions -----------------------------------------------

@dataclass(frozen=True)
class TightExample:
    """A graph plus the covered-set pattern it was built around.

    Every k-set made of ``take_core`` vertices of ``core`` and ``take_rest``
    vertices of ``rest`` is beta-covered.
    """

    graph: ExplicitGraph
    core: tuple[int, ...]
    rest: tuple[int, ...]
    take_core: int
    take_rest: int

    @property
    def covered_lower_bound(self) -> int:
        return math.comb(len(self.core), self.take_core) * math.comb(len(self.rest), self.take_rest)

    def pattern_sets(self) -> Iterator[tuple[int, ...]]:
        for a in itertools.combinations(self.core, self.take_core):
            for b in itertools.combinations(self.rest, self.take_rest):
                yield a + b


def _split_graph(n: int, core: int, joined: int) -> set[tuple[int, int]]:
    edges = set(itertools.combinations(range(core), 2))
    edges.update((u, v) for u in range(core) for v in range(core, core + joined))
    return edges


def _fill(n: int, edges: set[tuple[int, int]], m: int) -> ExplicitGraph:
    for pair in itertools.combinations(range(n), 2):
        if len(edges) >= m:
            break
        edges.add(pair)
    return ExplicitGraph.from_edges(n, edges)


def tight_example_split(n: int, m: int, k: int, beta) -> TightExample:
    """Split graph (clique joined to an independent set) topped up to m edges."""
    b = _frac(beta)
    if b > CROSSOVER:
        raise InvalidConstruction("the split construction needs beta <= 16/25")
    if not 2 <= k < n or m > math.comb(n, 2):
        raise InvalidConstruction("need 2 <= k < n and m <= C(n, 2)")
    # Largest independent part whose missing pairs stay within the allowance.
    allowed = (1 - b) * math.comb(k, 2)
    indep = max(c for c in range(k + 1) if math.comb(c, 2) <= allowed)
    need_core = k - indep
    if need_core == 0:
        raise InvalidConstruction("beta too small: every k-set is covered with no edges")
    if m < k * n:
        core = need_core
        joined = min(n - core, (m - math.comb(core, 2)) // core)
        if joined < indep:
            raise InvalidConstruction("too few edges to attach an independent part")
        take_core = core
    else:
        core = max(s for s in range(n + 1) if math.comb(s, 2) + s * (n - s) <= m)
        joined = n - core
        if core < need_core or joined < indep:
            raise InvalidConstruction("sizes do not fit")
        take_core = need_core
    g = _fill(n, _split_graph(n, core, joined), m)
    return TightExample(g, tuple(range(core)), tuple(range(core, core + joined)), take_core, indep)


def tight_example_clique(m: int, k: int, beta, n: int) -> TightExample:
    """Clique on floor(sqrt(2m)) vertices; no other edges."""
    b = _frac(beta)
    if b < CROSSOVER:
        raise InvalidConstruction("the clique construction needs beta >= 16/25")
    size = math.isqrt(2 * m)
    need = b * math.comb(k, 2)
    take = min(a for a in range(k + 1) if math.comb(a, 2) >= need)
    if size > n or take > size or k - take > n - size:
        raise InvalidConstruction("sizes do not fit")
    g = ExplicitGraph.from_edges(n, itertools.combinations(range(size), 2))
    return TightExample(g, tuple(range(size)), tuple(range(size, n)), take, k - take)
