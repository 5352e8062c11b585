"""Exact maximum clique on explicit graphs, and Matula's clique-number estimate.

Graphs are stored as one Python ``int`` bitmask per vertex. The search itself
runs on a uint64 word matrix in a compiled kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _bbkernel

__all__ = ["CliqueReport", "ExplicitGraph", "is_clique", "matula_omega", "max_clique", "clique_number"]

LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class ExplicitGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency list length must equal n")
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            if row >> self.n:
                raise ValueError(f"vertex {v} has a neighbour out of range")
        for v, row in enumerate(self.adj):
            rest = row
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric pair ({v}, {u})")
                rest ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "ExplicitGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_matrix(cls, mat) -> "ExplicitGraph":
        mat = np.asarray(mat, dtype=bool)
        n = mat.shape[0]
        if mat.shape != (n, n) or np.any(mat != mat.T) or np.any(np.diag(mat)):
            raise ValueError("adjacency matrix must be square, symmetric and loop-free")
        packed = np.packbits(mat, axis=1, bitorder="little")
        adj = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return cls(n, adj)

    @classmethod
    def complete(cls, n: int) -> "ExplicitGraph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def empty(cls, n: int) -> "ExplicitGraph":
        return cls(n, (0,) * n)

    @classmethod
    def cycle(cls, n: int) -> "ExplicitGraph":
        return cls.from_edges(n, ((v, (v + 1) % n) for v in range(n)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1)
            while rest:
                low = rest & -rest
                out.append((u, u + low.bit_length()))
                rest ^= low
        return out

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def induced_edge_count(self, mask: int) -> int:
        total = 0
        rest = mask
        while rest:
            low = rest & -rest
            total += (self.adj[low.bit_length() - 1] & mask).bit_count()
            rest ^= low
        return total // 2


@dataclass
class CliqueReport:
    """Outcome of one probe algorithm run."""

    vertices: tuple[int, ...]
    probes_used: int
    rounds_used: int
    predicted_size: float
    verified: bool
    degenerate: bool = False
    stages: Optional[dict] = None

    @property
    def size(self) -> int:
        return len(self.vertices)


def is_clique(g: ExplicitGraph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    mask = 0
    for v in vs:
        mask |= 1 << v
    return all((g.adj[v] | (1 << v)) & mask == mask for v in vs)


def matula_omega(n: int) -> float:
    """``2 log n - 2 log log n + 2 log e - 1`` in base 2."""
    if n <= 2:
        raise ValueError("Matula's estimate needs n >= 3")
    lg = math.log2(n)
    return 2 * lg - 2 * math.log2(lg) + 2 * LOG2_E - 1


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _word_matrix(adj: Sequence[int], n: int) -> np.ndarray:
    words = max(1, (n + 63) // 64)
    buf = b"".join(row.to_bytes(words * 8, "little") for row in adj)
    return np.frombuffer(buf, dtype="<u8").astype(np.uint64).reshape(n, words)


def _depth_cap(g: ExplicitGraph) -> int:
    return min(g.n, max(row.bit_count() for row in g.adj) + 1)


def _degree_relabel(g: ExplicitGraph) -> tuple[np.ndarray, np.ndarray]:
    # New label 0 gets the highest-degree vertex; ties keep index order.
    order = sorted(range(g.n), key=lambda v: (-g.adj[v].bit_count(), v))
    pos = [0] * g.n
    for new, old in enumerate(order):
        pos[old] = new
    adj = []
    for old in order:
        row = 0
        for u in _bits(g.adj[old]):
            row |= 1 << pos[u]
        adj.append(row)
    return np.array(order, dtype=np.int64), _word_matrix(adj, g.n)


def clique_number(g: ExplicitGraph) -> int:
    if g.n == 0:
        return 0
    labels, words = _degree_relabel(g)
    best, _ = _bbkernel.search(words, g.n, _depth_cap(g), 0, False, labels)
    return int(best)


def max_clique(g: ExplicitGraph) -> tuple[int, ...]:
    """Maximum clique, lexicographically smallest among all maximum cliques."""
    if g.n == 0:
        return ()
    labels, words = _degree_relabel(g)
    omega, _ = _bbkernel.search(words, g.n, _depth_cap(g), 0, False, labels)
    best, clique = _bbkernel.search(words, g.n, _depth_cap(g), omega, True, labels)
    assert best == omega and len(clique) == omega
    return tuple(int(v) for v in clique)
