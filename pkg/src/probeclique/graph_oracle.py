"""Hidden random graphs and the budgeted, round-structured probe ledger.

Edge bits are never stored: each one is recomputed on demand from a keyed
64-bit mixing function of ``(seed, i, j)``, so a graph on 2**20 vertices
costs no more memory than one on 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "BudgetExceeded",
    "HiddenGraph",
    "InvalidPair",
    "ProbeLedger",
    "RevealedGraph",
    "RoundLimitExceeded",
    "export_transcript",
    "new_hidden_graph",
    "probe_batch",
    "probe_budget",
    "verify_clique",
]

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_M1 = _U64(0xBF58476D1CE4E5B9)
_M2 = _U64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class ProbeError(Exception):
    """Base class for probe-model contract violations."""


class BudgetExceeded(ProbeError):
    pass


class RoundLimitExceeded(ProbeError):
    pass


class InvalidPair(ProbeError, ValueError):
    pass


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; wraparound is intended, numpy only warns on 0-d input.
    with np.errstate(over="ignore"):
        x = x ^ (x >> _U64(30))
        x = x * _M1
        x = x ^ (x >> _U64(27))
        x = x * _M2
        return x ^ (x >> _U64(31))


def _normalize_p(p) -> Fraction:
    frac = Fraction(p)
    if frac not in (Fraction(0), Fraction(1, 2), Fraction(1)):
        raise ValueError(f"edge probability must be 0, 1/2 or 1, got {p!r}")
    return frac


@dataclass(frozen=True)
class HiddenGraph:
    """Implicit G(n, p) with p in {0, 1/2, 1}.

    The graph is immutable and may be shared between threads and processes.
    """

    n: int
    seed: int
    p: Fraction = Fraction(1, 2)
    _key: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a hidden graph needs at least one vertex")
        if self.n > 1 << 32:
            raise ValueError("vertex indices must fit in 32 bits")
        object.__setattr__(self, "p", _normalize_p(self.p))
        key = _mix64(np.array([self.seed & _MASK64], dtype=_U64))[0]
        object.__setattr__(self, "_key", int(key))

    def edges(self, i, j) -> np.ndarray:
        """Vectorised edge lookup; ``i`` and ``j`` broadcast against each other.

        Pairs are not validated here; the ledger does that.
        """
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        shape = np.broadcast_shapes(i.shape, j.shape)
        if self.p == 0:
            return np.zeros(shape, dtype=bool)
        if self.p == 1:
            return np.ones(shape, dtype=bool)
        lo = np.minimum(i, j).astype(_U64)
        hi = np.maximum(i, j).astype(_U64)
        z = (lo << _U64(32)) | hi
        with np.errstate(over="ignore"):
            z = _mix64(z * _GOLDEN + _U64(self._key))
        return (z >> _U64(63)).astype(bool)

    def edge(self, i: int, j: int) -> bool:
        if i == j:
            raise InvalidPair(f"self-loop ({i}, {j}) has no edge status")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise InvalidPair(f"pair ({i}, {j}) out of range for n={self.n}")
        return bool(self.edges(i, j))


def new_hidden_graph(n: int, seed: int, p=Fraction(1, 2)) -> HiddenGraph:
    return HiddenGraph(n=n, seed=seed, p=p)


def probe_budget(n: int, delta: float, c: float = 2.0) -> int:
    """Total probe allowance ``ceil(c * n**delta)``."""
    # Round first so that e.g. 1 * 65536**1.0 is not pushed up by float noise.
    return math.ceil(round(c * n**delta, 9))


def _as_pair_array(pairs, n: int) -> np.ndarray:
    if isinstance(pairs, np.ndarray):
        arr = pairs.astype(np.int64, copy=False).reshape(-1, 2)
    else:
        arr = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    if arr.size == 0:
        return arr
    if np.any(arr[:, 0] == arr[:, 1]):
        bad = arr[arr[:, 0] == arr[:, 1]][0]
        raise InvalidPair(f"self-loop ({bad[0]}, {bad[1]})")
    if np.any(arr < 0) or np.any(arr >= n):
        raise InvalidPair(f"pair out of range for n={n}")
    arr = np.sort(arr, axis=1)
    return np.unique(arr, axis=0)


class ProbeLedger:
    """Transcript of probes, grouped into rounds, with budget accounting.

    Re-probing a pair costs nothing and returns the bit already revealed.
    A failed batch leaves the ledger untouched.
    """

    def __init__(self, budget: int, max_rounds: Optional[int] = None):
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        if max_rounds is not None and max_rounds < 0:
            raise ValueError("max_rounds must be nonnegative")
        self.budget = int(budget)
        self.max_rounds = max_rounds
        self.rounds: list[np.ndarray] = []  # each row: i, j, bit
        self._known: dict[tuple[int, int], bool] = {}

    @property
    def probes_used(self) -> int:
        return len(self._known)

    @property
    def rounds_used(self) -> int:
        return len(self.rounds)

    @property
    def remaining(self) -> int:
        return self.budget - self.probes_used

    def status(self, i: int, j: int) -> Optional[bool]:
        """True/False for a probed pair, None if never probed."""
        if i > j:
            i, j = j, i
        return self._known.get((i, j))

    def probe(self, graph: HiddenGraph, pairs) -> dict[tuple[int, int], bool]:
        if self.max_rounds is not None and len(self.rounds) >= self.max_rounds:
            raise RoundLimitExceeded(
                f"round {len(self.rounds) + 1} exceeds the limit of {self.max_rounds}"
            )
        arr = _as_pair_array(pairs, graph.n)
        keys = list(zip(arr[:, 0].tolist(), arr[:, 1].tolist()))
        known = self._known
        fresh = [idx for idx, key in enumerate(keys) if key not in known]
        if self.probes_used + len(fresh) > self.budget:
            raise BudgetExceeded(
                f"batch needs {len(fresh)} new probes but only {self.remaining} remain"
            )
        bits = np.zeros(len(keys), dtype=bool)
        if fresh:
            idx = np.array(fresh, dtype=np.int64)
            bits[idx] = graph.edges(arr[idx, 0], arr[idx, 1])
        for idx, key in enumerate(keys):
            if key in known:
                bits[idx] = known[key]
        for idx in fresh:
            known[keys[idx]] = bool(bits[idx])
        record = np.empty((len(keys), 3), dtype=np.int64)
        if keys:
            record[:, :2] = arr
            record[:, 2] = bits
        self.rounds.append(record)
        return dict(zip(keys, bits.tolist()))

    @property
    def revealed(self) -> "RevealedGraph":
        return RevealedGraph(self)


def probe_batch(ledger: ProbeLedger, graph: HiddenGraph, pairs) -> dict[tuple[int, int], bool]:
    return ledger.probe(graph, pairs)


class RevealedGraph:
    """Read-only view of what a ledger has learned so far."""

    def __init__(self, ledger: ProbeLedger):
        self._ledger = ledger

    def status(self, i: int, j: int) -> Optional[bool]:
        return self._ledger.status(i, j)

    @property
    def vertices(self) -> set[int]:
        out: set[int] = set()
        for i, j in self._ledger._known:
            out.add(i)
            out.add(j)
        return out

    def adjacency_matrix(self, vertices) -> np.ndarray:
        """Boolean adjacency among ``vertices``; unknown pairs read as non-edges."""
        vs = list(vertices)
        m = len(vs)
        mat = np.zeros((m, m), dtype=bool)
        known = self._ledger._known
        for a in range(m):
            va = vs[a]
            for b in range(a + 1, m):
                vb = vs[b]
                key = (va, vb) if va < vb else (vb, va)
                if known.get(key, False):
                    mat[a, b] = mat[b, a] = True
        return mat


def verify_clique(ledger: ProbeLedger, vertices: Iterable[int]) -> bool:
    vs = sorted(set(vertices))
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if ledger.status(vs[a], vs[b]) is not True:
                return False
    return True


def export_transcript(ledger: ProbeLedger, graph: HiddenGraph) -> dict:
    p = graph.p
    return {
        "n": graph.n,
        "seed": graph.seed,
        "p": int(p) if p.denominator == 1 else float(p),
        "budget": ledger.budget,
        "rounds": [rnd.tolist() for rnd in ledger.rounds],
    }
