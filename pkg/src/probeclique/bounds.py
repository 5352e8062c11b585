"""Upper bounds on the clique size reachable with ell rounds of n**delta probes.

The bound is a min over splits ``beta`` of the rounds' shares of a k-set's
pairs, of a max over rounds of ``2 f(s_i, delta) / (1 - s_{i-1})`` where
``s_i`` are partial sums of ``beta``. All probabilities are kept in log2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "BoundResult",
    "BoundSpec",
    "closed_form_beta_delta1",
    "corollary_bound",
    "explicit_bound",
    "explicit_beta",
    "f_bound",
    "log_failure_bound",
    "optimize_beta",
    "round_ratios",
    "upper_bound_alpha",
]

CROSSOVER = 16 / 25
SUM_TOL = 1e-12


def _check_delta(delta: float) -> None:
    if not 1 <= delta < 2:
        raise ValueError(f"delta must lie in [1, 2), got {delta}")


def f_bound(beta: float, delta: float) -> float:
    if not 0 <= beta <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    _check_delta(delta)
    if beta <= CROSSOVER:
        return (2 - delta) * math.sqrt(1 - beta) + delta - 1
    return 1 - (1 - delta / 2) * math.sqrt(beta)


def _f_inverse(level: float, delta: float) -> float:
    """Smallest beta with f(beta, delta) <= level, for delta/2 <= level <= 1."""
    if level >= 1:
        return 0.0
    if level >= f_bound(CROSSOVER, delta):
        root = (level - delta + 1) / (2 - delta)
        return min(CROSSOVER, max(0.0, 1 - root * root))
    root = (1 - level) / (1 - delta / 2)
    return min(1.0, max(CROSSOVER, root * root))


@dataclass(frozen=True)
class BoundSpec:
    delta: float
    beta: tuple[float, ...]
    partial_sums: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        _check_delta(self.delta)
        beta = tuple(float(b) for b in self.beta)
        if not beta:
            raise ValueError("need at least one round")
        if any(b < 0 for b in beta):
            raise ValueError("round shares must be nonnegative")
        total = math.fsum(beta)
        if abs(total - 1) > SUM_TOL:
            raise ValueError(f"round shares must sum to 1, got {total!r}")
        sums = [0.0]
        for b in beta[:-1]:
            sums.append(min(1.0, sums[-1] + b))
        sums.append(1.0)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "partial_sums", tuple(sums))

    @property
    def ell(self) -> int:
        return len(self.beta)

    def s(self, i: int) -> float:
        """Partial sum beta_1 + ... + beta_i, with s(0) = 0 and s(ell) = 1."""
        return self.partial_sums[i]

    def tail(self, i: int) -> float:
        """beta_i + ... + beta_ell, i.e. 1 - s(i - 1)."""
        return math.fsum(self.beta[i - 1:])


@dataclass(frozen=True)
class BoundResult:
    value: float
    argmax_round: int
    ratios: tuple[float, ...]
    beta: Optional[tuple[float, ...]] = None
    method: str = "numeric"
    tolerance: float = 0.0


def round_ratios(spec: BoundSpec) -> tuple[float, ...]:
    out = []
    for i in range(1, spec.ell + 1):
        num = 2 * f_bound(spec.s(i), spec.delta)
        den = spec.tail(i)
        out.append(num / den if den > 0 else math.inf)
    return tuple(out)


def upper_bound_alpha(spec: BoundSpec) -> BoundResult:
    ratios = round_ratios(spec)
    i = int(np.argmax(ratios))
    return BoundResult(ratios[i], i + 1, ratios, spec.beta, "evaluated")


# -- numeric optimisation ---------------------------------------------------

def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        rows.append(np.column_stack([np.full(len(rest), first), rest]))
    return np.concatenate(rows)


def _grid_resolution(ell: int, resolution: int, max_points: int) -> int:
    r = resolution
    while r > 1 and math.comb(r + ell - 1, ell - 1) > max_points:
        r -= 1
    return r


def _vector_ratios(beta: np.ndarray, delta: float) -> np.ndarray:
    s = np.cumsum(beta, axis=1)
    s[:, -1] = 1.0
    s = np.clip(s, 0.0, 1.0)
    f = np.where(
        s <= CROSSOVER,
        (2 - delta) * np.sqrt(1 - s) + delta - 1,
        1 - (1 - delta / 2) * np.sqrt(s),
    )
    tails = np.cumsum(beta[:, ::-1], axis=1)[:, ::-1]
    with np.errstate(divide="ignore"):
        return np.where(tails > 0, 2 * f / np.where(tails > 0, tails, 1), np.inf)


def _grid_search(delta: float, ell: int, resolution: int) -> tuple[float, np.ndarray]:
    beta = _compositions(resolution, ell) / resolution
    worst = _vector_ratios(beta, delta).max(axis=1)
    best = int(np.argmin(worst))
    return float(worst[best]), beta[best]


def _sweep(alpha: float, delta: float, ell: int) -> Optional[list[float]]:
    """Smallest partial sums keeping every round ratio <= alpha, or None.

    Lowering s_{i-1} only loosens the constraint on s_i, so taking each
    partial sum as small as allowed is optimal.
    """
    s = [0.0]
    for _ in range(ell - 1):
        level = alpha * (1 - s[-1]) / 2
        if level < delta / 2:
            return None
        s.append(max(s[-1], _f_inverse(level, delta)))
    if delta > alpha * (1 - s[-1]):
        return None
    s.append(1.0)
    return s


def optimize_beta(delta: float, ell: int, resolution: int = 64, refine: bool = True,
                  max_grid_points: int = 1_000_000, tol: float = 1e-13) -> BoundResult:
    """Minimise the worst round ratio over the simplex.

    A grid over the simplex (step ``1/resolution``, coarsened if the point
    count would exceed ``max_grid_points``) gives a feasible starting level.
    Refinement then bisects on the level, testing feasibility with a
    greedy sweep over partial sums.
    """
    _check_delta(delta)
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell == 1:
        return BoundResult(delta, 1, (delta,), (1.0,), "exact", 0.0)
    r = _grid_resolution(ell, resolution, max_grid_points)
    grid_value, grid_beta = _grid_search(delta, ell, r)
    beta = tuple(float(b) for b in grid_beta)
    gap = grid_value - delta
    if refine:
        lo, hi = delta, grid_value
        best_s = None
        while hi - lo > tol:
            mid = (lo + hi) / 2
            s = _sweep(mid, delta, ell)
            if s is None:
                lo = mid
            else:
                hi, best_s = mid, s
        if best_s is not None:
            beta = tuple(best_s[i + 1] - best_s[i] for i in range(ell))
        gap = hi - lo
    spec = BoundSpec(delta, _renormalise(beta))
    evaluated = upper_bound_alpha(spec)
    return BoundResult(evaluated.value, evaluated.argmax_round, evaluated.ratios,
                       spec.beta, "numeric", gap)


def _renormalise(beta: Sequence[float]) -> tuple[float, ...]:
    beta = [max(0.0, b) for b in beta]
    # Push rounding residue into the last (largest) share.
    beta[-1] = max(0.0, 1.0 - math.fsum(beta[:-1]))
    return tuple(beta)


# -- closed forms -----------------------------------------------------------

def explicit_bound(delta: float, ell: int) -> float:
    _check_delta(delta)
    if ell < 1:
        raise ValueError("ell must be positive")
    return 2 - delta * ((2 - delta) / 2) ** ell


def explicit_beta(delta: float, ell: int) -> tuple[float, ...]:
    """Geometric split beta_i = r**(i-1) * eps with r = 2 / (2 - delta)."""
    _check_delta(delta)
    r = 2 / (2 - delta)
    eps = (r - 1) / (r**ell - 1)
    return _renormalise([r**i * eps for i in range(ell)])


def closed_form_beta_delta1(ell: int) -> tuple[float, ...]:
    """Optimal split at delta = 1, where every round ratio is equal."""
    if ell < 2:
        raise ValueError("closed form is stated for ell >= 2")
    d = 2**ell - 1
    head = 1 - 2 ** (-2 / d)
    mid = [2 ** (-(2**i - 2) / d) - 2 ** (-(2 ** (i + 1) - 2) / d) for i in range(2, ell)]
    last = 2 ** (-(2**ell - 2) / d)
    return (head, *mid, last)


def corollary_bound(ell: int) -> float:
    if ell < 1:
        raise ValueError("ell must be positive")
    return 2 ** (1 - 1 / (2**ell - 1))


def log_failure_bound(n: int, spec: BoundSpec, alpha: float, i: int) -> float:
    """log2 upper bound on the chance that round i's eligible sets hold a k-clique."""
    if not 1 <= i <= spec.ell:
        raise ValueError(f"round must lie in 1..{spec.ell}")
    lg = math.log2(n)
    if alpha * lg < 2:
        raise ValueError("k = alpha log2 n must be at least 2")
    tail = spec.tail(i)
    f = f_bound(spec.s(i), spec.delta)
    return alpha * (f - tail * alpha / 2) * lg * lg + (tail * alpha / 2 + 4) * lg
