"""Compiled branch-and-bound for maximum clique on uint64 word bitsets.

Colouring-bounded search in the style of MCQ/BBMC, written iteratively so
numba can compile it without recursion.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return int((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def _lowest_bit(x):
    return _popcount((x & (~x + _ONE)) - _ONE)


@njit(cache=True)
def _color_sort(P, adj, W, U, Q, order, colors):
    for w in range(W):
        U[w] = P[w]
    cnt = 0
    k = 0
    first = 0
    while True:
        while first < W and U[first] == 0:
            first += 1
        if first == W:
            break
        k += 1
        for w in range(first, W):
            Q[w] = U[w]
        qw = first
        while True:
            while qw < W and Q[qw] == 0:
                qw += 1
            if qw == W:
                break
            v = qw * 64 + _lowest_bit(Q[qw])
            bit = _ONE << np.uint64(v & 63)
            U[qw] &= ~bit
            Q[qw] &= ~bit
            for w in range(qw, W):
                Q[w] &= ~adj[v, w]
            order[cnt] = v
            colors[cnt] = k
            cnt += 1
    return cnt


@njit(cache=True)
def search(adj, n, depth_cap, best_init, ties, labels):
    """Return (best size, clique in `labels` order, sorted).

    With ``ties`` false this finds a clique larger than ``best_init`` if one
    exists. With ``ties`` true it visits every clique of size >= best_init and
    keeps the one whose sorted labels are lexicographically smallest.
    """
    W = (n + 63) // 64
    depth_max = depth_cap + 1
    P = np.zeros((depth_max, W), dtype=np.uint64)
    order = np.zeros((depth_max, n), dtype=np.int64)
    colors = np.zeros((depth_max, n), dtype=np.int64)
    idx = np.zeros(depth_max, dtype=np.int64)
    C = np.zeros(depth_max, dtype=np.int64)
    U = np.zeros(W, dtype=np.uint64)
    Q = np.zeros(W, dtype=np.uint64)
    newP = np.zeros(W, dtype=np.uint64)
    best = best_init
    best_set = np.zeros(n, dtype=np.int64)
    cand = np.zeros(n, dtype=np.int64)
    have = False

    for v in range(n):
        P[0, v // 64] |= _ONE << np.uint64(v & 63)
    cnt = _color_sort(P[0], adj, W, U, Q, order[0], colors[0])
    idx[0] = cnt - 1
    depth = 0
    while depth >= 0:
        i = idx[depth]
        if i < 0:
            depth -= 1
            continue
        bound = depth + colors[depth, i]
        if bound < best or (bound == best and not ties):
            depth -= 1
            continue
        v = order[depth, i]
        idx[depth] = i - 1
        C[depth] = v
        nonempty = False
        for w in range(W):
            newP[w] = P[depth, w] & adj[v, w]
            if newP[w] != 0:
                nonempty = True
        P[depth, v // 64] &= ~(_ONE << np.uint64(v & 63))
        if nonempty:
            depth += 1
            for w in range(W):
                P[depth, w] = newP[w]
            cnt = _color_sort(P[depth], adj, W, U, Q, order[depth], colors[depth])
            idx[depth] = cnt - 1
            continue
        size = depth + 1
        if size < best or (size == best and not ties):
            continue
        for t in range(size):
            cand[t] = labels[C[t]]
        cand[:size].sort()
        better = size > best or not have
        if not better:
            for t in range(size):
                if cand[t] != best_set[t]:
                    better = cand[t] < best_set[t]
                    break
        if better:
            best = size
            have = True
            for t in range(size):
                best_set[t] = cand[t]
    if not have:
        return best, best_set[:0].copy()
    return best, best_set[:best].copy()
