"""Pure-Python DBM kernel (numpy-vectorized fallback).

A difference bound matrix is an ``n x n`` int64 array ``m`` where entry
``m[i][j]`` bounds ``var_i - var_j``.  Bounds are encoded in a single
integer so the inner loops are branch-free integer arithmetic:

    (<=, c)  ->  2*c + 1          (weak)
    (<,  c)  ->  2*c              (strict)
    no bound ->  INF

The encoding makes the natural integer order coincide with bound
tightness: ``(<, c) < (<=, c) < (<, c+1)``.  Addition of two bounds keeps
the sum of values and is weak only when both operands are weak:
``a + b - ((a | b) & 1)``.

Finite bound values are kept below ``LIMIT``; anything larger aborts the
analysis (OVERFLOW) rather than silently wrapping.  ``INF`` plus a finite
bound stays above ``INF_BAR``, so infinities never overflow int64 and are
re-normalized to exactly ``INF`` whenever stored.

All kernel functions mutate their matrix argument in place and return a
status code.  `lzg._core` implements the same contract in Cython; parity
between the two is enforced by tests.
"""

from __future__ import annotations

import numpy as np

INF = 1 << 60
INF_BAR = 1 << 59  # entries >= INF_BAR are treated as "no bound"
LIMIT = 1 << 48  # finite encoded bounds beyond this magnitude overflow
LE_ZERO = 1  # encoded (<=, 0)

OK = 0
EMPTY = 1
OVERFLOW = 2


def bound_add(a: int, b: int) -> int:
    """Add two encoded bounds (absorbing on infinity)."""
    if a >= INF_BAR or b >= INF_BAR:
        return INF
    return a + b - ((a | b) & 1)


def _overflowed(m: np.ndarray) -> bool:
    finite = m < INF_BAR
    return bool((np.abs(m[finite]) > LIMIT).any())


def close(m: np.ndarray) -> int:
    """Floyd-Warshall closure in place; detects emptiness and overflow."""
    n = m.shape[0]
    for k in range(n):
        row = m[:, k : k + 1]  # bounds var_i - var_k
        col = m[k : k + 1, :]  # bounds var_k - var_j
        sums = row + col - ((row | col) & 1)
        np.minimum(m, np.where((row >= INF_BAR) | (col >= INF_BAR), INF, sums), out=m)
    diag = np.diagonal(m)
    if (diag < LE_ZERO).any():
        return EMPTY
    np.fill_diagonal(m, LE_ZERO)
    if _overflowed(m):
        return OVERFLOW
    return OK


def close_after(m: np.ndarray, i: int, j: int) -> int:
    """Re-close in place after entry ``(i, j)`` of a canonical matrix was tightened."""
    w = int(m[i, j])
    if bound_add(w, int(m[j, i])) < LE_ZERO:
        return EMPTY
    if w >= INF_BAR:
        return OK
    col = m[:, i : i + 1]  # var_a - var_i
    row = m[j : j + 1, :]  # var_j - var_b
    left = np.where(col >= INF_BAR, INF, col + w - ((col | w) & 1))
    sums = left + row - ((left | row) & 1)
    np.minimum(m, np.where((left >= INF_BAR) | (row >= INF_BAR), INF, sums), out=m)
    if _overflowed(m):
        return OVERFLOW
    return OK


def includes(outer: np.ndarray, inner: np.ndarray) -> bool:
    """True iff every bound of ``inner`` is at least as tight as ``outer``'s."""
    return bool((inner <= outer).all())
