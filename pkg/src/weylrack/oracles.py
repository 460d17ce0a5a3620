"""Brute-force reference computations, kept apart from the main code paths.

Nothing here is used by the production routines; tests and the selftest
compare against these.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from .core import GroupSpec, SignedElement, closure, compose, generators


def rank_rational(matrix) -> int:
    """Rank by dense Gaussian elimination over the rationals."""
    m = [[Fraction(int(v)) for v in row] for row in matrix]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = 1 / prow[c]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] * inv
                row = m[r]
                for k in range(c, cols):
                    if prow[k] != 0:
                        row[k] -= f * prow[k]
        rank += 1
        if rank == rows:
            break
    return rank


def dense_braiding(table, q) -> np.ndarray:
    """``c(e_x (x) e_y) = q[x][y] e_{x|>y} (x) e_x`` as a dense N^2 x N^2 array."""
    n = len(table)
    c = np.zeros((n * n, n * n), dtype=np.int64)
    for x, y in product(range(n), repeat=2):
        c[table[x][y] * n + x, x * n + y] = q[x][y]
    return c


def dense_symmetrizer(table, q, m: int) -> np.ndarray:
    """Quantum symmetrizer from explicit Kronecker products of the inverse braiding."""
    n = len(table)
    c = dense_braiding(table, q)
    # a signed permutation matrix is inverted by its transpose
    cinv = c.T.copy()
    assert (c @ cinv == np.eye(n * n, dtype=np.int64)).all()

    def leg(k, size):
        # C_{k,k+1}^{-1} on V^{(x) size}, k 1-indexed
        return np.kron(np.kron(np.eye(n ** (k - 1), dtype=np.int64), cinv),
                       np.eye(n ** (size - k - 1), dtype=np.int64))

    def s1(j):
        size = j + 1
        total = np.eye(n ** size, dtype=np.int64)
        word = np.eye(n ** size, dtype=np.int64)
        for k in range(1, j + 1):
            word = word @ leg(k, size)
            total = total + word
        return total

    out = np.eye(n ** m, dtype=np.int64)
    for j in range(1, m):
        out = out @ np.kron(np.eye(n ** (m - j - 1), dtype=np.int64), s1(j))
    return out


def group_by_closure(spec: GroupSpec) -> list[SignedElement]:
    return closure(generators(spec))


def sq_is_trivial_by_products(x: SignedElement, y: SignedElement) -> bool:
    """``sq(x, y) == y`` decided as ``(xy)^2 == (yx)^2``."""
    xy = compose(x, y)
    yx = compose(y, x)
    return compose(xy, xy) == compose(yx, yx)
