"""Exact integer rank of sparse matrices.

Rows are ``{column: nonzero int}`` dicts.  The matrix is first split into the
connected components of its row/column support graph; each block is reduced
by fraction-free elimination with content removal, so entries stay small and
no division ever leaves the integers.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping

SparseRow = Mapping[int, int]


def _content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = _content(row)
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def echelon_rank(rows: Iterable[SparseRow]) -> int:
    """Rank of one block by incremental fraction-free reduction."""
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        row = {c: v for c, v in r.items() if v}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _normalize(row)
                break
            # row <- p*row - v*piv, which cancels column `lead`
            p = piv[lead]
            v = row[lead]
            g = gcd(p, v)
            p //= g
            v //= g
            new = {c: p * x for c, x in row.items()} if p != 1 else dict(row)
            for c, x in piv.items():
                y = new.get(c, 0) - v * x
                if y:
                    new[c] = y
                else:
                    new.pop(c, None)
            row = _normalize(new) if new else new
    return len(pivots)


def blocks(rows: list[SparseRow]) -> list[list[int]]:
    """Row indices grouped by connected component of the support graph."""
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    # rows are nodes ("r", i) -> -(i+1); columns are c >= 0
    for i, row in enumerate(rows):
        ri = -(i + 1)
        parent.setdefault(ri, ri)
        for c in row:
            parent.setdefault(c, c)
            union(ri, c)
    groups: dict[int, list[int]] = {}
    for i in range(len(rows)):
        groups.setdefault(find(-(i + 1)), []).append(i)
    return list(groups.values())


def sparse_rank(rows: list[SparseRow]) -> int:
    total = 0
    for idx in blocks(rows):
        total += echelon_rank(rows[i] for i in idx)
    return total
