"""Exact rank and row reduction on sparse rows.

Rows are ``dict`` objects mapping a hashable column key to a nonzero field
element.  Rank over the rationals uses fraction-free (Bareiss) elimination
on integer rows; over ``GF(p)`` it is ordinary Gaussian elimination.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .exactfield import Field, Scalar

Row = dict


def _components(rows: Sequence[Row]) -> list[list[int]]:
    """Group row indices that are linked through shared columns."""
    parent = list(range(len(rows)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[Hashable, int] = {}
    for i, row in enumerate(rows):
        for col in row:
            j = owner.setdefault(col, i)
            if j != i:
                a, b = find(i), find(j)
                if a != b:
                    parent[a] = b
    groups: dict[int, list[int]] = {}
    for i in range(len(rows)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _integer_row(row: Row, cols: dict) -> list[int]:
    den = 1
    for v in row.values():
        if type(v) is Fraction:
            den = den * v.denominator // math.gcd(den, v.denominator)
    out = [0] * len(cols)
    for c, v in row.items():
        out[cols[c]] = int(v * den)
    return out


def bareiss_rank(matrix: list[list[int]]) -> int:
    """Rank of a dense integer matrix by fraction-free elimination (destructive)."""
    m = len(matrix)
    if m == 0:
        return 0
    k = len(matrix[0])
    prev = 1
    r = 0
    for c in range(k):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if matrix[i][c]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        top = matrix[r]
        piv = top[c]
        for i in range(r + 1, m):
            row = matrix[i]
            a = row[c]
            if a:
                for j in range(c + 1, k):
                    row[j] = (piv * row[j] - a * top[j]) // prev
            elif piv != prev:
                for j in range(c + 1, k):
                    if row[j]:
                        row[j] = piv * row[j] // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def _mod_rank(rows: list[Row], p: int) -> int:
    basis: list[tuple[Hashable, Row]] = []
    for row in rows:
        row = dict(row)
        for pc, prow in basis:
            a = row.get(pc)
            if a:
                for c, v in prow.items():
                    w = (row.get(c, 0) - a * v) % p
                    if w:
                        row[c] = w
                    else:
                        row.pop(c, None)
        if row:
            pc, a = next(iter(row.items()))
            inv = pow(a, -1, p)
            basis.append((pc, {c: v * inv % p for c, v in row.items()}))
    return len(basis)


def sparse_rank(rows: Iterable[Row], field: Field) -> int:
    """Exact rank of the matrix whose nonzero rows are ``rows``.

    The matrix is split into blocks that share no rows or columns; each block
    with a single row or column has rank one, the rest are eliminated.
    """
    rows = [r for r in rows if r]
    total = 0
    for group in _components(rows):
        block = [rows[i] for i in group]
        cols: dict[Hashable, int] = {}
        for row in block:
            for c in row:
                cols.setdefault(c, len(cols))
        if len(block) == 1 or len(cols) == 1:
            total += 1
        elif field.p is None:
            total += bareiss_rank([_integer_row(r, cols) for r in block])
        else:
            total += _mod_rank(block, field.p)
    return total


def rref(rows: Iterable[Row], col_order: Sequence[Hashable], field: Field) -> list[tuple[Hashable, Row]]:
    """Reduced row echelon basis of the row space.

    Columns are processed in ``col_order``; returns ``(pivot column, row)``
    pairs in pivot order with each row scaled so its pivot entry is one.
    """
    position = {c: i for i, c in enumerate(col_order)}
    basis: list[tuple[Hashable, Row]] = []
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        for pc, prow in basis:
            a = row.get(pc)
            if a:
                _axpy(row, prow, a, field)
        if not row:
            continue
        pc = min(row, key=position.__getitem__)
        inv = field.inv(row[pc])
        row = {c: field.mul(v, inv) for c, v in row.items()}
        for _, qrow in basis:
            a = qrow.get(pc)
            if a:
                _axpy(qrow, row, a, field)
        basis.append((pc, row))
    basis.sort(key=lambda item: position[item[0]])
    return basis


def _axpy(target: Row, source: Row, a: Scalar, field: Field) -> None:
    """``target -= a * source`` in place, dropping zeros."""
    for c, v in source.items():
        w = field.sub(target.get(c, 0), field.mul(a, v))
        if w:
            target[c] = w
        else:
            target.pop(c, None)


def dense_rank(matrix: Sequence[Sequence[Scalar]], field: Field) -> int:
    rows = [{j: v for j, v in enumerate(r) if v} for r in matrix]
    return sparse_rank(rows, field)


def solve_square(matrix: Sequence[Sequence[Scalar]], field: Field) -> list[list[Scalar]] | None:
    """Inverse of a square matrix, or ``None`` when it is singular."""
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = field.inv(aug[c][c])
        aug[c] = [field.mul(v, inv) for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                a = aug[i][c]
                aug[i] = [field.sub(x, field.mul(a, y)) for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]
