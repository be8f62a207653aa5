from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from roabpwidth.exactfield import QQ


def fraction_rank(matrix, p=None):
    """Plain Gauss-Jordan on Fractions (or residues mod p); an oracle independent of the library."""
    rows = [[Fraction(x) for x in r] for r in matrix]
    if p is not None:
        rows = [[Fraction(int(x) % p) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = (1 / rows[rank][col]) if p is None else Fraction(pow(int(rows[rank][col]), -1, p))
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                c = rows[r][col] * inv
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[rank])]
                if p is not None:
                    rows[r] = [Fraction(int(a) % p) for a in rows[r]]
        rank += 1
        col += 1
    return rank


def dense_nisan(f, S):
    """Coefficient matrix of f split along S, built straight from the term list."""
    S = set(S)
    inside = [i for i in range(f.n) if i in S]
    outside = [i for i in range(f.n) if i not in S]
    rows = sorted({tuple(e[i] for i in inside) for e in f.terms})
    cols = sorted({tuple(e[i] for i in outside) for e in f.terms})
    M = [[0] * len(cols) for _ in rows]
    for e, c in f.terms.items():
        r = rows.index(tuple(e[i] for i in inside))
        k = cols.index(tuple(e[i] for i in outside))
        M[r][k] = c
    return M


def oracle_rank(f, S):
    return fraction_rank(dense_nisan(f, S), f.field.p)


def all_subsets(n):
    for k in range(n + 1):
        yield from combinations(range(n), k)


__all__ = ["QQ", "fraction_rank", "dense_nisan", "oracle_rank", "all_subsets"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
