from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import fraction_rank
from roabpwidth.exactfield import GF, QQ
from roabpwidth.linalg import bareiss_rank, dense_rank, rref, solve_square, sparse_rank

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def as_sparse(M):
    return [{j: x for j, x in enumerate(row) if x} for row in M]


def test_identity_and_zero():
    assert bareiss_rank([[1, 0], [0, 1]]) == 2
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    assert sparse_rank([], QQ) == 0


def test_rank_one_all_ones():
    M = [[1] * 4 for _ in range(4)]
    assert bareiss_rank(M) == 1
    assert sparse_rank(as_sparse(M), GF(2)) == 1


def test_characteristic_matters():
    M = [[1, 1], [1, -1]]
    assert sparse_rank(as_sparse(M), QQ) == 2
    assert sparse_rank(as_sparse(M), GF(2)) == 1


@given(matrices())
def test_bareiss_matches_oracle(M):
    assert bareiss_rank(M) == fraction_rank(M)


@given(matrices(), st.sampled_from([2, 3, 5]))
def test_mod_rank_matches_oracle(M, p):
    F = GF(p)
    rows = [{j: F.reduce(x) for j, x in enumerate(r) if F.reduce(x)} for r in M]
    assert sparse_rank(rows, F) == fraction_rank(M, p)


@given(matrices())
def test_sparse_rank_over_rationals(M):
    assert sparse_rank(as_sparse(M), QQ) == fraction_rank(M)


def test_rational_entries():
    M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert sparse_rank(as_sparse(M), QQ) == 1
    assert dense_rank(M, QQ) == 1


def test_block_structure_large():
    rng = random.Random(3)
    blocks = []
    total = 0
    for b in range(5):
        k = rng.randint(1, 4)
        total += k
        for i in range(k):
            blocks.append({(b, i): 1, (b, "s"): rng.randint(1, 3)})
    assert sparse_rank(blocks, QQ) == fraction_rank_from_sparse(blocks)


def fraction_rank_from_sparse(rows):
    cols = sorted({c for r in rows for c in r}, key=repr)
    return fraction_rank([[r.get(c, 0) for c in cols] for r in rows])


@settings(max_examples=60)
@given(matrices(5, 5))
def test_rref_is_echelon_basis(M):
    rows = as_sparse(M)
    cols = list(range(len(M[0])))
    basis = rref(rows, cols, QQ)
    assert len(basis) == fraction_rank(M)
    pivots = [c for c, _ in basis]
    assert pivots == sorted(pivots)
    for c, row in basis:
        assert row.get(c) == 1
        for c2, other in basis:
            if other is not row:
                assert other.get(c, 0) == 0


def test_solve_square():
    inv = solve_square([[2, 1], [1, 1]], QQ)
    assert inv == [[1, -1], [-1, 2]]
    assert solve_square([[1, 2], [2, 4]], QQ) is None
    assert solve_square([[1, 1], [0, 1]], GF(2)) == [[1, 1], [0, 1]]
