from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_subsets, oracle_rank
from roabpwidth.errors import CapExceededError, DimensionError, ZeroPolynomialError
from roabpwidth.exactfield import GF, QQ
from roabpwidth.harness import random_sparse_poly
from roabpwidth.nisan import (
    Roabp,
    evaluate_roabp,
    exhaustive_widths,
    greedy_order,
    min_width,
    nisan_matrix,
    nisan_rank,
    synthesize_roabp,
    verify_roabp,
    width_profile,
)
from roabpwidth.sparsepoly import SparsePoly, poly_from_terms, poly_mul

# variables x1, y1, x2, y2 are 0, 1, 2, 3


def lin(n, i, j, field=QQ):
    e1, e2 = [0] * n, [0] * n
    e1[i] = e2[j] = 1
    return poly_from_terms(n, field, [(1, e1), (1, e2)])


def product_of_pairs(k):
    f = lin(2 * k, 0, 1)
    for t in range(1, k):
        f = poly_mul(f, lin(2 * k, 2 * t, 2 * t + 1))
    return f


def brute_width(f, order):
    return max([1] + [oracle_rank(f, order[:i]) for i in range(1, f.n)])


def test_matrix_shape_and_rank_examples():
    f = product_of_pairs(2)
    M = nisan_matrix(f, [0, 2])
    assert M.shape == (4, 4)
    assert nisan_rank(f, [0, 2]) == 4
    assert nisan_rank(f, [0, 1]) == 1


def test_single_term_matrix():
    f = poly_from_terms(2, QQ, [(1, [1, 1])])
    M = nisan_matrix(f, [0])
    assert M.shape == (1, 1)
    assert M.dense() == [[1]]


def test_sum_matrix_antidiagonal():
    f = lin(2, 0, 1)
    M = nisan_matrix(f, [0])
    assert sorted(M.row_keys) == [(0,), (1,)]
    assert sorted(M.col_keys) == [(0,), (1,)]
    dense = M.dense()
    r1, c1 = M.row_keys.index((1,)), M.col_keys.index((0,))
    assert dense[r1][c1] == 1 and sum(map(sum, dense)) == 2


def test_trivial_subsets():
    f = random_sparse_poly(random.Random(5), 3)
    assert nisan_rank(f, []) == 1
    assert nisan_rank(f, [0, 1, 2]) == 1
    assert nisan_rank(f, 0) == 1


def test_zero_rejected():
    z = SparsePoly(2, QQ)
    for fn in (lambda: nisan_rank(z, [0]), lambda: width_profile(z), lambda: min_width(z),
               lambda: synthesize_roabp(z)):
        with pytest.raises(ZeroPolynomialError):
            fn()


def test_width_profile_examples():
    f = product_of_pairs(2)
    r = width_profile(f, [0, 1, 2, 3])
    assert list(r.prefix_ranks) == [2, 1, 2] and r.width == 2
    r = width_profile(f, [0, 2, 1, 3])
    assert list(r.prefix_ranks) == [2, 4, 2] and r.width == 4
    mono = poly_from_terms(3, QQ, [(5, [1, 1, 1])])
    assert all(width_profile(mono, p).width == 1 for p in permutations(range(3)))


def test_report_json_one_based():
    r = width_profile(product_of_pairs(2), [1, 0, 2, 3])
    assert r.to_json()["order"] == [2, 1, 3, 4]


def test_min_width_three_pairs():
    f = product_of_pairs(3)
    w, order = min_width(f)
    assert w == 2
    assert w == min(exhaustive_widths(f).values())
    assert width_profile(f, order).width == 2


def test_min_width_monomial():
    assert min_width(poly_from_terms(3, QQ, [(1, [2, 0, 1])]))[0] == 1


def test_min_width_cap():
    f = product_of_pairs(3)
    with pytest.raises(CapExceededError):
        min_width(f, cap=5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_rank_matches_oracle(seed):
    rng = random.Random(seed)
    field = rng.choice([QQ, GF(2), GF(3)])
    f = random_sparse_poly(rng, rng.randint(1, 4), max_terms=7, field=field)
    for S in all_subsets(f.n):
        assert nisan_rank(f, S) == oracle_rank(f, S)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_rank_symmetry(seed):
    rng = random.Random(seed)
    f = random_sparse_poly(rng, 4, max_terms=6)
    for S in all_subsets(4):
        comp = [i for i in range(4) if i not in S]
        assert nisan_rank(f, S) == nisan_rank(f, comp)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_rank_subadditive(seed):
    rng = random.Random(seed)
    f = random_sparse_poly(rng, 3)
    g = random_sparse_poly(rng, 3)
    h = f + g
    if h.is_zero():
        return
    for S in all_subsets(3):
        assert nisan_rank(h, S) <= nisan_rank(f, S) + nisan_rank(g, S)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_disjoint_product_rank_one(seed):
    rng = random.Random(seed)
    n = 4
    S = sorted(rng.sample(range(n), rng.randint(1, 3)))
    comp = [i for i in range(n) if i not in S]

    def supported_on(vars_):
        f = random_sparse_poly(rng, n)
        return poly_from_terms(n, QQ, [(c, [e[i] if i in vars_ else 0 for i in range(n)]) for e, c in f.terms.items()])

    g, h = supported_on(S), supported_on(comp)
    if g.is_zero() or h.is_zero():
        return
    assert nisan_rank(poly_mul(g, h), S) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_min_width_matches_exhaustive(seed):
    rng = random.Random(seed)
    f = random_sparse_poly(rng, rng.randint(1, 5), max_terms=8)
    w, order = min_width(f)
    widths = {p: brute_width(f, list(p)) for p in permutations(range(f.n))}
    assert w == min(widths.values())
    assert widths[tuple(order)] == w


def test_min_width_tie_break_deterministic():
    f = lin(3, 0, 1) + poly_from_terms(3, QQ, [(1, [0, 0, 1])])
    assert min_width(f) == min_width(f)


def test_greedy_is_an_upper_bound():
    rng = random.Random(2)
    for _ in range(20):
        f = random_sparse_poly(rng, 4)
        order, w = greedy_order(f)
        assert w >= min_width(f)[0]
        assert width_profile(f, order).width == w


def test_synthesis_sum():
    f = lin(2, 0, 1)
    R = synthesize_roabp(f, [0, 1])
    assert R.widths == [1, 2, 1]
    assert R.expand() == f
    assert evaluate_roabp(R, [2, 3]) == 5
    assert evaluate_roabp(R, [0, 0]) == 0


def test_synthesis_monomial():
    f = poly_from_terms(3, QQ, [(3, [2, 0, 1])])
    R = synthesize_roabp(f, [2, 0, 1])
    assert R.widths == [1, 1, 1, 1]
    assert R.expand() == f


def test_synthesis_interleaved():
    f = product_of_pairs(2)
    R = synthesize_roabp(f, [0, 1, 2, 3])
    assert R.widths == [1, 2, 1, 2, 1]
    assert verify_roabp(R, f)


def test_synthesis_constant_term():
    f = poly_from_terms(2, QQ, [(7, [0, 0]), (1, [1, 2])])
    R = synthesize_roabp(f)
    assert evaluate_roabp(R, [0, 0]) == 7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_synthesis_random(seed):
    rng = random.Random(seed)
    field = rng.choice([QQ, GF(2), GF(5)])
    f = random_sparse_poly(rng, rng.randint(1, 4), max_terms=8, field=field)
    order = list(range(f.n))
    rng.shuffle(order)
    R = synthesize_roabp(f, order)
    assert R.widths == [1, *width_profile(f, order).prefix_ranks, 1]
    assert R.expand() == f
    for _ in range(5):
        pt = [field.reduce(Fraction(rng.randint(-9, 9), rng.randint(1, 3)) if field.p is None else rng.randint(0, 50))
              for _ in range(f.n)]
        assert R.evaluate(pt) == f.evaluate(pt)


def test_roabp_json_roundtrip():
    f = product_of_pairs(2)
    R = synthesize_roabp(f, [0, 2, 1, 3])
    S = Roabp.from_json(R.to_json())
    assert S.expand() == f
    assert S.widths == [1, 2, 4, 2, 1]


def test_evaluate_dimension_mismatch():
    R = synthesize_roabp(lin(2, 0, 1))
    with pytest.raises(DimensionError):
        evaluate_roabp(R, [1])


def test_bad_order():
    with pytest.raises(DimensionError):
        width_profile(lin(2, 0, 1), [0, 0])
