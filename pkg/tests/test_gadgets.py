from __future__ import annotations

import pytest

from conftest import all_subsets, oracle_rank
from roabpwidth.errors import CapExceededError, FieldError, GraphError
from roabpwidth.exactfield import GF, QQ, lucas_binom
from roabpwidth.gadgets import (
    GadgetKind,
    build_gadget,
    charp_exponents,
    gadget_bdgt,
    gadget_inapprox,
    gadget_orbit_char0,
    gadget_orbit_charp,
    gadget_quadratic,
    neighbor_index,
)
from roabpwidth.graphlayout import Graph, all_graphs, complete, cut_size, edgeless, path, star
from roabpwidth.nisan import min_width, nisan_rank
from roabpwidth.sparsepoly import poly_from_terms

EDGE = path(2)


def P(n, terms, field=QQ):
    return poly_from_terms(n, field, terms)


def test_neighbor_index():
    G = path(3)
    assert neighbor_index(G, 1, 2) == 2
    assert neighbor_index(G, 1, 0) == 1
    assert neighbor_index(G, 0, 1) == 1
    with pytest.raises(GraphError):
        neighbor_index(G, 0, 2)


def test_neighbor_index_bijective():
    for G in all_graphs(5):
        for i in range(G.n):
            assert sorted(neighbor_index(G, i, j) for j in G.adjacency[i]) == list(range(1, G.degree(i) + 1))


def test_inapprox_examples():
    assert gadget_inapprox(EDGE) == P(2, [(1, [0, 0]), (1, [1, 1])])
    # the defining product for P3 is (1 + x1 x2)(1 + x2^2 x3)
    want = P(3, [(1, [0, 0, 0]), (1, [1, 1, 0]), (1, [0, 2, 1]), (1, [1, 3, 1])])
    assert gadget_inapprox(path(3), exponents="neighbor") == want
    f = gadget_inapprox(complete(3))
    assert nisan_rank(f, [0]) == 4


def test_inapprox_schemes_agree_below_degree_three():
    for G in all_graphs(4, max_degree=2):
        a = gadget_inapprox(G, exponents="neighbor")
        b = gadget_inapprox(G)
        for S in all_subsets(G.n):
            assert oracle_rank(a, S) == oracle_rank(b, S) == 2 ** cut_size(G, S)


def test_literal_exponents_collapse_at_degree_three():
    G = star(3)
    assert oracle_rank(gadget_inapprox(G, exponents="neighbor"), [0]) == 7
    assert oracle_rank(gadget_inapprox(G), [0]) == 8


def test_inapprox_cap():
    with pytest.raises(CapExceededError):
        gadget_inapprox(complete(5), cap=9)
    assert len(gadget_inapprox(complete(4))) == 2**6


def test_bdgt_examples():
    want = P(3, [(1, [1, 1, 0]), (1, [0, 2, 1]), (1, [3, 0, 0]), (1, [0, 3, 0]), (1, [0, 0, 3])])
    assert gadget_bdgt(path(3)) == want
    assert gadget_bdgt(EDGE) == P(2, [(1, [1, 1]), (1, [2, 0]), (1, [0, 2])])
    assert min_width(gadget_bdgt(path(3)))[0] == 3


def test_bdgt_edgeless_flagged():
    g = build_gadget(GadgetKind("bdgt"), edgeless(2))
    assert "edgeless" in g.flags
    assert g.params["max_degree"] == 1
    assert g.poly == P(2, [(1, [2, 0]), (1, [0, 2])])


def test_orbit0_single_edge():
    assert gadget_orbit_char0(EDGE, vertex_terms=False) == P(2, [(1, [4, 5])])
    f = gadget_orbit_char0(EDGE)
    assert f == P(2, [(1, [4, 5]), (1, [6, 3]), (1, [3, 6])])


def test_orbit0_literal_form_misses_identity():
    f = gadget_orbit_char0(EDGE, vertex_terms=False)
    assert nisan_rank(f, [0]) == 1 != cut_size(EDGE, [0]) + 2


def test_orbit0_divisible_by_pi():
    for G in all_graphs(4):
        f = gadget_orbit_char0(G)
        assert all(min(e) >= G.m + 2 for e in f.terms)


def test_orbit0_rejects_prime_field():
    with pytest.raises(FieldError):
        gadget_orbit_char0(EDGE, GF(3))
    with pytest.raises(FieldError):
        GadgetKind("orbit0", 3)


def test_orbit0_min_width_p3():
    assert min_width(gadget_orbit_char0(path(3)))[0] == 3


def test_charp_exponents():
    ex = charp_exponents(3, 3, 2)
    assert (ex.M, ex.L, ex.D) == (7, 3, (7, 15, 23))
    assert [lucas_binom(7, i, 2) for i in range(1, 7)] == [1] * 6


def test_charp_exponents_distinct_and_nonvanishing():
    for p in (2, 3, 5, 7):
        for n in range(1, 6):
            for m in range(0, 8):
                ex = charp_exponents(n, m, p)
                assert len(set(ex.D)) == n
                assert p**ex.L > ex.M >= p ** (ex.L - 1)
                for D in ex.D:
                    assert all(lucas_binom(D, i, p) for i in range(1, ex.M + 1))


def test_orbitp_gadget():
    f = gadget_orbit_charp(path(3), 2)
    assert f.field == GF(2)
    assert len(f) == 2 + 3
    assert min_width(f)[0] == 3
    with pytest.raises(GraphError):
        gadget_orbit_charp(star(4), 2)
    with pytest.raises(FieldError):
        gadget_orbit_charp(path(3), 4)


def test_quadratic_examples():
    assert gadget_quadratic(EDGE) == P(2, [(1, [1, 1]), (1, [2, 0]), (1, [0, 2])])
    assert min_width(gadget_quadratic(path(3), GF(2)))[0] == 3
    f = gadget_quadratic(edgeless(2))
    assert f == P(2, [(1, [2, 0]), (1, [0, 2])])
    assert nisan_rank(f, [0]) == 2
    assert min_width(f)[0] == 2


@pytest.mark.parametrize("tag,p", [("inapprox", None), ("bdgt", None), ("orbit0", None), ("orbitp", 3), ("quad", 2)])
def test_metadata(tag, p):
    g = build_gadget(GadgetKind(tag, p), path(3))
    meta = g.metadata()
    assert meta["kind"] == tag
    assert meta["graph"] == {"n": 3, "edges": [[1, 2], [2, 3]]}
    assert meta["params"]["field"] == GadgetKind(tag, p).field.to_json()
    if tag == "orbitp":
        assert meta["params"]["D"] == list(charp_exponents(3, 2, 3).D)
    if tag == "orbit0":
        assert meta["params"]["edge_order"] == [[1, 2], [2, 3]]


def test_kind_validation():
    with pytest.raises(ValueError):
        GadgetKind("nope")
    with pytest.raises(FieldError):
        GadgetKind("orbitp")
    assert str(GadgetKind("orbitp", 2)) == "orbitp[p=2]"


def test_term_counts():
    G = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)], one_based=True)
    assert len(gadget_bdgt(G)) == G.m + G.n
    assert len(gadget_quadratic(G)) == G.m + G.n
    assert len(gadget_orbit_charp(G, 2)) == G.m + G.n
    assert len(gadget_orbit_char0(G)) == G.m + G.n
