"""Polynomials built from a graph whose Nisan ranks encode a layout functional.

=========  =====================================================  ==================
kind       polynomial                                             rank of M_S
=========  =====================================================  ==================
inapprox   prod over edges (1 + x_i^{b_i(j)} x_j^{b_j(i)})        2^cut(S)
bdgt       sum_E x_i^{n_i(j)} x_j^{n_j(i)} + sum_i x_i^{D+1}       cut(S) + 2
orbit0     Pi(x) (sum_k x_a^k x_b^{2m-k+1} + sum_i x_i^{2m+1})    cut(S) + 2
orbitp     sum_E x_i^{n_i(j)} x_j^{n_j(i)} + sum_j x_j^{D_j}      cut(S) + 2
quad       sum_E x_i x_j + sum_i x_i^2                            cut-rank(S) + 2
=========  =====================================================  ==================

Here ``n_i(j)`` counts the neighbours of ``i`` that are ``<= j``,
``b_i(j) = 2^(n_i(j)-1)``, ``D`` is the maximum degree, ``m = |E|``,
``Pi(x) = prod_i x_i^{m+2}`` and edge ``k`` is ``{a, b}`` with ``a < b`` in
lexicographic edge order.  The ``+ 2`` identities hold for proper nonempty
``S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from .errors import CapExceededError, FieldError, GraphError
from .exactfield import GF, QQ, Field, is_prime, lucas_binom
from .graphlayout import Graph
from .sparsepoly import SparsePoly, poly_from_terms

DEFAULT_EXPANSION_CAP = 16
KIND_TAGS = ("inapprox", "bdgt", "orbit0", "orbitp", "quad")


def neighbor_index(G: Graph, i: int, j: int) -> int:
    """Number of neighbours of ``i`` that are ``<= j``; ``{i, j}`` must be an edge."""
    if j not in G.adjacency[i]:
        raise GraphError(f"{i + 1}-{j + 1} is not an edge")
    return sum(1 for k in G.adjacency[i] if k <= j)


def _edge_exponents(G: Graph, binary: bool = False) -> list[list[int]]:
    """Per-edge exponent vectors ``x_i^{n_i(j)} x_j^{n_j(i)}``; ``binary`` uses ``2^(n_i(j)-1)``."""
    rows = []
    for u, v in G.edges:
        exps = [0] * G.n
        a, b = neighbor_index(G, u, v), neighbor_index(G, v, u)
        exps[u], exps[v] = (2 ** (a - 1), 2 ** (b - 1)) if binary else (a, b)
        rows.append(exps)
    return rows


def check_neighbor_index(G: Graph) -> None:
    """Each ``n_i`` must map the neighbours of ``i`` onto ``1..deg(i)``."""
    for i in range(G.n):
        values = sorted(neighbor_index(G, i, j) for j in G.adjacency[i])
        if values != list(range(1, G.degree(i) + 1)):
            raise AssertionError(f"neighbour index of vertex {i + 1} is not a bijection: {values}")


def gadget_inapprox(
    G: Graph,
    field: Field = QQ,
    cap: int = DEFAULT_EXPANSION_CAP,
    exponents: str = "binary",
) -> SparsePoly:
    """Expanded product with one ``1 + x_i^a x_j^b`` factor per edge (``2^|E|`` terms).

    With ``exponents="binary"`` the edge ``{i, j}`` contributes ``x_i^(2^(n_i(j)-1))``,
    so distinct sets of edges at a vertex give distinct powers and every row of
    ``M_S`` picks out one set of cut edges.  ``"neighbor"`` uses ``n_i(j)`` itself;
    that agrees on vertices of degree at most 2 but merges rows at degree 3
    (``1 + 2 = 3``), e.g. rank 7 instead of 8 at the centre of a 3-star.
    """
    if exponents not in ("binary", "neighbor"):
        raise ValueError(f"unknown exponent scheme {exponents!r}")
    if G.m > cap:
        raise CapExceededError(f"expanding {G.m} edge factors gives 2^{G.m} terms; expansion cap is {cap}")
    check_neighbor_index(G)
    terms = {(0,) * G.n: 1}
    for exps in _edge_exponents(G, binary=exponents == "binary"):
        nxt = dict(terms)
        for mono in terms:
            key = tuple(a + b for a, b in zip(mono, exps))
            nxt[key] = nxt.get(key, 0) + 1
        terms = nxt
    return SparsePoly(G.n, field, {k: field.reduce(v) for k, v in terms.items()})


def bdgt_degree(G: Graph) -> int:
    """Maximum degree with the edgeless convention ``D := 1``."""
    return max(G.max_degree, 1)


def gadget_bdgt(G: Graph, field: Field = QQ) -> SparsePoly:
    check_neighbor_index(G)
    top = bdgt_degree(G) + 1
    terms = [(1, e) for e in _edge_exponents(G)]
    for i in range(G.n):
        exps = [0] * G.n
        exps[i] = top
        terms.append((1, exps))
    return poly_from_terms(G.n, field, terms)


def gadget_orbit_char0(G: Graph, field: Field = QQ, vertex_terms: bool = True) -> SparsePoly:
    """Homogeneous gadget of degree ``(n+2)|E| + 2n + 1``, every term divisible by ``Pi(x)``.

    ``vertex_terms=False`` drops the ``Pi(x) x_i^{2|E|+1}`` terms; that variant
    only reaches rank ``cut(S)`` plus one per side that contains an edge.
    """
    if field.characteristic != 0:
        raise FieldError("the homogeneous orbit gadget needs characteristic 0")
    m = G.m
    base = m + 2
    terms = []
    for k, (a, b) in enumerate(G.edges, start=1):
        exps = [base] * G.n
        exps[a] += k
        exps[b] += 2 * m - k + 1
        terms.append((1, exps))
    if vertex_terms:
        for i in range(G.n):
            exps = [base] * G.n
            exps[i] += 2 * m + 1
            terms.append((1, exps))
    return poly_from_terms(G.n, field, terms)


@dataclass(frozen=True)
class CharPExponents:
    p: int
    M: int
    L: int
    D: tuple

    def to_json(self) -> dict:
        return {"p": self.p, "M": self.M, "L": self.L, "D": list(self.D)}


def charp_exponents(n: int, m: int, p: int) -> CharPExponents:
    """``M = max(m + 4, 7)``, least ``L`` with ``p^L > M``, ``D_j = (p^L - 1) + (j - 1) p^L``."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    M = max(m + 4, 7)
    L = 1
    while p**L <= M:
        L += 1
    q = p**L
    return CharPExponents(p, M, L, tuple((q - 1) + j * q for j in range(n)))


def check_lucas_exponents(ex: CharPExponents) -> None:
    for D in ex.D:
        bad = [i for i in range(1, ex.M + 1) if lucas_binom(D, i, ex.p) == 0]
        if bad:
            raise AssertionError(f"C({D}, i) vanishes mod {ex.p} for i in {bad}")


def gadget_orbit_charp(G: Graph, p: int) -> SparsePoly:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if G.max_degree > 3:
        raise GraphError(f"maximum degree {G.max_degree} exceeds 3")
    check_neighbor_index(G)
    ex = charp_exponents(G.n, G.m, p)
    check_lucas_exponents(ex)
    terms = [(1, e) for e in _edge_exponents(G)]
    for j, D in enumerate(ex.D):
        exps = [0] * G.n
        exps[j] = D
        terms.append((1, exps))
    return poly_from_terms(G.n, GF(p), terms)


def gadget_quadratic(G: Graph, field: Field = QQ) -> SparsePoly:
    terms = []
    for u, v in G.edges:
        exps = [0] * G.n
        exps[u] = exps[v] = 1
        terms.append((1, exps))
    for i in range(G.n):
        exps = [0] * G.n
        exps[i] = 2
        terms.append((1, exps))
    return poly_from_terms(G.n, field, terms)


@dataclass(frozen=True)
class GadgetKind:
    """A gadget family plus its field: ``p`` is required for ``orbitp``,
    forbidden for ``orbit0`` and optional (rationals when absent) otherwise."""

    tag: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.tag not in KIND_TAGS:
            raise ValueError(f"unknown gadget kind {self.tag!r}; expected one of {KIND_TAGS}")
        if self.tag == "orbitp" and self.p is None:
            raise FieldError("orbitp needs a prime p")
        if self.tag == "orbit0" and self.p is not None:
            raise FieldError("orbit0 is a characteristic-0 gadget")
        if self.p is not None and not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def field(self) -> Field:
        return QQ if self.p is None else GF(self.p)

    def __str__(self) -> str:
        return self.tag if self.p is None else f"{self.tag}[p={self.p}]"


@dataclass
class Gadget:
    kind: GadgetKind
    graph: Graph
    poly: SparsePoly
    params: dict = dc_field(default_factory=dict)
    flags: list = dc_field(default_factory=list)

    def metadata(self) -> dict[str, Any]:
        return {
            "kind": self.kind.tag,
            "graph": self.graph.to_json(),
            "params": self.params,
            "flags": self.flags,
        }


def build_gadget(kind: GadgetKind, G: Graph, expansion_cap: int = DEFAULT_EXPANSION_CAP) -> Gadget:
    params: dict[str, Any] = {"field": kind.field.to_json()}
    flags = []
    if G.m == 0:
        flags.append("edgeless")
    if kind.tag == "inapprox":
        poly = gadget_inapprox(G, kind.field, cap=expansion_cap)
        params["exponents"] = "binary"
        params["edge_exponents"] = _edge_exponents(G, binary=True)
    elif kind.tag == "bdgt":
        poly = gadget_bdgt(G, kind.field)
        params["max_degree"] = bdgt_degree(G)
        if G.m == 0:
            flags.append("max_degree_defaulted_to_1")
    elif kind.tag == "orbit0":
        poly = gadget_orbit_char0(G, kind.field)
        params["edge_order"] = [[u + 1, v + 1] for u, v in G.edges]
        params["degree"] = (G.n + 2) * G.m + 2 * G.n + 1
    elif kind.tag == "orbitp":
        poly = gadget_orbit_charp(G, kind.p)
        params.update(charp_exponents(G.n, G.m, kind.p).to_json())
    else:
        poly = gadget_quadratic(G, kind.field)
    return Gadget(kind, G, poly, params, flags)
