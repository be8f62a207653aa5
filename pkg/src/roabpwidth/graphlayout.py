"""Graphs, cut functionals and exact cutwidth / linear rank-width.

Vertices are ``0..n-1`` in code.  The text format numbers them from 1:
the first line is ``n m``, followed by ``m`` lines ``u v``; blank lines and
``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import GraphError, ParseError
from .exactfield import GF, Field
from .linalg import sparse_rank
from .subsetdp import mask_of, members, min_arrangement, prefix_cost


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``edges`` holds sorted pairs ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        seen = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u + 1}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {u + 1}-{v + 1} leaves vertex range 1..{self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"repeated edge {key[0] + 1}-{key[1] + 1}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], one_based: bool = False) -> "Graph":
        shift = 1 if one_based else 0
        return cls(n, tuple((u - shift, v - shift) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(s) for s in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(s) for s in self.adjacency), default=0)

    @property
    def m(self) -> int:
        return len(self.edges)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u + 1} {v + 1}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u + 1, v + 1] for u, v in self.edges]}

    def __str__(self) -> str:
        body = " ".join(f"{u + 1}-{v + 1}" for u, v in self.edges)
        return f"G(n={self.n}: {body})" if body else f"G(n={self.n}, edgeless)"


def path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def edgeless(n: int) -> Graph:
    return Graph(n, ())


def all_graphs(n: int, max_degree: int | None = None) -> Iterator[Graph]:
    """Every labeled simple graph on ``n`` vertices (``2^C(n,2)`` of them)."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        g = Graph(n, tuple(p for k, p in enumerate(pairs) if bits >> k & 1))
        if max_degree is None or g.max_degree <= max_degree:
            yield g


def _as_mask(S: Iterable[int] | int) -> int:
    return S if isinstance(S, int) else mask_of(S)


def cut_size(G: Graph, S: Iterable[int] | int) -> int:
    """Number of edges with exactly one endpoint in ``S``."""
    mask = _as_mask(S)
    return sum(1 for u, v in G.edges if (mask >> u & 1) != (mask >> v & 1))


def cut_rank(G: Graph, S: Iterable[int] | int, field: Field = GF(2)) -> int:
    """Rank of the 0-1 biadjacency matrix between ``S`` and its complement."""
    mask = _as_mask(S)
    full = (1 << G.n) - 1
    outside = full & ~mask
    rows = []
    for u in members(mask):
        row = {v: 1 for v in members(G.adjacency_masks[u] & outside)}
        if row:
            rows.append(row)
    return sparse_rank(rows, field)


def _cost(G: Graph, mode: str, field: Field | None):
    if mode == "cut":
        return lambda mask: cut_size(G, mask)
    if mode == "cutrank":
        f = field or GF(2)
        cache: dict[int, int] = {}

        def rank(mask: int) -> int:
            if mask not in cache:
                cache[mask] = cut_rank(G, mask, f)
            return cache[mask]

        return rank
    raise ValueError(f"unknown mode {mode!r}; expected 'cut' or 'cutrank'")


def arrangement_cost(G: Graph, pi: Sequence[int], mode: str = "cut", field: Field | None = None) -> int:
    """Largest prefix cut (or cut-rank) of the arrangement ``pi``."""
    if sorted(pi) != list(range(G.n)):
        raise GraphError(f"{list(pi)} is not an arrangement of {G.n} vertices")
    return prefix_cost(list(pi), _cost(G, mode, field))


def cutwidth_exact(G: Graph, cap: int | None = None) -> tuple[int, tuple[int, ...]]:
    w, order = min_arrangement(G.n, _cost(G, "cut", None), cap=cap, what="cutwidth")
    return w, tuple(order)


def linear_rank_width_exact(G: Graph, field: Field = GF(2), cap: int | None = None) -> tuple[int, tuple[int, ...]]:
    w, order = min_arrangement(G.n, _cost(G, "cutrank", field), cap=cap, what="linear rank-width")
    return w, tuple(order)


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` / ``u v`` text format; errors name the offending line."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise ParseError("empty graph file")
    lineno, header = lines[0]
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise ParseError(f"line {lineno}: expected 'n m', got {header!r}") from None
    if n < 1 or m < 0:
        raise ParseError(f"line {lineno}: bad header {header!r}")
    if len(lines) - 1 != m:
        raise ParseError(f"header announces {m} edges, file has {len(lines) - 1}")
    edges = []
    seen = set()
    for lineno, body in lines[1:]:
        try:
            u, v = (int(t) for t in body.split())
        except ValueError:
            raise ParseError(f"line {lineno}: expected 'u v', got {body!r}") from None
        if u == v:
            raise GraphError(f"line {lineno}: loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"line {lineno}: vertex out of range 1..{n} in {body!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: repeated edge {key[0]}-{key[1]}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges, one_based=True)


def load_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
