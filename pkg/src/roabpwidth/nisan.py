"""Nisan matrices, ROABP widths and ROABP synthesis.

For a split of the variables into ``S`` and its complement, the Nisan
matrix has one row per distinct restriction of a monomial of ``f`` to ``S``
and one column per restriction to the complement; entry ``(r, c)`` is the
coefficient of ``r * c`` in ``f``.  Its rank is the size of the layer that
sits after the variables of ``S`` in an optimal read-once oblivious ABP, so
the width of the best program in order ``sigma`` is the largest rank over
the prefixes of ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import permutations
from typing import Any, Iterable, Sequence

from .errors import DimensionError, ParseError, ZeroPolynomialError
from .exactfield import Field, Scalar
from .linalg import rref, sparse_rank
from .sparsepoly import Monomial, SparsePoly
from .subsetdp import check_cap, members, min_arrangement, prefix_cost

Order = tuple


def _require_nonzero(f: SparsePoly) -> None:
    if f.is_zero():
        raise ZeroPolynomialError("width is undefined for the zero polynomial")


def _as_set(f: SparsePoly, S: Iterable[int] | int) -> frozenset[int]:
    items = members(S) if isinstance(S, int) else list(S)
    out = frozenset(items)
    if any(not 0 <= i < f.n for i in out):
        raise DimensionError(f"subset {sorted(out)} not inside 0..{f.n - 1}")
    return out


def check_order(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{list(order)} is not a permutation of 0..{n - 1}")
    return order


@dataclass(frozen=True)
class NisanMatrix:
    S: frozenset
    row_keys: tuple
    col_keys: tuple
    entries: dict

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_keys), len(self.col_keys)

    def rows(self) -> list[dict]:
        out: list[dict] = [{} for _ in self.row_keys]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def dense(self) -> list[list[Scalar]]:
        m = [[0] * len(self.col_keys) for _ in self.row_keys]
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m


def _restrict(exps: Monomial, keep: Sequence[int]) -> Monomial:
    return tuple(exps[i] for i in keep)


def nisan_matrix(f: SparsePoly, S: Iterable[int] | int) -> NisanMatrix:
    """Coefficient matrix of ``f`` split along ``S``; keys are exponent tuples on ``S`` / complement."""
    _require_nonzero(f)
    S = _as_set(f, S)
    inside = sorted(S)
    outside = [i for i in range(f.n) if i not in S]
    rows = sorted({_restrict(e, inside) for e in f.terms})
    cols = sorted({_restrict(e, outside) for e in f.terms})
    ri = {k: i for i, k in enumerate(rows)}
    ci = {k: i for i, k in enumerate(cols)}
    entries = {(ri[_restrict(e, inside)], ci[_restrict(e, outside)]): c for e, c in f.terms.items()}
    return NisanMatrix(S, tuple(rows), tuple(cols), entries)


def _rank_rows(f: SparsePoly, inside: Sequence[int], outside: Sequence[int]) -> list[dict]:
    rows: dict[Monomial, dict] = {}
    for e, c in f.terms.items():
        r = tuple(e[i] for i in inside)
        rows.setdefault(r, {})[tuple(e[i] for i in outside)] = c
    return list(rows.values())


def nisan_rank(f: SparsePoly, S: Iterable[int] | int) -> int:
    """Exact rank of the Nisan matrix of ``f`` for the split ``S``."""
    _require_nonzero(f)
    S = _as_set(f, S)
    if not S or len(S) == f.n:
        return 1
    inside = sorted(S)
    outside = [i for i in range(f.n) if i not in S]
    return sparse_rank(_rank_rows(f, inside, outside), f.field)


class RankTable:
    """Memoized ``mask -> nisan_rank`` for one polynomial."""

    def __init__(self, f: SparsePoly):
        _require_nonzero(f)
        self.f = f
        self._cache: dict[int, int] = {}

    def __call__(self, mask: int) -> int:
        r = self._cache.get(mask)
        if r is None:
            r = nisan_rank(self.f, mask)
            self._cache[mask] = r
        return r

    def all_masks(self) -> list[int]:
        return [self(m) for m in range(1 << self.f.n)]


@dataclass(frozen=True)
class WidthReport:
    order: tuple
    prefix_ranks: tuple
    width: int

    def to_json(self) -> dict:
        return {
            "order": [v + 1 for v in self.order],
            "prefix_ranks": list(self.prefix_ranks),
            "width": self.width,
        }


def width_profile(f: SparsePoly, order: Sequence[int] | None = None, ranks: RankTable | None = None) -> WidthReport:
    """Prefix ranks and width of the optimal program for ``f`` in ``order``."""
    _require_nonzero(f)
    order = check_order(range(f.n) if order is None else order, f.n)
    ranks = ranks or RankTable(f)
    prefix = []
    mask = 0
    for v in order[:-1]:
        mask |= 1 << v
        prefix.append(ranks(mask))
    return WidthReport(order, tuple(prefix), max([1, *prefix]))


def min_width(f: SparsePoly, cap: int | None = None, ranks: RankTable | None = None) -> tuple[int, tuple[int, ...]]:
    """Smallest width over all variable orders, with a witness order."""
    _require_nonzero(f)
    ranks = ranks or RankTable(f)
    width, order = min_arrangement(f.n, ranks, floor=1, cap=cap, what="minimum-width search")
    return width, tuple(order)


def exhaustive_widths(f: SparsePoly, ranks: RankTable | None = None, cap: int = 8) -> dict[tuple, int]:
    """Width in every one of the ``n!`` orders."""
    _require_nonzero(f)
    check_cap(f.n, cap, "exhaustive order enumeration")
    ranks = ranks or RankTable(f)
    return {p: prefix_cost(p, ranks, floor=1) for p in permutations(range(f.n))}


def greedy_order(f: SparsePoly, ranks: RankTable | None = None) -> tuple[tuple[int, ...], int]:
    """Append the variable giving the smallest next prefix rank; no optimality claim."""
    _require_nonzero(f)
    ranks = ranks or RankTable(f)
    order: list[int] = []
    mask = 0
    left = set(range(f.n))
    while len(left) > 1:
        v = min(sorted(left), key=lambda u: ranks(mask | 1 << u))
        order.append(v)
        left.remove(v)
        mask |= 1 << v
    order.extend(left)
    return tuple(order), prefix_cost(order, ranks, floor=1)


# read-once oblivious ABPs

@dataclass
class Roabp:
    """Layered program; ``layers[i][j][k]`` is the coefficient list of the label
    from vertex ``j`` of layer ``i`` to vertex ``k`` of layer ``i + 1``, a
    polynomial in variable ``order[i]``."""

    n: int
    field: Field
    order: tuple
    layers: list = dc_field(default_factory=list)

    @property
    def widths(self) -> list[int]:
        return [len(self.layers[0])] + [len(layer[0]) for layer in self.layers]

    @property
    def width(self) -> int:
        return max(self.widths)

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.n:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.n}")
        reduce = self.field.reduce
        vec: list[Scalar] = [1]
        for var, layer in zip(self.order, self.layers):
            x = point[var]
            out = [0] * len(layer[0])
            for j, row in enumerate(layer):
                a = vec[j]
                if not a:
                    continue
                for k, label in enumerate(row):
                    if label:
                        out[k] += a * _horner(label, x)
            vec = [reduce(v) for v in out]
        return vec[0]

    def expand(self) -> SparsePoly:
        """The polynomial computed by the program, as a sum over all paths."""
        zero = (0,) * self.n
        vec: list[dict] = [{zero: 1}]
        for var, layer in zip(self.order, self.layers):
            out: list[dict] = [{} for _ in layer[0]]
            for j, row in enumerate(layer):
                for k, label in enumerate(row):
                    target = out[k]
                    for e, c in enumerate(label):
                        if not c:
                            continue
                        for exps, v in vec[j].items():
                            key = exps[:var] + (exps[var] + e,) + exps[var + 1:]
                            target[key] = target.get(key, 0) + v * c
            vec = [{k: v for k, v in ((k, self.field.reduce(v)) for k, v in d.items()) if v} for d in out]
        return SparsePoly(self.n, self.field, vec[0])

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "n": self.n,
            "field": self.field.to_json(),
            "order": [v + 1 for v in self.order],
            "widths": self.widths,
            "width": self.width,
            "layers": [[[[fmt(c) for c in label] for label in row] for row in layer] for layer in self.layers],
        }

    @classmethod
    def from_json(cls, data: Any) -> "Roabp":
        try:
            field = Field.from_json(data["field"])
            order = tuple(v - 1 for v in data["order"])
            layers = [
                [[[field.parse(c) for c in label] for label in row] for row in layer] for layer in data["layers"]
            ]
            n = data["n"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad ROABP JSON: {exc}") from None
        check_order(order, n)
        return cls(n, field, order, layers)


def _horner(coeffs: Sequence[Scalar], x: Scalar) -> Scalar:
    acc: Scalar = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _cut_basis(f: SparsePoly, prefix: frozenset) -> list[tuple[Monomial, dict]]:
    """RREF basis of the row space of the Nisan matrix for ``prefix``.

    Keys are full-length exponent tuples with the prefix coordinates zeroed,
    and columns are ordered lexicographically.
    """
    rows: dict[Monomial, dict] = {}
    for e, c in f.terms.items():
        r = tuple(a if i in prefix else 0 for i, a in enumerate(e))
        col = tuple(0 if i in prefix else a for i, a in enumerate(e))
        rows.setdefault(r, {})[col] = c
    cols = sorted({k for row in rows.values() for k in row})
    return rref((rows[r] for r in sorted(rows)), cols, f.field)


def synthesize_roabp(f: SparsePoly, order: Sequence[int] | None = None) -> Roabp:
    """Minimum-width program for ``f`` in ``order`` built from successive rank factorizations.

    At cut ``i`` the suffix polynomials ``Q_k`` form the RREF basis of the
    row space of the Nisan matrix for the first ``i`` variables.  Splitting a
    cut-``i`` basis polynomial by powers of the next variable leaves pieces in
    the cut-``i+1`` row space; their coordinates, read off at the pivot
    columns, are the coefficients of the edge labels.
    """
    _require_nonzero(f)
    order = check_order(range(f.n) if order is None else order, f.n)
    field = f.field
    current: list[dict] = [dict(f.terms)]
    layers = []
    for i, var in enumerate(order):
        prefix = frozenset(order[: i + 1])
        basis = _cut_basis(f, prefix)
        pivots = [pc for pc, _ in basis]
        layer = []
        for q in current:
            pieces: dict[int, dict] = {}
            for exps, c in q.items():
                e = exps[var]
                key = exps[:var] + (0,) + exps[var + 1:]
                pieces.setdefault(e, {})[key] = c
            row = []
            for pc in pivots:
                deg = max(pieces) if pieces else 0
                label = [pieces[e].get(pc, 0) if e in pieces else 0 for e in range(deg + 1)]
                while label and not label[-1]:
                    label.pop()
                row.append(label)
            layer.append(row)
        layers.append(layer)
        current = [row for _, row in basis]
    return Roabp(f.n, field, order, layers)


def evaluate_roabp(R: Roabp, point: Sequence[Scalar]) -> Scalar:
    return R.evaluate(point)


def verify_roabp(R: Roabp, f: SparsePoly) -> bool:
    """True when the program expands to exactly ``f``."""
    return R.n == f.n and R.field == f.field and R.expand() == f
