"""Sparse multivariate polynomials over an exact field.

A polynomial in ``n`` variables is a map from exponent tuples of length
``n`` to nonzero field elements.  Variables are indexed ``0..n-1``
internally; the JSON format and the CLI print them as ``x1..xn``.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import DimensionError, FieldError, ParseError, ZeroPolynomialError
from .exactfield import QQ, Field, Scalar
from .linalg import solve_square

Monomial = tuple


class SparsePoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("n", "field", "_terms", "_hash")

    def __init__(self, n: int, field: Field, terms: Mapping[Monomial, Scalar] | None = None):
        if n < 1:
            raise DimensionError("a polynomial needs at least one variable")
        self.n = n
        self.field = field
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != n:
                raise DimensionError(f"exponent vector {exps} has length {len(exps)}, expected {n}")
            if c:
                clean[tuple(exps)] = c
        self._terms = clean
        self._hash = None

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.field, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"SparsePoly({self.n}, {self.field}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, reverse=True):
            c = self._terms[exps]
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        _check_compatible(self, other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            out[exps] = self.field.add(out.get(exps, 0), c)
        return SparsePoly(self.n, self.field, out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.n, self.field, {e: self.field.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        return poly_mul(self, other)

    def scale(self, c: Scalar) -> "SparsePoly":
        return SparsePoly(self.n, self.field, {e: self.field.mul(v, c) for e, v in self._terms.items()})

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.n:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.n}")
        total = 0
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * x**e
            total += term
        return self.field.reduce(total)

    def variables(self) -> set[int]:
        return {i for exps in self._terms for i, e in enumerate(exps) if e}


def _check_compatible(f: SparsePoly, g: SparsePoly) -> None:
    if f.field != g.field:
        raise FieldError(f"field mismatch: {f.field} vs {g.field}")
    if f.n != g.n:
        raise DimensionError(f"arity mismatch: {f.n} vs {g.n}")


def poly_from_terms(n: int, field: Field, terms: Iterable[tuple[Any, Sequence[int]]]) -> SparsePoly:
    """Build a polynomial from ``(coeff, exps)`` pairs, merging duplicates."""
    acc: dict[Monomial, Scalar] = {}
    for coeff, exps in terms:
        exps = tuple(exps)
        if len(exps) != n:
            raise DimensionError(f"exponent vector {list(exps)} has length {len(exps)}, expected {n}")
        if any((not isinstance(e, int)) or e < 0 for e in exps):
            raise DimensionError(f"exponents must be nonnegative integers: {list(exps)}")
        acc[exps] = acc.get(exps, 0) + field.coerce(coeff)
    return SparsePoly(n, field, {e: field.reduce(c) for e, c in acc.items()})


def constant(n: int, field: Field, c: Scalar = 1) -> SparsePoly:
    return SparsePoly(n, field, {(0,) * n: field.coerce(c)})


def monomial(n: int, field: Field, exps: Sequence[int], c: Scalar = 1) -> SparsePoly:
    return poly_from_terms(n, field, [(c, exps)])


def variable(n: int, field: Field, i: int) -> SparsePoly:
    exps = [0] * n
    exps[i] = 1
    return SparsePoly(n, field, {tuple(exps): 1})


def poly_mul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    _check_compatible(f, g)
    acc: dict[Monomial, Scalar] = {}
    get = acc.get
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            acc[key] = get(key, 0) + c1 * c2
    reduce = f.field.reduce
    return SparsePoly(f.n, f.field, {e: reduce(c) for e, c in acc.items()})


def poly_pow(f: SparsePoly, e: int) -> SparsePoly:
    result = constant(f.n, f.field)
    base = f
    while e:
        if e & 1:
            result = poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result


def substitute_powers(f: SparsePoly, k: int) -> SparsePoly:
    """``f(x1^k, ..., xn^k)``."""
    return SparsePoly(f.n, f.field, {tuple(a * k for a in e): c for e, c in f.terms.items()})


def tensor_power(f: SparsePoly, l: int) -> SparsePoly:
    """Product of ``f(x^{(d+1)^k})`` for ``k < l``, ``d`` the individual degree of ``f``.

    Exponents of distinct factors live in disjoint base-``(d+1)`` digits, so the
    product has exactly ``len(f) ** l`` terms.
    """
    if l < 1:
        raise ValueError("tensor power needs l >= 1")
    if f.is_zero():
        raise ZeroPolynomialError("tensor power of the zero polynomial")
    base = poly_degree_info(f)[1] + 1
    result = f
    for k in range(1, l):
        result = poly_mul(result, substitute_powers(f, base**k))
    return result


NEG_INF = float("-inf")


def poly_degree_info(f: SparsePoly) -> tuple[int | float, int | float, bool]:
    """``(total degree, individual degree, homogeneous)``; zero gives ``(-inf, -inf, True)``."""
    if f.is_zero():
        return NEG_INF, NEG_INF, True
    degrees = {sum(e) for e in f.terms}
    individual = max(max(e) for e in f.terms)
    return max(degrees), individual, len(degrees) == 1


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class AffineMap:
    """The substitution ``x -> A x + b`` with ``A`` invertible."""

    __slots__ = ("field", "A", "b", "_inverse")

    def __init__(self, A: Sequence[Sequence[Any]], b: Sequence[Any] | None = None, field: Field = QQ):
        n = len(A)
        if n == 0 or any(len(row) != n for row in A):
            raise DimensionError("A must be a nonempty square matrix")
        b = [0] * n if b is None else list(b)
        if len(b) != n:
            raise DimensionError(f"shift has length {len(b)}, expected {n}")
        self.field = field
        self.A = tuple(tuple(field.coerce(v) for v in row) for row in A)
        self.b = tuple(field.coerce(v) for v in b)
        inv = solve_square(self.A, field)
        if inv is None:
            raise DimensionError("A is singular")
        self._inverse = inv

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "AffineMap":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], None, field)

    def inverse(self) -> "AffineMap":
        inv = self._inverse
        f = self.field
        shift = [f.neg(f.reduce(sum(inv[i][j] * self.b[j] for j in range(self.n)))) for i in range(self.n)]
        return AffineMap(inv, shift, f)

    def is_perm_diag(self) -> bool:
        """True when every row of ``A`` has exactly one nonzero entry."""
        return all(sum(1 for v in row if v) == 1 for row in self.A)

    def row_supports(self) -> list[int]:
        return [sum(1 for v in row if v) for row in self.A]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineMap):
            return NotImplemented
        return (self.field, self.A, self.b) == (other.field, other.A, other.b)

    def __repr__(self) -> str:
        return f"AffineMap(A={[list(r) for r in self.A]}, b={list(self.b)}, field={self.field})"

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "field": self.field.to_json(),
            "A": [[fmt(v) for v in row] for row in self.A],
            "b": [fmt(v) for v in self.b],
        }

    @classmethod
    def from_json(cls, data: Any, field: Field | None = None) -> "AffineMap":
        if not isinstance(data, dict) or "A" not in data:
            raise ParseError("affine map JSON needs an 'A' matrix")
        if "field" in data:
            field = Field.from_json(data["field"])
        field = field or QQ
        A = [[field.parse(v) for v in row] for row in data["A"]]
        b = [field.parse(v) for v in data["b"]] if data.get("b") is not None else None
        return cls(A, b, field)


def _linear_form_power(row: Sequence[Scalar], shift: Scalar, e: int, field: Field) -> dict[Monomial, Scalar]:
    """Multinomial expansion of ``(row . x + shift) ** e`` as a term map."""
    n = len(row)
    support = [j for j in range(n) if row[j]]
    coeffs = [row[j] for j in support]
    if shift:
        coeffs.append(shift)
    out: dict[Monomial, Scalar] = {}
    fact = [math.factorial(k) for k in range(e + 1)]
    for alpha in _compositions(e, len(coeffs)):
        mult = fact[e]
        value = 1
        for a, c in zip(alpha, coeffs):
            mult //= fact[a]
            if a:
                value = value * c**a
        exps = [0] * n
        for j, a in zip(support, alpha):
            exps[j] = a
        key = tuple(exps)
        out[key] = out.get(key, 0) + mult * value
    return {k: v for k, v in ((k, field.reduce(v)) for k, v in out.items()) if v}


def affine_substitute(f: SparsePoly, amap: AffineMap) -> SparsePoly:
    """Expanded ``f(A x + b)``: variable ``x_i`` becomes ``sum_j A[i][j] x_j + b[i]``."""
    if amap.n != f.n:
        raise DimensionError(f"map acts on {amap.n} variables, polynomial has {f.n}")
    if amap.field != f.field:
        raise FieldError(f"field mismatch: {amap.field} vs {f.field}")
    field = f.field
    cache: dict[tuple[int, int], SparsePoly] = {}

    def power(i: int, e: int) -> SparsePoly:
        key = (i, e)
        if key not in cache:
            cache[key] = SparsePoly(f.n, field, _linear_form_power(amap.A[i], amap.b[i], e, field))
        return cache[key]

    acc: dict[Monomial, Scalar] = {}
    for exps, c in f.terms.items():
        term = constant(f.n, field, c)
        for i, e in enumerate(exps):
            if e:
                term = poly_mul(term, power(i, e))
        for k, v in term.terms.items():
            acc[k] = acc.get(k, 0) + v
    return SparsePoly(f.n, field, {k: field.reduce(v) for k, v in acc.items()})


# JSON I/O

def poly_to_json(f: SparsePoly, metadata: Mapping[str, Any] | None = None) -> dict:
    data: dict[str, Any] = {
        "n": f.n,
        "field": f.field.to_json(),
        "terms": [{"coeff": f.field.format(c), "exps": list(e)} for e, c in sorted(f.terms.items())],
    }
    if metadata is not None:
        data["metadata"] = dict(metadata)
    return data


def poly_from_json(data: Any) -> SparsePoly:
    if not isinstance(data, dict):
        raise ParseError("polynomial JSON must be an object")
    try:
        n = data["n"]
        field = Field.from_json(data.get("field", {"kind": "rational"}))
        raw_terms = data["terms"]
    except KeyError as exc:
        raise ParseError(f"polynomial JSON missing key {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"bad variable count {n!r}")
    if not isinstance(raw_terms, list):
        raise ParseError("'terms' must be a list")
    terms = []
    for k, t in enumerate(raw_terms):
        if not isinstance(t, dict) or "coeff" not in t or "exps" not in t:
            raise ParseError(f"term {k} needs 'coeff' and 'exps'")
        exps = t["exps"]
        if not isinstance(exps, list) or len(exps) != n:
            raise ParseError(f"term {k}: exponent vector length mismatch (expected {n})")
        if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps):
            raise ParseError(f"term {k}: exponents must be nonnegative integers")
        terms.append((field.parse(t["coeff"]), exps))
    return poly_from_terms(n, field, terms)


def dumps_poly(f: SparsePoly, metadata: Mapping[str, Any] | None = None) -> str:
    return json.dumps(poly_to_json(f, metadata), sort_keys=True)


def loads_poly(text: str) -> SparsePoly:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return poly_from_json(data)
