"""Exact arithmetic over the rationals and prime fields.

Field elements are plain Python values so that hot loops (polynomial
products, elimination) run on native ints:

* rationals are ``int`` when integral and ``fractions.Fraction`` otherwise;
* residues mod ``p`` are ``int`` in ``[0, p)``.

A :class:`Field` knows how to canonicalize, parse and print its elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .errors import FieldError, ParseError

Scalar = Union[int, Fraction]

MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % k for k in range(3, math.isqrt(p) + 1, 2))


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field of order ``p``."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise FieldError(f"modulus {self.p!r} is not prime")
            if self.p >= MAX_PRIME:
                raise FieldError(f"modulus {self.p} exceeds 2^31")

    @property
    def kind(self) -> str:
        return "rational" if self.p is None else "prime"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    # canonical forms

    def reduce(self, x: Scalar) -> Scalar:
        """Canonical representative of an int/Fraction computed with plain ops."""
        if self.p is None:
            if type(x) is Fraction and x.denominator == 1:
                return x.numerator
            return x
        if type(x) is Fraction:
            den = x.denominator % self.p
            if den == 0:
                raise FieldError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return x % self.p

    def contains(self, x: Any) -> bool:
        if isinstance(x, bool):
            return False
        if self.p is None:
            return type(x) is int or (type(x) is Fraction and x.denominator != 1)
        return type(x) is int and 0 <= x < self.p

    def check(self, x: Any) -> Scalar:
        if not self.contains(x):
            raise FieldError(f"{x!r} is not a canonical element of {self}")
        return x

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def coerce(self, x: int | Fraction) -> Scalar:
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise FieldError(f"cannot coerce {x!r} into {self}")
        return self.reduce(x)

    # arithmetic

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a + b)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a * b)

    def neg(self, a: Scalar) -> Scalar:
        return self.reduce(-a)

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        if self.p is None:
            return self.reduce(1 / Fraction(a))
        return pow(a, -1, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def pow(self, a: Scalar, e: int) -> Scalar:
        if self.p is None:
            return self.reduce(Fraction(a) ** e) if e < 0 else a**e
        return pow(a, e, self.p)

    # text forms

    def format(self, a: Scalar) -> str | int:
        """JSON form: decimal string for rationals, bare residue for ``GF(p)``."""
        if self.p is None:
            return str(a)
        return a

    def parse(self, text: Any) -> Scalar:
        if self.p is not None:
            if isinstance(text, bool):
                raise ParseError(f"bad residue {text!r}")
            if isinstance(text, int):
                return text % self.p
            if isinstance(text, str):
                try:
                    return int(text.strip()) % self.p
                except ValueError:
                    raise ParseError(f"bad residue {text!r}") from None
            raise ParseError(f"bad residue {text!r}")
        if isinstance(text, bool):
            raise ParseError(f"bad rational {text!r}")
        if isinstance(text, int):
            return text
        if not isinstance(text, str):
            raise ParseError(f"bad rational {text!r}")
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {text!r}") from None
        return self.reduce(value)

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, data: Any) -> "Field":
        if not isinstance(data, dict) or "kind" not in data:
            raise ParseError(f"bad field spec {data!r}")
        if data["kind"] == "rational":
            return cls()
        if data["kind"] == "prime":
            p = data.get("p")
            if not isinstance(p, int) or isinstance(p, bool):
                raise ParseError(f"prime field needs integer 'p', got {p!r}")
            return cls(p)
        raise ParseError(f"unknown field kind {data['kind']!r}")

    @classmethod
    def from_name(cls, name: str) -> "Field":
        """``'rational'``/``'Q'`` or a prime given as ``'2'``, ``'p=2'``, ``'GF(2)'``."""
        key = name.strip().lower()
        if key in ("rational", "q", "qq", "rationals"):
            return cls()
        for prefix in ("p=", "gf(", "f"):
            if key.startswith(prefix):
                key = key[len(prefix):]
        key = key.rstrip(")")
        try:
            return cls(int(key))
        except ValueError:
            raise ParseError(f"unknown field {name!r}") from None


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


_OPS = ("add", "sub", "mul", "div")


def scalar_arith(a: Scalar, b: Scalar, op: str, field: Field) -> Scalar:
    """Apply ``op`` in ``field`` after checking both operands are canonical elements."""
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}; expected one of {_OPS}")
    field.check(a)
    field.check(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("division by zero")
    return getattr(field, op)(a, b)


def base_digits(m: int, p: int) -> list[int]:
    """Little-endian base-``p`` digits of ``m`` (``[0]`` for zero)."""
    digits = []
    while m:
        m, r = divmod(m, p)
        digits.append(r)
    return digits or [0]


def lucas_binom(m: int, n: int, p: int) -> int:
    """Binomial ``C(m, n) mod p`` as a product of digit-wise binomials."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if m < 0 or n < 0:
        raise ValueError("lucas_binom needs nonnegative arguments")
    result = 1
    while m or n:
        m, mk = divmod(m, p)
        n, nk = divmod(n, p)
        if nk > mk:
            return 0
        result = result * math.comb(mk, nk) % p
    return result
