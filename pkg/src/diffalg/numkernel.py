"""Exact scalars, half-integer indices, falling factorials and q-series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

Scalar = Fraction


def scalar(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


def scalar_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class HalfInt:
    """An element of Z or Z + 1/2, stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        v = scalar(x) * 2
        if v.denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return cls(int(v))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def is_half(self) -> bool:
        return self.doubled % 2 != 0

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled + other.doubled)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled - other.doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    def __str__(self) -> str:
        return scalar_str(self.value)


def falling(mu, m: int) -> Fraction:
    """Falling factorial mu (mu-1) ... (mu-m+1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    mu = scalar(mu)
    out = Fraction(1)
    for s in range(m):
        out *= mu - s
    return out


@lru_cache(maxsize=None)
def _gbinom_int(m: int, k: int) -> int:
    num = 1
    for s in range(k):
        num *= m - s
    return num // factorial(k)


def gbinom(m, k: int) -> Fraction:
    """Generalized binomial <m>_k / k!, valid for any rational top."""
    if k < 0:
        return Fraction(0)
    if isinstance(m, int):
        return Fraction(_gbinom_int(m, k))
    m = scalar(m)
    if m.denominator == 1:
        return Fraction(_gbinom_int(int(m), k))
    return falling(m, k) / factorial(k)


@lru_cache(maxsize=None)
def im_coeff(iota: Fraction, r1: int, r2: int) -> Fraction:
    """Central correction coefficient Im_{r1,r2}(iota).

    Read off from the product of the two explicit sums
    -[sum_{r>=1} C(iota, r) (x^{r-1} + ... + y^{r-1}) z^{-r}] * sum_s C(-iota, s) (x/z)^s
    as the coefficient of x^r1 y^r2 z^(-r1-r2-1).
    """
    iota = scalar(iota)
    total = Fraction(0)
    for s in range(r1 + 1):
        # x^(r1-s) y^r2 comes from the r = r1 - s + r2 + 1 summand of the first factor
        total += gbinom(iota, r1 - s + r2 + 1) * gbinom(-iota, s)
    return -total


class QSeries:
    """Power series in q truncated at a fixed order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = [scalar(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return qseries_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, QSeries) and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def ints(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("series has non-integer coefficients")
            out.append(int(c))
        return out

    def __repr__(self) -> str:
        return f"QSeries({[scalar_str(c) for c in self.coeffs]})"


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    order = min(a.order, b.order)
    out = [Fraction(0)] * (order + 1)
    for i, ca in enumerate(a.coeffs[: order + 1]):
        if ca:
            for j in range(order + 1 - i):
                out[i + j] += ca * b.coeffs[j]
    return QSeries(out, order)


def qseries_expand_product(factors: Iterable[tuple[int, int]], order: int) -> QSeries:
    """Expand prod (1 - q^e)^(-d) up to q^order."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    for e, d in factors:
        if e <= 0:
            raise ValueError("exponents must be positive")
        if d == 0 or e > order:
            continue
        # multiply by (1 - q^e)^(-d) = sum_k C(d+k-1, k) q^(e k)
        new = [0] * (order + 1)
        for i, c in enumerate(coeffs):
            if not c:
                continue
            k = 0
            while i + e * k <= order:
                new[i + e * k] += c * _gbinom_int(d + k - 1, k)
                k += 1
        coeffs = new
    return QSeries(coeffs, order)
