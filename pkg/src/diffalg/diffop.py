"""Differential operators on the circle in normal-ordered form."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .numkernel import falling, gbinom, scalar


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != 0}


class DiffOp:
    """Finite sum of c * t^m d^r, t-powers written to the left."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        out: dict[tuple[int, int], Fraction] = {}
        for (m, r), c in (terms or {}).items():
            if r < 0:
                raise ValueError("derivative order must be nonnegative")
            c = scalar(c)
            if c:
                out[(int(m), int(r))] = out.get((int(m), int(r)), Fraction(0)) + c
        self.terms = _clean(out)
        self._hash = None

    @classmethod
    def mono(cls, m: int, r: int, c=1) -> "DiffOp":
        return cls({(m, r): c})

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls()

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return DiffOp(out)

    def __neg__(self) -> "DiffOp":
        return DiffOp({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        c = scalar(c)
        return DiffOp({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        return dmul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "DiffOp(0)"
        parts = [f"{c}*t^{m}d^{r}" for (m, r), c in sorted(self.terms.items())]
        return "DiffOp(" + " + ".join(parts) + ")"


def mono_product(m1: int, r1: int, m2: int, r2: int) -> dict[tuple[int, int], Fraction]:
    """Normal form of t^m1 d^r1 t^m2 d^r2."""
    out = {}
    for s in range(r1 + 1):
        c = gbinom(r1, s) * falling(m2, s)
        if c:
            out[(m1 + m2 - s, r1 + r2 - s)] = c
    return out


def dmul(a: DiffOp, b: DiffOp) -> DiffOp:
    out: dict[tuple[int, int], Fraction] = {}
    for (m1, r1), c1 in a.terms.items():
        for (m2, r2), c2 in b.terms.items():
            for key, c in mono_product(m1, r1, m2, r2).items():
                out[key] = out.get(key, Fraction(0)) + c1 * c2 * c
    return DiffOp(out)


def adjoint_mono(m: int, r: int) -> dict[tuple[int, int], Fraction]:
    """Normal form of (-d)^r t^m."""
    sign = -1 if r % 2 else 1
    return {k: sign * v for k, v in mono_product(0, r, m, 0).items()}


def adjoint(a: DiffOp) -> DiffOp:
    out: dict[tuple[int, int], Fraction] = {}
    for (m, r), c in a.terms.items():
        for key, v in adjoint_mono(m, r).items():
            out[key] = out.get(key, Fraction(0)) + c * v
    return DiffOp(out)


class LaurentPoly:
    """Finite Laurent polynomial in t with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms = _clean({int(k): scalar(v) for k, v in (terms or {}).items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"LaurentPoly({dict(sorted(self.terms.items()))})"


def apply(a: DiffOp, p: LaurentPoly) -> LaurentPoly:
    """Let a act on p as a differential operator."""
    out: dict[int, Fraction] = {}
    for (m, r), c in a.terms.items():
        for k, v in p.terms.items():
            f = falling(k, r)
            if f:
                out[k - r + m] = out.get(k - r + m, Fraction(0)) + c * v * f
    return LaurentPoly(out)


def in_left_ideal(a: DiffOp, ell: int) -> bool:
    return all(r >= ell for (_, r) in a.terms)


def shift_right(a: DiffOp, ell: int) -> DiffOp:
    """Right multiplication by d^ell."""
    return DiffOp({(m, r + ell): c for (m, r), c in a.terms.items()})


def strip_right(a: DiffOp, ell: int) -> DiffOp:
    """Inverse of shift_right on the left ideal generated by d^ell."""
    if not in_left_ideal(a, ell):
        raise ValueError("operator is not right-divisible by the requested power")
    return DiffOp({(m, r - ell): c for (m, r), c in a.terms.items()})


def random_diffop(rng, mmax: int = 4, rmax: int = 4, nterms: int = 3) -> DiffOp:
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        terms[(rng.randint(-mmax, mmax), rng.randint(0, rmax))] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return DiffOp(terms)


def sum_ops(ops: Iterable[DiffOp]) -> DiffOp:
    out = DiffOp()
    for o in ops:
        out = out + o
    return out
