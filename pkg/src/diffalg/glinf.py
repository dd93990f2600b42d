"""Infinite matrices over half-integer indices and their central extensions.

All indices are stored doubled: the half-integer l is the odd integer 2l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .numkernel import HalfInt, scalar

IKey = tuple[int, int]  # doubled (l, k) of E_{l,k}


def H(l2: int) -> int:
    """Step function on doubled half-integers."""
    return 1 if l2 > 0 else 0


class InfMat:
    """Finite-support infinite matrix sum c E_{l,k} plus kappa0 times the center."""

    __slots__ = ("terms", "kappa0")

    def __init__(self, terms: Mapping[IKey, object] | None = None, kappa0=0):
        out: dict[IKey, Fraction] = {}
        for (l2, k2), c in (terms or {}).items():
            if l2 % 2 == 0 or k2 % 2 == 0:
                raise ValueError("indices must be half-integers (odd when doubled)")
            c = scalar(c)
            if c:
                out[(l2, k2)] = out.get((l2, k2), Fraction(0)) + c
        self.terms = {k: v for k, v in out.items() if v}
        self.kappa0 = scalar(kappa0)

    @classmethod
    def unit(cls, l, k, c=1) -> "InfMat":
        """E_{l,k}; l and k may be HalfInt, Fraction-like or doubled via unit2."""
        return cls({(HalfInt.of(l).doubled, HalfInt.of(k).doubled): c})

    @classmethod
    def unit2(cls, l2: int, k2: int, c=1) -> "InfMat":
        return cls({(l2, k2): c})

    def __add__(self, other: "InfMat") -> "InfMat":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return InfMat(out, self.kappa0 + other.kappa0)

    def scale(self, c) -> "InfMat":
        c = scalar(c)
        return InfMat({k: v * c for k, v in self.terms.items()}, self.kappa0 * c)

    def __neg__(self) -> "InfMat":
        return self.scale(-1)

    def __sub__(self, other: "InfMat") -> "InfMat":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, InfMat) and self.terms == other.terms and self.kappa0 == other.kappa0

    def is_zero(self) -> bool:
        return not self.terms and self.kappa0 == 0

    def __repr__(self) -> str:
        parts = [f"{c}*E({Fraction(l, 2)},{Fraction(k, 2)})" for (l, k), c in sorted(self.terms.items())]
        if self.kappa0:
            parts.append(f"{self.kappa0}*K0")
        return "InfMat(" + (" + ".join(parts) if parts else "0") + ")"


def imul(a: InfMat, b: InfMat) -> InfMat:
    out: dict[IKey, Fraction] = {}
    by_row: dict[int, list] = {}
    for (l2, k2), c in b.terms.items():
        by_row.setdefault(l2, []).append((k2, c))
    for (l1, k1), c1 in a.terms.items():
        for k2, c2 in by_row.get(-k1, ()):
            out[(l1, k2)] = out.get((l1, k2), Fraction(0)) + c1 * c2
    return InfMat(out)


def div_qr(l2: int, n: int) -> tuple[int, int]:
    """Division l = q n + r of an integer l with remainder r in 1..n."""
    q, r = divmod(l2, n)
    if r == 0:
        q, r = q - 1, n
    return q, r


def _rem_of_half(l2: int, n: int) -> int:
    """(l + 1/2)_R for a doubled half-integer l."""
    return div_qr((l2 + 1) // 2, n)[1]


class Cocycle:
    """Two-cocycle given by a pair of step-like functions phi1, phi2.

    Its value on (E_{l1,l2}, E_{k1,k2}) is
    delta(l1+k2) delta(l2+k1) [phi1(l1) phi2(l2) - phi1(k1) phi2(k2)].
    """

    name = "cocycle"

    def phi1(self, l2: int) -> int:
        raise NotImplementedError

    def phi2(self, l2: int) -> int:
        raise NotImplementedError

    def value(self, l1: int, l2: int, k1: int, k2: int) -> int:
        if l1 + k2 != 0 or l2 + k1 != 0:
            return 0
        return self.phi1(l1) * self.phi2(l2) - self.phi1(k1) * self.phi2(k2)

    def diagonal_shift(self, a2: int) -> int:
        """phi1(a) - H(a): how far this cocycle is from the standard one on E_{a,-a}.

        When phi2(-a) = 1 - phi1(a) for all a the cocycle equals the standard
        cocycle plus the coboundary of this shift.
        """
        return self.phi1(a2) - H(a2)


class StandardCocycle(Cocycle):
    name = "standard"

    def phi1(self, l2: int) -> int:
        return H(l2)

    def phi2(self, l2: int) -> int:
        return H(l2)


@dataclass
class AlphaCocycle(Cocycle):
    """Cocycle shifted by an integer iota0 and a vector of integers m (length n)."""

    iota0: int
    m: Sequence[int]
    name: str = "alpha"

    @property
    def n(self) -> int:
        return len(self.m)

    def phi1(self, l2: int) -> int:
        mr = self.m[_rem_of_half(l2, self.n) - 1]
        return H(l2 + 2 * (mr - self.iota0) * self.n)

    def phi2(self, l2: int) -> int:
        mr = self.m[_rem_of_half(-l2, self.n) - 1]
        return H(l2 + 2 * (self.iota0 - mr) * self.n)


def _beta_default_h1(l2: int, iota: int, ell: Sequence[int]) -> int:
    n = len(ell)
    lr = ell[_rem_of_half(l2, n) - 1]
    if 2 * n * iota < l2 < 0:
        return 1
    return 1 if l2 > 0 and l2 > 2 * (iota - lr) * n else 0


def _beta_default_h2(l2: int, iota: int, ell: Sequence[int]) -> int:
    n = len(ell)
    lr = ell[_rem_of_half(-l2, n) - 1]
    if l2 > 0 and l2 > -2 * iota * n:
        return 1
    return 1 if 2 * (lr - iota) * n < l2 < 0 else 0


def _beta_or_h1(l2: int, iota: int, ell: Sequence[int]) -> int:
    n = len(ell)
    lr = ell[_rem_of_half(l2, n) - 1]
    return 1 if (2 * n * iota < l2 < 0) or l2 > 0 or l2 > 2 * (iota - lr) * n else 0


def _beta_or_h2(l2: int, iota: int, ell: Sequence[int]) -> int:
    n = len(ell)
    lr = ell[_rem_of_half(-l2, n) - 1]
    return 1 if l2 > 0 or l2 > -2 * iota * n or 2 * (lr - iota) * n < l2 < 0 else 0


# Readings of the step functions for the beta cocycle.  "default" reads the
# comma as a conjunction with a second threshold; "or" reads it as a disjunction.
BETA_READINGS: dict[str, tuple[Callable, Callable]] = {
    "default": (_beta_default_h1, _beta_default_h2),
    "or": (_beta_or_h1, _beta_or_h2),
}


@dataclass
class BetaCocycle(Cocycle):
    """Cocycle shifted by an integer iota and the column shifts ell (length n)."""

    iota: int
    ell: Sequence[int]
    reading: str = "default"
    name: str = "beta"

    def phi1(self, l2: int) -> int:
        return BETA_READINGS[self.reading][0](l2, self.iota, self.ell)

    def phi2(self, l2: int) -> int:
        return BETA_READINGS[self.reading][1](l2, self.iota, self.ell)


STANDARD = StandardCocycle()


def ibracket(a: InfMat, b: InfMat, cocycle: Cocycle | None = None) -> InfMat:
    cocycle = cocycle or STANDARD
    out = imul(a, b) - imul(b, a)
    kappa = Fraction(0)
    for (l1, l2), c1 in a.terms.items():
        for (k1, k2), c2 in b.terms.items():
            if l1 + k2 == 0 and l2 + k1 == 0:
                kappa += c1 * c2 * cocycle.value(l1, l2, k1, k2)
    return InfMat(out.terms, kappa)


def in_skew(a: InfMat, kind: str) -> bool:
    t = a.terms
    get = lambda l, k: t.get((l, k), Fraction(0))
    for (l, k), c in t.items():
        if kind == "o_d":
            if c != -get(k, l):
                return False
        elif kind == "o_b":
            # c(l,k) = -c(k-1, l+1), indices doubled
            if c != -get(k - 2, l + 2):
                return False
        elif kind == "sp":
            sign = 1 if l * k < 0 else -1
            if c != -sign * get(k, l):
                return False
        else:
            raise ValueError(f"unknown skew kind {kind!r}")
    return True


def from_matrix_units(n: int, i: int, j: int, L2: int, K2: int) -> IKey:
    """E_ij(L + 1/2, K - 1/2) in the half-integer matrix scheme, inputs doubled.

    L2 = 2L + 1 and K2 = 2K - 1 are the doubled arguments; the result is the
    doubled pair (L n + i - 1/2, K n - j + 1/2).
    """
    L = (L2 - 1) // 2
    K = (K2 + 1) // 2
    return (2 * (L * n + i) - 1, 2 * (K * n - j) + 1)


def to_matrix_units(n: int, l2: int, k2: int) -> tuple[int, int, int, int]:
    """Inverse of from_matrix_units."""
    L, i = div_qr((l2 + 1) // 2, n)
    Kq, jr = div_qr((-k2 + 1) // 2, n)
    # k = K n - j + 1/2 with j in 1..n, so -k + 1/2 = -K n + j
    j = jr
    K = -Kq
    return i, j, 2 * L + 1, 2 * K - 1


def matrix_unit_product(a, b) -> list:
    """Product in the matrix-valued two-index algebra.

    Elements are dicts {(i, j, L2, K2): c}, meaning c E_ij(L+1/2, K-1/2).  The
    rule is E_ij(x1, y1) E_pq(x2, y2) = delta_{jp} delta_{y1 + x2, 0} E_iq(x1, y2).
    """
    out: dict = {}
    for (i, j, x1, y1), c1 in a.items():
        for (p, q, x2, y2), c2 in b.items():
            if j == p and y1 + x2 == 0:
                key = (i, q, x1, y2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def matrix_unit_cocycle(i1, j1, x1, y1, i2, j2, x2, y2) -> int:
    """Standard cocycle written on the two-index matrix algebra."""
    if not (j1 == i2 and i1 == j2 and y1 + x2 == 0 and x1 + y2 == 0):
        return 0
    return H(x1) * H(y1) - H(x2) * H(y2)


@dataclass
class WeightFn:
    """Linear functional on the Cartan part: values on kappa0 and E_{l,-l}."""

    kappa0_val: Fraction
    diag: dict[int, Fraction] = field(default_factory=dict)  # doubled l -> value

    def __post_init__(self):
        self.kappa0_val = scalar(self.kappa0_val)
        self.diag = {int(k): scalar(v) for k, v in self.diag.items() if scalar(v)}

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightFn) and self.kappa0_val == other.kappa0_val and self.diag == other.diag


def weight_eval(lam: WeightFn, h: InfMat) -> Fraction:
    total = h.kappa0 * lam.kappa0_val
    for (l2, k2), c in h.terms.items():
        if l2 != -k2:
            raise ValueError("input is not in the Cartan part")
        total += c * lam.diag.get(l2, Fraction(0))
    return total


def supp(lam: WeightFn) -> set[int]:
    return {l for l, v in lam.diag.items() if v}


def gamma_window(m: int, r: int) -> set[int]:
    """Doubled index set {3/2 - r, ..., (2m+1)/2 - r}."""
    return {3 - 2 * r + 2 * s for s in range(m)}


def in_gamma(lam: WeightFn, m: int) -> bool:
    if lam.kappa0_val != -m:
        return False
    for s2, v in lam.diag.items():
        val = -v if s2 > 0 else v
        if val.denominator != 1 or val < 0:
            return False
    s = supp(lam)
    return any(s <= gamma_window(m, r) for r in range(1, m + 2))


def random_infmat(rng, bound2: int = 9, nterms: int = 3) -> InfMat:
    odd = [x for x in range(-bound2, bound2 + 1) if x % 2]
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        terms[(rng.choice(odd), rng.choice(odd))] = Fraction(rng.randint(-3, 3) or 1)
    return InfMat(terms)
