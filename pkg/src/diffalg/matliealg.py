"""Matrices of differential operators with a central element."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .diffop import DiffOp, adjoint_mono, mono_product
from .numkernel import gbinom, scalar

Key = tuple[int, int, int, int]  # (i, j, m, r) for t^m d^r E_ij


@dataclass(frozen=True)
class EllConfig:
    """Shape data: matrix size, column shifts, parity and variant."""

    n: int
    ell: tuple[int, ...]
    eps: int = 0
    variant: str = "gl"
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(int(x) for x in self.ell))
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.ell) != self.n:
            raise ValueError("ell must have length n")
        if any(x < 0 for x in self.ell):
            raise ValueError("ell entries must be nonnegative")
        if self.variant not in ("gl", "o", "sp"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        if self.variant in ("o", "sp"):
            for i in range(1, self.n + 1):
                if self.strict and self.ell[i - 1] % 2 != self.eps:
                    raise ValueError("ell entries must have the parity of eps")
                if self.ell[i - 1] != self.ell[self.star(i) - 1]:
                    raise ValueError("ell must be symmetric under i -> n+1-i")
        if self.variant == "sp" and self.n % 2:
            raise ValueError("sp needs even n")

    @classmethod
    def make(
        cls, n: int, ell: Sequence[int] | int | None = None, eps: int = 0, variant: str = "gl", strict: bool = True
    ) -> "EllConfig":
        """Build a config; strict=False skips the parity rule tying ell to eps."""
        if ell is None:
            ell = eps if variant in ("o", "sp") else 0
        if isinstance(ell, int):
            ell = (ell,) * n
        return cls(n, tuple(ell), eps, variant, strict)

    def star(self, i: int) -> int:
        return self.n + 1 - i

    def parity(self, i: int) -> int:
        return 0 if i <= self.n // 2 else 1

    def skew_sign(self, i: int, j: int) -> int:
        """Sign s with generators x - s * (adjoint part) for the o/sp variants."""
        e = self.eps
        if self.variant == "sp":
            e += self.parity(i) + self.parity(j)
        return -1 if e % 2 else 1


class GlHatElem:
    """Element sum c t^m d^r E_ij + kappa * K of the centrally extended algebra."""

    __slots__ = ("n", "terms", "kappa", "_hash")

    def __init__(self, n: int, terms: Mapping[Key, object] | None = None, kappa=0):
        out: dict[Key, Fraction] = {}
        for (i, j, m, r), c in (terms or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"matrix index ({i},{j}) out of range for n={n}")
            if r < 0:
                raise ValueError("derivative order must be nonnegative")
            c = scalar(c)
            if c:
                k = (int(i), int(j), int(m), int(r))
                out[k] = out.get(k, Fraction(0)) + c
        self.n = n
        self.terms = {k: v for k, v in out.items() if v}
        self.kappa = scalar(kappa)
        self._hash = None

    @classmethod
    def unit(cls, n: int, i: int, j: int, m: int = 0, r: int = 0, c=1) -> "GlHatElem":
        return cls(n, {(i, j, m, r): c})

    @classmethod
    def central(cls, n: int, c=1) -> "GlHatElem":
        return cls(n, {}, c)

    @classmethod
    def from_entry(cls, n: int, i: int, j: int, op: DiffOp) -> "GlHatElem":
        return cls(n, {(i, j, m, r): c for (m, r), c in op.terms.items()})

    def entry(self, i: int, j: int) -> DiffOp:
        return DiffOp({(m, r): c for (a, b, m, r), c in self.terms.items() if (a, b) == (i, j)})

    def _check(self, other: "GlHatElem"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "GlHatElem") -> "GlHatElem":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return GlHatElem(self.n, out, self.kappa + other.kappa)

    def __neg__(self) -> "GlHatElem":
        return self.scale(-1)

    def __sub__(self, other: "GlHatElem") -> "GlHatElem":
        return self + (-other)

    def scale(self, c) -> "GlHatElem":
        c = scalar(c)
        return GlHatElem(self.n, {k: v * c for k, v in self.terms.items()}, self.kappa * c)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GlHatElem)
            and self.n == other.n
            and self.terms == other.terms
            and self.kappa == other.kappa
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items()), self.kappa))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms and self.kappa == 0

    def matrix_part(self) -> "GlHatElem":
        return GlHatElem(self.n, self.terms, 0)

    def __repr__(self) -> str:
        parts = [f"{c}*t^{m}d^{r}E{i}{j}" for (i, j, m, r), c in sorted(self.terms.items())]
        if self.kappa:
            parts.append(f"{self.kappa}*K")
        return "GlHatElem(" + (" + ".join(parts) if parts else "0") + ")"


def basis_cocycle(i1: int, j1: int, m1: int, r1: int, i2: int, j2: int, m2: int, r2: int) -> Fraction:
    """Central coordinate of the bracket of two basis elements."""
    if i1 != j2 or j1 != i2 or r1 + r2 != m1 + m2:
        return Fraction(0)
    sign = -1 if r1 % 2 else 1
    return sign * factorial(r1) * factorial(r2) * gbinom(m1, r1 + r2 + 1)


def ghbracket(x: GlHatElem, y: GlHatElem) -> GlHatElem:
    x._check(y)
    out: dict[Key, Fraction] = {}
    kappa = Fraction(0)
    for (i1, j1, m1, r1), c1 in x.terms.items():
        for (i2, j2, m2, r2), c2 in y.terms.items():
            c = c1 * c2
            if j1 == i2:
                for (m, r), v in mono_product(m1, r1, m2, r2).items():
                    k = (i1, j2, m, r)
                    out[k] = out.get(k, Fraction(0)) + c * v
            if j2 == i1:
                for (m, r), v in mono_product(m2, r2, m1, r1).items():
                    k = (i2, j1, m, r)
                    out[k] = out.get(k, Fraction(0)) - c * v
            kappa += c * basis_cocycle(i1, j1, m1, r1, i2, j2, m2, r2)
    return GlHatElem(x.n, out, kappa)


def cocycle_positive_vanishes(x: GlHatElem, y: GlHatElem) -> bool:
    for (_, _, m, _) in list(x.terms) + list(y.terms):
        if m < 0:
            raise ValueError("inputs must have nonnegative t-powers")
    return ghbracket(x, y).kappa == 0


def _involution(x: GlHatElem, cfg: EllConfig, signed: bool) -> GlHatElem:
    if x.n != cfg.n:
        raise ValueError("configuration does not match element size")
    out: dict[Key, Fraction] = {}
    for (i, j, m, r), c in x.terms.items():
        s = -1 if signed and (cfg.parity(i) + cfg.parity(j)) % 2 else 1
        for (mm, rr), v in adjoint_mono(m, r).items():
            k = (cfg.star(j), cfg.star(i), mm, rr)
            out[k] = out.get(k, Fraction(0)) + s * c * v
    return GlHatElem(x.n, out, 0)


def tau_ast(x: GlHatElem, cfg: EllConfig) -> GlHatElem:
    """Anti-involution: adjoint on entries, E_ij -> E_{j*,i*}."""
    return _involution(x, cfg, signed=False)


def tau_dag(x: GlHatElem, cfg: EllConfig) -> GlHatElem:
    """Anti-involution with the extra parity sign (-1)^(p(i)+p(j))."""
    return _involution(x, cfg, signed=True)


def skew_image(x: GlHatElem, cfg: EllConfig) -> GlHatElem:
    """Image under the column-shifted involution fixing the o/sp subalgebras.

    An entry D d^{l_j} at (i, j) goes to s(i,j) * adjoint(D) d^{l_i} at (j*, i*),
    with s the sp parity sign (trivial for o).  The o/sp subalgebras are the
    elements with skew_image(x) = -(-1)^eps x.
    """
    out: dict[Key, Fraction] = {}
    for (i, j, m, r), c in x.terms.items():
        lj, li = cfg.ell[j - 1], cfg.ell[i - 1]
        if r < lj:
            raise ValueError("element is not in the column-shifted subalgebra")
        s = -1 if cfg.variant == "sp" and (cfg.parity(i) + cfg.parity(j)) % 2 else 1
        for (mm, rr), v in adjoint_mono(m, r - lj).items():
            k = (cfg.star(j), cfg.star(i), mm, rr + li)
            out[k] = out.get(k, Fraction(0)) + s * c * v
    return GlHatElem(x.n, out, 0)


def in_subalgebra(x: GlHatElem, cfg: EllConfig) -> bool:
    if x.n != cfg.n:
        return False
    if any(r < cfg.ell[j - 1] for (_, j, _, r) in x.terms):
        return False
    if cfg.variant == "gl":
        return True
    e = -1 if cfg.eps else 1
    return skew_image(x, cfg) == x.matrix_part().scale(-e)


def gen_skew(i: int, j: int, m: int, r: int, cfg: EllConfig) -> GlHatElem:
    """Spanning element t^m d^(r+l_j) E_ij - s * ((-d)^r t^m d^(l_i)) E_{j*,i*}."""
    if cfg.variant not in ("o", "sp"):
        raise ValueError("gen_skew needs variant o or sp")
    n = cfg.n
    terms: dict[Key, Fraction] = {(i, j, m, r + cfg.ell[j - 1]): Fraction(1)}
    s = cfg.skew_sign(i, j)
    li = cfg.ell[i - 1]
    for (mm, rr), v in adjoint_mono(m, r).items():
        k = (cfg.star(j), cfg.star(i), mm, rr + li)
        terms[k] = terms.get(k, Fraction(0)) - s * v
    return GlHatElem(n, terms)


def gl_degree(i: int, j: int, m: int, r: int) -> int:
    """Grading of t^m d^r E_ij on the full matrix algebra."""
    return r - m


def skew_degree(i: int, j: int, m: int, r: int, cfg: EllConfig) -> int:
    """Grading used for the o/sp vacuum modules: removes the column shift."""
    return r - m - cfg.ell[j - 1]


def random_gl_elem(rng, cfg: EllConfig, mmax: int = 3, rmax: int = 3, nterms: int = 3) -> GlHatElem:
    """Random element of the column-shifted gl subalgebra."""
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        i, j = rng.randint(1, cfg.n), rng.randint(1, cfg.n)
        r = cfg.ell[j - 1] + rng.randint(0, rmax)
        terms[(i, j, rng.randint(-mmax, mmax), r)] = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))
    return GlHatElem(cfg.n, terms, rng.randint(-2, 2))


def random_skew_elem(rng, cfg: EllConfig, mmax: int = 3, rmax: int = 2, nterms: int = 2) -> GlHatElem:
    out = GlHatElem(cfg.n)
    for _ in range(rng.randint(1, nterms)):
        g = gen_skew(rng.randint(1, cfg.n), rng.randint(1, cfg.n), rng.randint(-mmax, mmax), rng.randint(0, rmax), cfg)
        out = out + g.scale(Fraction(rng.randint(-3, 3) or 1))
    return out
