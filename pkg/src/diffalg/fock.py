"""Fermionic and bosonic Fock spaces with the infinite-matrix action.

Variables carry negative half-integer indices, stored doubled.  Fermionic
monomials are pairs (bars, thetas) of strictly increasing tuples and denote
(prod of bar factors) * (prod of theta factors), each block in increasing index
order.  Bosonic monomials are pairs (xbars, xs) of sorted tuples of
(index, exponent).

Vectors are plain dicts monomial -> Fraction; FockVector wraps one together
with its space for the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .glinf import H, InfMat, WeightFn
from .numkernel import scalar

Vec = dict


def vadd(acc: dict, v: dict, c=1) -> dict:
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vscale(v: dict, c) -> dict:
    return {k: x * c for k, x in v.items() if x * c}


def vclean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


# ---------------------------------------------------------------- fermions

FMono = tuple[tuple[int, ...], tuple[int, ...]]
FERM_ONE: FMono = ((), ())


def _insert(block: tuple[int, ...], idx: int) -> tuple[tuple[int, ...], int] | None:
    """Insert idx into a sorted block; returns (block, number of smaller entries)."""
    if idx in block:
        return None
    pos = sum(1 for b in block if b < idx)
    return block[:pos] + (idx,) + block[pos:], pos


def _remove(block: tuple[int, ...], idx: int) -> tuple[tuple[int, ...], int] | None:
    if idx not in block:
        return None
    pos = block.index(idx)
    return block[:pos] + block[pos + 1 :], pos


def f_mul_theta(l2: int, mono: FMono):
    bars, ths = mono
    r = _insert(ths, l2)
    if r is None:
        return None
    new, pos = r
    return (bars, new), (-1) ** (len(bars) + pos)


def f_mul_bar(l2: int, mono: FMono):
    bars, ths = mono
    r = _insert(bars, l2)
    if r is None:
        return None
    new, pos = r
    return (new, ths), (-1) ** pos


def f_d_theta(l2: int, mono: FMono):
    bars, ths = mono
    r = _remove(ths, l2)
    if r is None:
        return None
    new, pos = r
    return (bars, new), (-1) ** (len(bars) + pos)


def f_d_bar(l2: int, mono: FMono):
    bars, ths = mono
    r = _remove(bars, l2)
    if r is None:
        return None
    new, pos = r
    return (new, ths), (-1) ** pos


def theta_op(l2: int, mono: FMono):
    """theta_l: multiplication for l < 0, derivative in bar_{-l} for l > 0."""
    return f_mul_theta(l2, mono) if l2 < 0 else f_d_bar(-l2, mono)


def bar_op(l2: int, mono: FMono):
    """bar theta_l: multiplication for l < 0, derivative in theta_{-l} for l > 0."""
    return f_mul_bar(l2, mono) if l2 < 0 else f_d_theta(-l2, mono)


def _compose(ops, mono):
    """Apply single-variable operators right to left; returns (mono, sign) or None."""
    sign = 1
    for op, idx in reversed(ops):
        r = op(idx, mono)
        if r is None:
            return None
        mono, s = r
        sign *= s
    return mono, sign


@lru_cache(maxsize=1 << 18)
def ferm_act_mono(l2: int, k2: int, mono: FMono):
    if l2 > 0 and l2 == -k2:
        r = _compose([(theta_op, k2), (bar_op, l2)], mono)
        return None if r is None else (r[0], -r[1])
    return _compose([(bar_op, l2), (theta_op, k2)], mono)


class FermionicFock:
    """The fermionic Fock space; the center acts by +1."""

    tag = "fermionic"
    kappa0 = Fraction(1)

    def act(self, l2: int, k2: int, v: dict) -> dict:
        out: dict = {}
        for mono, c in v.items():
            r = ferm_act_mono(l2, k2, mono)
            if r is not None:
                m, s = r
                vadd(out, {m: c * s})
        return out

    def index_sets(self, v: dict) -> tuple[set[int], set[int]]:
        """Sets (K, J): E_{a,b} can act nonzero only if a<0 or -a in K, and b<0 or -b in J."""
        K, J = set(), set()
        for bars, ths in v:
            K.update(ths)
            J.update(bars)
        return K, J

    def extra_pairs(self) -> set[tuple[int, int]]:
        return set()

    def charge_of(self, mono: FMono) -> int:
        return len(mono[1]) - len(mono[0])

    def degree_of(self, mono: FMono) -> Fraction:
        return Fraction(-sum(mono[0]) - sum(mono[1]), 2)

    def one(self) -> dict:
        return {FERM_ONE: Fraction(1)}


# ---------------------------------------------------------------- bosons

BMono = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]
BOSE_ONE: BMono = ((), ())


def _bump(block, idx: int, delta: int):
    d = dict(block)
    e = d.get(idx, 0)
    if e + delta < 0:
        return None, 0
    d[idx] = e + delta
    if d[idx] == 0:
        del d[idx]
    return tuple(sorted(d.items())), e


def b_mul(which: int, l2: int, mono: BMono):
    parts = list(mono)
    parts[which], _ = _bump(parts[which], l2, 1)
    return tuple(parts), 1


def b_d(which: int, l2: int, mono: BMono):
    parts = list(mono)
    new, e = _bump(parts[which], l2, -1)
    if new is None:
        return None
    parts[which] = new
    return tuple(parts), e


XBAR, X = 0, 1


@lru_cache(maxsize=1 << 18)
def bose_act_mono(l2: int, k2: int, mono: BMono):
    """Returns (mono, coefficient) or None."""
    if l2 < 0 and k2 < 0:
        m, _ = b_mul(X, k2, mono)
        m, _ = b_mul(XBAR, l2, m)
        return m, 1
    if l2 < 0 < k2:
        r = b_d(XBAR, -k2, mono)
        if r is None:
            return None
        m, e = r
        m, _ = b_mul(XBAR, l2, m)
        return m, e
    if k2 < 0 < l2:
        r = b_d(X, -l2, mono)
        if r is None:
            return None
        m, e = r
        m, _ = b_mul(X, k2, m)
        return m, -e
    r = b_d(XBAR, -k2, mono)
    if r is None:
        return None
    m, e1 = r
    r = b_d(X, -l2, m)
    if r is None:
        return None
    m, e2 = r
    return m, -e1 * e2


class BosonicFock:
    """The bosonic Fock space; the center acts by -1."""

    tag = "bosonic"
    kappa0 = Fraction(-1)

    def act(self, l2: int, k2: int, v: dict) -> dict:
        out: dict = {}
        for mono, c in v.items():
            r = bose_act_mono(l2, k2, mono)
            if r is not None:
                m, s = r
                if s:
                    vadd(out, {m: c * s})
        return out

    def index_sets(self, v: dict) -> tuple[set[int], set[int]]:
        K, J = set(), set()
        for xbars, xs in v:
            K.update(i for i, _ in xs)
            J.update(i for i, _ in xbars)
        return K, J

    def extra_pairs(self) -> set[tuple[int, int]]:
        return set()

    def charge_of(self, mono: BMono) -> int:
        return sum(e for _, e in mono[1]) - sum(e for _, e in mono[0])

    def degree_of(self, mono: BMono) -> Fraction:
        return Fraction(-sum(i * e for i, e in mono[0]) - sum(i * e for i, e in mono[1]), 2)

    def one(self) -> dict:
        return {BOSE_ONE: Fraction(1)}


FERMIONIC = FermionicFock()
BOSONIC = BosonicFock()


def space_of(tag: str):
    if tag == "fermionic":
        return FERMIONIC
    if tag == "bosonic":
        return BOSONIC
    raise ValueError(f"unknown space {tag!r}")


@dataclass(frozen=True)
class FockVector:
    space: str
    terms: tuple  # sorted tuple of (mono, coeff)

    @classmethod
    def of(cls, space: str, terms: dict) -> "FockVector":
        return cls(space, tuple(sorted((k, v) for k, v in terms.items() if v)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def module(self):
        return space_of(self.space)

    def __add__(self, other: "FockVector") -> "FockVector":
        return FockVector.of(self.space, vadd(self.as_dict(), other.as_dict()))

    def scale(self, c) -> "FockVector":
        return FockVector.of(self.space, vscale(self.as_dict(), scalar(c)))

    def is_zero(self) -> bool:
        return not self.terms


def ferm_monomial(thetas: Iterable = (), bars: Iterable = ()) -> FockVector:
    """The product (bars in the given order) * (thetas in the given order) on 1, indices doubled."""
    v = {FERM_ONE: Fraction(1)}
    for l2 in reversed(list(thetas)):
        v = _mul_vec(f_mul_theta, l2, v)
    for l2 in reversed(list(bars)):
        v = _mul_vec(f_mul_bar, l2, v)
    return FockVector.of("fermionic", v)


def _mul_vec(op, l2, v):
    out = {}
    for m, c in v.items():
        r = op(l2, m)
        if r is not None:
            vadd(out, {r[0]: c * r[1]})
    return out


def bose_monomial(xs: dict | None = None, xbars: dict | None = None) -> FockVector:
    mono = (tuple(sorted((xbars or {}).items())), tuple(sorted((xs or {}).items())))
    return FockVector.of("bosonic", {mono: Fraction(1)})


def ferm_act(l2: int, k2: int, v: FockVector) -> FockVector:
    if v.space != "fermionic":
        raise ValueError("vector is not fermionic")
    return FockVector.of("fermionic", FERMIONIC.act(l2, k2, v.as_dict()))


def bose_act(l2: int, k2: int, v: FockVector) -> FockVector:
    if v.space != "bosonic":
        raise ValueError("vector is not bosonic")
    return FockVector.of("bosonic", BOSONIC.act(l2, k2, v.as_dict()))


def act_infmat(module, x: InfMat, v: dict) -> dict:
    out: dict = {}
    for (l2, k2), c in x.terms.items():
        vadd(out, module.act(l2, k2, v), c)
    if x.kappa0:
        vadd(out, v, x.kappa0 * module.kappa0)
    return out


def charge(v: FockVector) -> int:
    mod = v.module
    charges = {mod.charge_of(m) for m, _ in v.terms}
    if len(charges) > 1:
        raise ValueError("vector is not homogeneous in charge")
    return charges.pop() if charges else 0


def hw_vector(space: str, k: int) -> FockVector:
    """Highest-weight vector of charge k."""
    if space == "fermionic":
        idx = [-(2 * r + 1) for r in range(abs(k))]
        return ferm_monomial(thetas=idx) if k >= 0 else ferm_monomial(bars=idx)
    if space == "bosonic":
        return bose_monomial(xs={-1: k}) if k > 0 else bose_monomial(xbars={-1: -k}) if k < 0 else bose_monomial()
    raise ValueError(f"unknown space {space!r}")


def hw_weight(space: str, k: int) -> WeightFn:
    if space == "fermionic":
        if k >= 0:
            return WeightFn(1, {2 * r + 1: -1 for r in range(k)})
        return WeightFn(1, {-(2 * r + 1): 1 for r in range(-k)})
    if space == "bosonic":
        if k >= 0:
            return WeightFn(-1, {1: -k})
        return WeightFn(-1, {-1: -k})
    raise ValueError(f"unknown space {space!r}")


def translation_terms(v: dict, module) -> list[int]:
    """Doubled p with E_{-1-p, p} possibly nonzero on v."""
    K, J = module.index_sets(v)
    cands = set()
    # both indices negative: -1 - p < 0 and p < 0 means p = -1/2 only
    cands.add(-1)
    for t in K:  # a = -1 - p > 0 with -a = t
        cands.add(t - 2)
    for u in J:  # b = p > 0 with -b = u
        cands.add(-u)
    return sorted(c for c in cands if c % 2)


def translation(v: FockVector) -> FockVector:
    """Apply the derivation sum_p (p + 1/2) E_{-1-p, p}."""
    mod = v.module
    d = v.as_dict()
    out: dict = {}
    for p2 in translation_terms(d, mod):
        c = Fraction(p2 + 1, 2)
        if c:
            vadd(out, mod.act(-2 - p2, p2, d), c)
    return FockVector.of(v.space, out)


# ---------------------------------------------------------------- tensor powers


class TensorFock:
    """Diagonal action on the chi-fold tensor power of a Fock space."""

    def __init__(self, base, chi: int):
        if chi < 1:
            raise ValueError("tensor power must be positive")
        self.base = base
        self.chi = chi
        self.tag = f"{base.tag}^{chi}"
        self.kappa0 = base.kappa0 * chi

    def act(self, l2: int, k2: int, v: dict) -> dict:
        out: dict = {}
        for mons, c in v.items():
            for pos, m in enumerate(mons):
                r = self.base.act(l2, k2, {m: Fraction(1)})
                for m2, c2 in r.items():
                    key = mons[:pos] + (m2,) + mons[pos + 1 :]
                    vadd(out, {key: c * c2})
        return out

    def index_sets(self, v: dict):
        K, J = set(), set()
        for mons in v:
            for m in mons:
                k, j = self.base.index_sets({m: 1})
                K |= k
                J |= j
        return K, J

    def extra_pairs(self):
        return set()

    def charge_of(self, mons) -> int:
        return sum(self.base.charge_of(m) for m in mons)

    def one(self) -> dict:
        one = next(iter(self.base.one()))
        return {(one,) * self.chi: Fraction(1)}


def tensor_act(l2: int, k2: int, w: dict, base, chi: int) -> dict:
    return TensorFock(base, chi).act(l2, k2, w)


def tensor_from_factors(factors: list[FockVector]) -> dict:
    """Tensor product of vectors, as a dict on tuples of monomials."""
    out = {(): Fraction(1)}
    for f in factors:
        new = {}
        for key, c in out.items():
            for m, c2 in f.terms:
                new[key + (m,)] = c * c2
        out = new
    return out


# ---------------------------------------------------------------- twisted modules


class TwistedModule:
    """Same space and action, with E_{a,-a} shifted by -kappa0 * shift(a).

    If a cocycle differs from the standard one by the coboundary of f on the
    diagonal, this twist turns a module for the standard extension into one
    for the new extension.
    """

    def __init__(self, base, shift, support: Iterable[int]):
        self.base = base
        self.shift = shift
        self.support = {a for a in support if shift(a)}
        self.kappa0 = base.kappa0
        self.tag = f"{base.tag}~"

    def act(self, l2: int, k2: int, v: dict) -> dict:
        out = self.base.act(l2, k2, v)
        if l2 == -k2 and l2 in self.support:
            vadd(out, v, -self.kappa0 * self.shift(l2))
        return out

    def index_sets(self, v: dict):
        return self.base.index_sets(v)

    def extra_pairs(self):
        return {(a, -a) for a in self.support} | self.base.extra_pairs()

    def charge_of(self, m):
        return self.base.charge_of(m)

    def one(self):
        return self.base.one()


def twisted_by_cocycle(base, cocycle, bound2: int = 400) -> TwistedModule:
    """Twist base so that it represents the extension defined by cocycle.

    The shift is phi1 - H, which must have finite support; bound2 limits the search.
    """
    support = [a for a in range(-bound2 - 1, bound2 + 2, 2) if cocycle.diagonal_shift(a)]
    if support and (max(support) >= bound2 - 1 or min(support) <= -bound2 + 1):
        raise ValueError("cocycle shift does not have small finite support")
    return TwistedModule(base, cocycle.diagonal_shift, support)


# ---------------------------------------------------------------- induced module


class InducedModule:
    """Module generated by 1 with E_{a,b} for a, b not both negative killing 1.

    Vectors are polynomials in commuting symbols y_{j,k} = E_{j,k} (j, k < 0),
    stored as sorted tuples of doubled pairs.  The center acts by chi.
    """

    def __init__(self, chi):
        self.kappa0 = scalar(chi)
        self.tag = "induced"
        self._cache: dict = {}

    def one(self) -> dict:
        return {(): Fraction(1)}

    def act(self, l2: int, k2: int, v: dict) -> dict:
        out: dict = {}
        for mono, c in v.items():
            vadd(out, self._act_mono(l2, k2, mono), c)
        return out

    def _act_mono(self, l2: int, k2: int, mono: tuple) -> dict:
        if l2 < 0 and k2 < 0:
            return {tuple(sorted(mono + ((l2, k2),))): Fraction(1)}
        if not mono:
            return {}
        key = (l2, k2, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        (j2, q2), rest = mono[0], mono[1:]
        out: dict = {}
        # y * (E rest)
        for m, c in self._act_mono(l2, k2, rest).items():
            vadd(out, {tuple(sorted(m + ((j2, q2),))): c})
        # [E_{l,k}, E_{j,q}] rest
        if k2 + j2 == 0:
            vadd(out, self._act_mono(l2, q2, rest))
        if l2 + q2 == 0:
            vadd(out, self._act_mono(j2, k2, rest), -1)
        if k2 + j2 == 0 and l2 + q2 == 0:
            cc = H(l2) * H(k2) - H(j2) * H(q2)
            if cc:
                vadd(out, {rest: self.kappa0 * cc})
        self._cache[key] = out
        return out

    def index_sets(self, v: dict):
        K, J = set(), set()
        for mono in v:
            for j2, q2 in mono:
                K.add(q2)
                J.add(j2)
        return K, J

    def extra_pairs(self):
        return set()

    def charge_of(self, mono) -> int:
        return 0
