"""Vacuum modules over the gl, o and sp algebras of matrix differential operators.

Vectors are dicts from PBW monomials (weakly increasing tuples of generator
ids) to Fractions; the empty tuple is the vacuum.  A generator id is
(degree, i, j, m, s) where (i, j, m, s) is the leading key t^m d^s E_ij.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .fock import vadd, vclean
from .matliealg import EllConfig, GlHatElem, gen_skew, ghbracket, in_subalgebra
from .numkernel import QSeries, qseries_expand_product

Gid = tuple[int, int, int, int, int]
Mono = tuple[Gid, ...]


@dataclass(frozen=True)
class PBWGen:
    gid: Gid
    elem: GlHatElem
    degree: int


def key_degree(cfg: EllConfig, key: tuple[int, int, int, int]) -> int:
    """Grading of t^m d^s E_ij: s - m for gl, s - m - l_j for o and sp."""
    i, j, m, s = key
    if cfg.variant == "gl":
        return s - m
    return s - m - cfg.ell[j - 1]


def elem_degrees(cfg: EllConfig, x: GlHatElem) -> set[int]:
    return {key_degree(cfg, k) for k in x.terms}


def _rref(rows: list[dict], columns: list) -> list[tuple[object, dict]]:
    """Reduced row echelon form with pivots taken at the first nonzero column."""
    rows = [dict(r) for r in rows if r]
    out: list[tuple[object, dict]] = []
    for col in columns:
        piv = next((r for r in rows if r.get(col)), None)
        if piv is None:
            continue
        rows.remove(piv)
        c = piv[col]
        piv = {k: v / c for k, v in piv.items()}
        for r in rows + [o for _, o in out]:
            f = r.get(col)
            if f:
                for k, v in piv.items():
                    r[k] = r.get(k, Fraction(0)) - f * v
                    if not r[k]:
                        del r[k]
        out.append((col, piv))
        rows = [r for r in rows if r]
    return out


def neg_basis(cfg: EllConfig, k: int) -> list[PBWGen]:
    """Deterministic basis of the degree-k part of the negative subalgebra."""
    if k < 1:
        raise ValueError("degree must be at least 1")
    n = cfg.n
    out: list[PBWGen] = []
    if cfg.variant == "gl":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                lj = cfg.ell[j - 1]
                for m in range(lj - k, 0):
                    s = m + k
                    out.append(PBWGen((k, i, j, m, s), GlHatElem.unit(n, i, j, m, s), k))
        return out
    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for r in range(k):
                g = gen_skew(i, j, r - k, r, cfg)
                if g.terms:
                    rows.append(g.terms)
    columns = sorted({key for row in rows for key in row})
    for piv, row in _rref(rows, columns):
        out.append(PBWGen((k,) + piv, GlHatElem(n, row), k))
    return out


def closed_character(cfg: EllConfig, order: int) -> QSeries:
    """Product formula for the vacuum character, truncated at q^order."""
    n = cfg.n
    factors = []
    if cfg.variant == "gl":
        for li in cfg.ell:
            for r in range(1, order + 1):
                if li + r <= order:
                    factors.append((li + r, r * n))
    else:
        e = cfg.eps if cfg.variant == "o" else 1 - cfg.eps
        sign = -1 if e else 1
        for r in range(1, order + 1):
            factors.append((r, n * r * (n - 1) // 2 + n * (r * e + sign * (r // 2))))
    return qseries_expand_product(factors, order)


def slice_dims(cfg: EllConfig, order: int) -> list[int]:
    """Sizes of the negative-part slices in degrees 1..order."""
    return [len(neg_basis(cfg, k)) for k in range(1, order + 1)]


def character(cfg: EllConfig, order: int) -> QSeries:
    """Count PBW monomials by total degree."""
    dims = slice_dims(cfg, order)
    return qseries_expand_product([(k, d) for k, d in enumerate(dims, start=1)], order)


def monomials_up_to(cfg: EllConfig, order: int) -> list[Mono]:
    """All PBW monomials of total degree at most order (explicit enumeration)."""
    gens = [g.gid for k in range(1, order + 1) for g in neg_basis(cfg, k)]
    gens.sort()
    out: list[Mono] = []

    def rec(start: int, budget: int, acc: Mono):
        out.append(acc)
        for t in range(start, len(gens)):
            g = gens[t]
            if g[0] <= budget:
                rec(t, budget - g[0], acc + (g,))

    rec(0, order, ())
    return out


class VacuumModule:
    """Module induced from the trivial module of the nonnegative part, with kappa acting by chi."""

    def __init__(self, cfg: EllConfig, chi):
        self.cfg = cfg
        self.chi = Fraction(chi)
        self._by_degree: dict[int, list[PBWGen]] = {}
        self._elem: dict[Gid, GlHatElem] = {}
        self._gen_cache: dict = {}
        self._plus_cache: dict = {}

    # -- generators ------------------------------------------------------
    def basis(self, k: int) -> list[PBWGen]:
        b = self._by_degree.get(k)
        if b is None:
            b = neg_basis(self.cfg, k)
            self._by_degree[k] = b
            for g in b:
                self._elem[g.gid] = g.elem
        return b

    def element(self, gid: Gid) -> GlHatElem:
        if gid not in self._elem:
            self.basis(gid[0])
        return self._elem[gid]

    def neg_coords(self, x: GlHatElem) -> dict[Gid, Fraction]:
        """Coordinates of a negative-part element in the generator basis."""
        out: dict[Gid, Fraction] = {}
        by_deg: dict[int, dict] = {}
        for key, c in x.terms.items():
            by_deg.setdefault(key_degree(self.cfg, key), {})[key] = c
        for k, part in by_deg.items():
            if k < 1:
                raise ValueError("negative-part element has a term of nonpositive degree")
            rebuilt: dict = {}
            for g in self.basis(k):
                c = part.get(g.gid[1:])
                if c:
                    out[g.gid] = c
                    for key, v in g.elem.terms.items():
                        rebuilt[key] = rebuilt.get(key, Fraction(0)) + c * v
            if {kk: v for kk, v in rebuilt.items() if v} != part:
                raise ValueError("element is not in the negative part of the subalgebra")
        return out

    # -- action ----------------------------------------------------------
    def vacuum(self) -> dict:
        return {(): Fraction(1)}

    def act(self, x: GlHatElem, v: dict, check: bool = False) -> dict:
        """Action of an algebra element on a vector."""
        if check and not in_subalgebra(x, self.cfg):
            raise ValueError("element is not in the subalgebra")
        out: dict = {}
        if x.kappa:
            vadd(out, v, x.kappa * self.chi)
        neg = {k: c for k, c in x.terms.items() if k[2] < 0}
        pos = {k: c for k, c in x.terms.items() if k[2] >= 0}
        if neg:
            for gid, c in self.neg_coords(GlHatElem(x.n, neg)).items():
                vadd(out, self.apply_gen(gid, v), c)
        if pos:
            if self.cfg.variant == "gl":
                for key, c in pos.items():
                    xp = GlHatElem(x.n, {key: 1})
                    for mono, cv in v.items():
                        vadd(out, self._plus_mono(xp, mono), c * cv)
            else:
                xp = GlHatElem(x.n, pos)
                for mono, cv in v.items():
                    vadd(out, self._plus_mono(xp, mono), cv)
        return vclean(out)

    def apply_gen(self, gid: Gid, v: dict) -> dict:
        out: dict = {}
        for mono, c in v.items():
            vadd(out, self._gen_mono(gid, mono), c)
        return out

    def _gen_mono(self, g: Gid, mono: Mono) -> dict:
        if not mono or g <= mono[0]:
            return {(g,) + mono: Fraction(1)}
        key = (g, mono)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        h, rest = mono[0], mono[1:]
        out = self.apply_gen(h, self._gen_mono(g, rest))
        br = ghbracket(self.element(g), self.element(h))
        vadd(out, self.act(br, {rest: Fraction(1)}))
        out = vclean(out)
        self._gen_cache[key] = out
        return out

    def _plus_mono(self, xp: GlHatElem, mono: Mono) -> dict:
        if not mono:
            return {}
        key = (xp, mono)
        hit = self._plus_cache.get(key)
        if hit is not None:
            return hit
        h, rest = mono[0], mono[1:]
        out = self.apply_gen(h, self._plus_mono(xp, rest))
        br = ghbracket(xp, self.element(h))
        vadd(out, self.act(br, {rest: Fraction(1)}))
        out = vclean(out)
        self._plus_cache[key] = out
        return out

    def product(self, elems: Sequence[GlHatElem], v: dict | None = None) -> dict:
        """x_1 x_2 ... x_s applied to v (default the vacuum)."""
        out = self.vacuum() if v is None else v
        for x in reversed(list(elems)):
            out = self.act(x, out)
        return out

    def degree_of(self, mono: Mono) -> int:
        return sum(g[0] for g in mono)

    def degrees(self, v: dict) -> set[int]:
        return {self.degree_of(m) for m in v}

    def gl_degree_bound(self, v: dict) -> int:
        """Largest s - m grading among the components of v (valid for every variant)."""
        best = 0
        for mono in v:
            tot = 0
            for g in mono:
                tot += max(s - m for (_, _, m, s) in self.element(g).terms)
            best = max(best, tot)
        return best


# ---------------------------------------------------------------- singular vectors


def singular_generator(cfg: EllConfig) -> GlHatElem:
    """Element whose (chi+1)-st power on the vacuum is the expected singular vector."""
    n = cfg.n
    v, e = cfg.variant, cfg.eps
    l1 = cfg.ell[0]
    if v == "gl" and n > 1 or (v == "o" and e == 1 or v == "sp" and e == 0) and n > 1:
        x = GlHatElem.unit(n, n, 1, -1, l1)
    elif (v == "o" and e == 0 or v == "sp" and e == 1) and n > 3:
        l2 = cfg.ell[1]
        x = GlHatElem(n, {(n - 1, 1, -1, l1): 1, (n, 2, -1, l2): -1})
    else:
        raise ValueError("no singular vector formula for this configuration")
    if not in_subalgebra(x, cfg):
        raise ValueError("singular generator is not in the subalgebra")
    return x


def singular_vector(mod: VacuumModule, chi: int, power: int | None = None) -> dict:
    """Power of the singular generator on the vacuum; the default power is chi + 1."""
    if chi < 0 or int(chi) != chi:
        raise ValueError("chi must be a nonnegative integer")
    x = singular_generator(mod.cfg)
    p = int(chi) + 1 if power is None else power
    return mod.product([x] * p)


def _annihilator_families(cfg: EllConfig, depth: int):
    """Test elements graded by s - m, which is additive under brackets for every variant.

    For o and sp an element mixes columns i and j*, so degree 0 needs
    l_i = l_j; pairs with l_i != l_j only enter through negative degrees.
    """
    n = cfg.n
    neg, lower, diag = [], [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            li, lj = cfg.ell[i - 1], cfg.ell[j - 1]
            top = max(li, lj) if cfg.variant != "gl" else lj
            for r in range(depth + 1):
                for d in range(1, depth + 1):
                    if cfg.variant == "gl":
                        x = GlHatElem.unit(n, i, j, lj + r + d, lj + r)
                    else:
                        x = gen_skew(i, j, r + top + d, r, cfg)
                    if x.terms:
                        neg.append((("deg", -d, i, j, r), x))
                if cfg.variant != "gl" and li != lj:
                    continue
                if cfg.variant == "gl":
                    x = GlHatElem.unit(n, i, j, lj + r, lj + r)
                else:
                    x = gen_skew(i, j, r + lj, r, cfg)
                if not x.terms:
                    continue
                if i > j:
                    lower.append((("lower", i, j, r), x))
                elif i == j:
                    diag.append((("diag", i, r), x))
    return neg, lower, diag


@dataclass
class SingularReport:
    passed: bool
    depth: int
    instances: int
    failures: list = field(default_factory=list)
    eigenvalues: dict = field(default_factory=dict)


def check_singular(mod: VacuumModule, v: dict, depth: int | None = None) -> SingularReport:
    """Negative-degree and strictly lower degree-0 elements kill v; diagonal ones scale it."""
    if not v:
        raise ValueError("zero vector")
    if depth is None:
        depth = mod.gl_degree_bound(v) + 1
    neg, lower, diag = _annihilator_families(mod.cfg, depth)
    failures = []
    eig = {}
    count = 0
    for label, x in neg + lower:
        count += 1
        w = mod.act(x, v)
        if w:
            failures.append(label)
    for label, x in diag:
        count += 1
        w = mod.act(x, v)
        mono, c = next(iter(v.items()))
        lam = w.get(mono, Fraction(0)) / c
        if vclean(vadd(dict(w), v, -lam)):
            failures.append(label)
        else:
            eig[label] = lam
    return SingularReport(not failures, depth, count, failures, eig)


# ---------------------------------------------------------------- transport to Fock-side modules


def nu_image(mod: VacuumModule, v: dict, target, iota=0) -> dict:
    """Send u|0> to u.1 in a module for the infinite-matrix algebra via the generic map."""
    from .repmap import sigma_apply

    out: dict = {}
    for mono, c in v.items():
        w = target.one()
        for gid in reversed(mono):
            w = sigma_apply(mod.element(gid), iota, target, w)
        vadd(out, w, c)
    return vclean(out)


def random_vac_vector(rng, mod: VacuumModule, max_degree: int = 3, nterms: int = 2) -> dict:
    out: dict = {}
    gens = [g.gid for k in range(1, max_degree + 1) for g in mod.basis(k)]
    for _ in range(nterms):
        length = rng.randint(0, 2)
        picks = tuple(sorted(rng.choice(gens) for _ in range(length)))
        if sum(g[0] for g in picks) <= max_degree:
            w = mod.vacuum()
            for g in reversed(picks):
                w = mod.apply_gen(g, w)
            vadd(out, w, rng.randint(1, 3))
    return vclean(out) or mod.vacuum()


def vec_from_pairs(pairs: Iterable[tuple[Mono, object]]) -> dict:
    out: dict = {}
    for mono, c in pairs:
        vadd(out, {tuple(sorted(mono)): Fraction(c)})
    return vclean(out)


__all__ = [
    "PBWGen",
    "VacuumModule",
    "character",
    "check_singular",
    "closed_character",
    "key_degree",
    "monomials_up_to",
    "neg_basis",
    "nu_image",
    "random_vac_vector",
    "singular_generator",
    "singular_vector",
    "slice_dims",
]
