"""Representations of the matrix differential-operator algebras on Fock-type modules.

Every operator here is a finite list of one-parameter families
    sum_L coeff(L) E_{a(L), b(L)}
with a and b affine in L (doubled), plus a central scalar.  On a given vector
only finitely many L act nonzero; those are found from the vector's variable
support, never guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .fock import FERMIONIC, vadd
from .matliealg import EllConfig, GlHatElem, gen_skew, ghbracket
from .numkernel import falling, gbinom, im_coeff, scalar


@dataclass
class Family:
    """sum over integer L in [lo, hi] of coeff(L) E_{A0 + A1 L, B0 + B1 L} (doubled)."""

    coeff: Callable[[int], Fraction]
    A0: int
    A1: int
    B0: int
    B1: int
    lo: int | None = None
    hi: int | None = None

    def _in_range(self, L: int) -> bool:
        return (self.lo is None or L >= self.lo) and (self.hi is None or L <= self.hi)

    def _negative_interval(self, c0: int, c1: int) -> tuple[float, float]:
        """Real interval of L where c0 + c1 L < 0."""
        if c1 == 0:
            return (-math.inf, math.inf) if c0 < 0 else (1.0, 0.0)
        x = Fraction(-c0, c1)
        if c1 > 0:
            return (-math.inf, math.ceil(x) - 1)
        return (math.floor(x) + 1, math.inf)

    def band(self) -> range:
        lo1, hi1 = self._negative_interval(self.A0, self.A1)
        lo2, hi2 = self._negative_interval(self.B0, self.B1)
        lo = max(lo1, lo2, -math.inf if self.lo is None else self.lo)
        hi = min(hi1, hi2, math.inf if self.hi is None else self.hi)
        if lo > hi:
            return range(0)
        if math.isinf(lo) or math.isinf(hi):
            raise ValueError("family has infinitely many creation terms")
        return range(int(lo), int(hi) + 1)

    def _solve(self, c0: int, c1: int, target: int) -> int | None:
        if c1 == 0:
            return None
        q, r = divmod(target - c0, c1)
        return q if r == 0 else None

    def window(self, K: set[int], J: set[int], extra: set[tuple[int, int]]) -> list[int]:
        cands = set(self.band())
        for t in K:  # a(L) = -t
            L = self._solve(self.A0, self.A1, -t)
            if L is not None:
                cands.add(L)
        for u in J:  # b(L) = -u
            L = self._solve(self.B0, self.B1, -u)
            if L is not None:
                cands.add(L)
        for a, b in extra:
            L = self._solve(self.A0, self.A1, a)
            if L is not None and self.B0 + self.B1 * L == b:
                cands.add(L)
        return sorted(L for L in cands if self._in_range(L))

    def apply(self, module, v: dict, pad: int = 0) -> dict:
        K, J = module.index_sets(v)
        Ls = self.window(K, J, module.extra_pairs())
        if pad and Ls:
            extra = range(min(Ls) - pad, max(Ls) + pad + 1)
            Ls = sorted(L for L in set(Ls) | set(extra) if self._in_range(L))
        out: dict = {}
        for L in Ls:
            c = self.coeff(L)
            if c:
                vadd(out, module.act(self.A0 + self.A1 * L, self.B0 + self.B1 * L, v), c)
        return out


@dataclass
class ModOperator:
    """A finite sum of families plus central * kappa0."""

    families: list[Family] = field(default_factory=list)
    central: Fraction = Fraction(0)

    def __add__(self, other: "ModOperator") -> "ModOperator":
        return ModOperator(self.families + other.families, self.central + other.central)

    def scale(self, c) -> "ModOperator":
        c = scalar(c)
        fams = [
            Family((lambda L, f=f.coeff: c * f(L)), f.A0, f.A1, f.B0, f.B1, f.lo, f.hi) for f in self.families
        ]
        return ModOperator(fams, self.central * c)

    def apply(self, module, v: dict, pad: int = 0) -> dict:
        out: dict = {}
        for fam in self.families:
            vadd(out, fam.apply(module, v, pad))
        if self.central:
            vadd(out, v, self.central * module.kappa0)
        return out


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


# ---------------------------------------------------------------- the generic map


def sigma_gl_op(i: int, j: int, m: int, r: int, iota, n: int) -> ModOperator:
    """Operator for t^m d^r E_ij: sum_L <iota - L>_r E_{(m-r-L)n+i-1/2, Ln-j+1/2} + central."""
    iota = scalar(iota)
    fam = Family(
        lambda L: falling(iota - L, r),
        A0=2 * ((m - r) * n + i) - 1,
        A1=-2 * n,
        B0=-2 * j + 1,
        B1=2 * n,
    )
    central = Fraction(0)
    if i == j and r == m:
        central = math.factorial(r) * im_coeff(iota, 0, r)
    return ModOperator([fam], central)


def sigma_reduced_op(i: int, j: int, m: int, r: int, iota: int, cfg: EllConfig) -> ModOperator:
    """Four-quadrant form for integer iota with column shifts, mode m of the series.

    The generating series in z is split by the sign of both matrix indices;
    the coefficient of z^(-m-1) in each quadrant is one family in k >= 0.
    """
    n = cfg.n
    li, lj = cfg.ell[i - 1], cfg.ell[j - 1]
    fams = []
    # Q1: <-k-1>_r E_{(l-iota)n+i-1/2, (k+iota+1)n-j+1/2} z^{-l-k-li-r-2}
    #     l = m - k - li - r - 1, k in [0, m - li - r - 1]
    top = m - li - r - 1
    if top >= 0:
        fams.append(
            Family(
                lambda k: falling(-k - 1, r),
                A0=2 * ((top - iota) * n + i) - 1,
                A1=-2 * n,
                B0=2 * ((iota + 1) * n - j) + 1,
                B1=2 * n,
                lo=0,
                hi=top,
            )
        )
    # Q2: <k+lj>_r E_{(l-iota)n+i-1/2, (iota-k)n-j+1/2} z^{-l+k+lj-li-r-1}
    #     l = m + k + lj - li - r, need l >= 0
    c = m + lj - li - r
    fams.append(
        Family(
            lambda k: falling(k + lj, r),
            A0=2 * ((c - iota) * n + i) - 1,
            A1=2 * n,
            B0=2 * (iota * n - j) + 1,
            B1=-2 * n,
            lo=max(0, -c),
        )
    )
    # Q3: <k+lj>_r E_{-(l+iota+1)n+i-1/2, (iota-k)n-j+1/2} z^{l+k+lj-r}
    #     l = r - lj - m - 1 - k, k in [0, r - lj - m - 1]
    top3 = r - lj - m - 1
    if top3 >= 0:
        fams.append(
            Family(
                lambda k: falling(k + lj, r),
                A0=2 * (-(top3 + iota + 1) * n + i) - 1,
                A1=2 * n,
                B0=2 * (iota * n - j) + 1,
                B1=-2 * n,
                lo=0,
                hi=top3,
            )
        )
    # Q4: <-k-1>_r E_{-(l+iota+1)n+i-1/2, (k+iota+1)n-j+1/2} z^{l-k-r-1}
    #     l = k + r - m, need l >= 0
    c4 = r - m
    fams.append(
        Family(
            lambda k: falling(-k - 1, r),
            A0=2 * (-(c4 + iota + 1) * n + i) - 1,
            A1=-2 * n,
            B0=2 * ((iota + 1) * n - j) + 1,
            B1=2 * n,
            lo=max(0, -c4),
        )
    )
    central = Fraction(0)
    if i == j and r == m:
        central = math.factorial(r) * im_coeff(Fraction(iota), 0, r)
    return ModOperator(fams, central)


def sigma_op(x: GlHatElem, iota, form: str = "generic", cfg: EllConfig | None = None) -> ModOperator:
    """Operator for a whole element; form is "generic" or "reduced" (integer iota)."""
    iota = scalar(iota)
    out = ModOperator([], x.kappa)
    for (i, j, m, r), c in sorted(x.terms.items()):
        if form == "generic":
            op = sigma_gl_op(i, j, m, r, iota, x.n)
        elif form == "reduced":
            if not _is_int(iota):
                raise ValueError("reduced form needs integer iota")
            op = sigma_reduced_op(i, j, m, r, int(iota), cfg or EllConfig.make(x.n))
        else:
            raise ValueError(f"unknown form {form!r}")
        out = out + op.scale(c)
    return out


def sigma_gl(i: int, j: int, m: int, r: int, iota, cfg: EllConfig, v: dict, module=FERMIONIC, form: str | None = None) -> dict:
    """Apply the image of t^m d^r E_ij to v.

    form defaults to "generic"; "reduced" selects the four-quadrant integer form.
    """
    form = form or "generic"
    x = GlHatElem.unit(cfg.n, i, j, m, r)
    return sigma_op(x, iota, form, cfg).apply(module, v)


def sigma_apply(x: GlHatElem, iota, module, v: dict, form: str = "generic", cfg: EllConfig | None = None, pad: int = 0) -> dict:
    return sigma_op(x, iota, form, cfg).apply(module, v, pad)


# ---------------------------------------------------------------- skew series


def skew_generic_op(i: int, j: int, m: int, r: int, iota, cfg: EllConfig) -> ModOperator:
    """Closed-form series for the generator t^(m+r) d^(r+l_j) E_ij - s (...) E_{j*,i*}, iota generic.

    sum_l [<l+lj+iota>_{r+lj} E_{(m+l)n+i-1/2, (-l-lj)n-j+1/2}
           - s <l-iota>_r <-m-l+li+iota-1>_{li} E_{-ln-j+1/2, (m+l-li)n+i-1/2}]
    + [(r+li)! Im_{0,r+li} - s r! li! Im_{r,li}] delta_{m,li} delta_ij kappa0.
    """
    iota = scalar(iota)
    n = cfg.n
    li, lj = cfg.ell[i - 1], cfg.ell[j - 1]
    s = cfg.skew_sign(i, j)
    f1 = Family(
        lambda l: falling(l + lj + iota, r + lj),
        A0=2 * (m * n + i) - 1,
        A1=2 * n,
        B0=2 * (-lj * n - j) + 1,
        B1=-2 * n,
    )
    f2 = Family(
        lambda l: -s * falling(l - iota, r) * falling(-m - l + li + iota - 1, li),
        A0=-2 * j + 1,
        A1=-2 * n,
        B0=2 * ((m - li) * n + i) - 1,
        B1=2 * n,
    )
    central = Fraction(0)
    if m == li and i == j:
        central = math.factorial(r + li) * im_coeff(iota, 0, r + li) - s * math.factorial(r) * math.factorial(li) * im_coeff(iota, r, li)
    return ModOperator([f1, f2], central)


def skew_generic_generator(i: int, j: int, m: int, r: int, cfg: EllConfig) -> GlHatElem:
    """The algebra element matched by skew_generic_op(i, j, m, r)."""
    return gen_skew(i, j, m + r, r, cfg)


def skew_half_op(i: int, j: int, k: int, r: int, iota, cfg: EllConfig, central: str = "corrected") -> ModOperator:
    """Closed-form series for half-integer twist, l_i = 2 m_i + eps.

    sum_l <l-m_j-eps+1/2>_r ((-1)^eps <-l+m_j+eps-3/2>_{lj} E_{(k+l)n+i-1/2, -ln-j+1/2}
           - s' <k+l+m_i+1/2>_{li} E_{(-l+eps-1)n-j+1/2, (k+l+1-eps)n+i-1/2})
    + ((r+li)! Im_{0,r+li} - r! li! Im_{r,li}) delta_{k+eps,0} delta_ij kappa0
    with s' = 1 for o and (-1)^(p(i)+p(j)) for sp.  The twist enters only
    through the Im coefficients and the cocycle of the target module.

    central="literal" keeps the central term at k + eps = 0 as written above.
    central="corrected" places it at k = 0 with the sign (-1)^eps on the
    second product, which is what the generic map produces.
    """
    iota = scalar(iota)
    n = cfg.n
    eps = cfg.eps
    li, lj = cfg.ell[i - 1], cfg.ell[j - 1]
    mi, mj = (li - eps) // 2, (lj - eps) // 2
    half = Fraction(1, 2)
    sp = -1 if cfg.variant == "sp" and (cfg.parity(i) + cfg.parity(j)) % 2 else 1
    e1 = -1 if eps else 1
    f1 = Family(
        lambda l: falling(l - mj - eps + half, r) * e1 * falling(-l + mj + eps - 3 * half, lj),
        A0=2 * (k * n + i) - 1,
        A1=2 * n,
        B0=-2 * j + 1,
        B1=-2 * n,
    )
    f2 = Family(
        lambda l: -sp * falling(l - mj - eps + half, r) * falling(k + l + mi + half, li),
        A0=2 * ((eps - 1) * n - j) + 1,
        A1=-2 * n,
        B0=2 * ((k + 1 - eps) * n + i) - 1,
        B1=2 * n,
    )
    if central not in ("literal", "corrected"):
        raise ValueError(f"unknown central reading {central!r}")
    c = Fraction(0)
    if central == "literal" and k + eps == 0 and i == j:
        c = math.factorial(r + li) * im_coeff(iota, 0, r + li) - math.factorial(r) * math.factorial(li) * im_coeff(iota, r, li)
    if central == "corrected" and k == 0 and i == j:
        c = math.factorial(r + li) * im_coeff(iota, 0, r + li) - e1 * math.factorial(r) * math.factorial(li) * im_coeff(iota, r, li)
    return ModOperator([f1, f2], c)


def skew_half_generator(i: int, j: int, k: int, r: int, cfg: EllConfig) -> GlHatElem:
    """Algebra element with t-exponent k + m_i + m_j + r + eps matched by skew_half_op."""
    eps = cfg.eps
    mi, mj = (cfg.ell[i - 1] - eps) // 2, (cfg.ell[j - 1] - eps) // 2
    return gen_skew(i, j, k + mi + mj + r + eps, r, cfg)


def skew_integer_op(i: int, j: int, m: int, r: int, iota, cfg: EllConfig) -> ModOperator:
    """Mode m (coefficient of z^(-m-1)) of the four-quadrant series for integer twist.

    Each quadrant over l, k >= 0 carries a pair of terms; fixing the z-power
    leaves one free summation variable k.  The twist enters only through the
    Im coefficients and the cocycle of the target module.
    """
    iota = scalar(iota)
    n = cfg.n
    li, lj = cfg.ell[i - 1], cfg.ell[j - 1]
    e = -1 if cfg.eps else 1
    sp = -1 if cfg.variant == "sp" and (cfg.parity(i) + cfg.parity(j)) % 2 else 1
    fams: list[Family] = []

    def add_pair(c1, c2, l_of_k, a1, b1, a2, b2, lo, hi):
        # a1(l, k), b1(l, k) etc. return doubled indices given integers l, k
        # l = l0 + lk * k; index forms are affine so sample at k = 0, 1
        l0, lk = l_of_k
        def affine(f):
            v0 = f(l0, 0)
            v1 = f(l0 + lk, 1)
            return v0, v1 - v0
        A0, A1 = affine(a1)
        B0, B1 = affine(b1)
        fams.append(Family(lambda k: c1(l0 + lk * k, k), A0, A1, B0, B1, lo, hi))
        A0, A1 = affine(a2)
        B0, B1 = affine(b2)
        fams.append(Family(lambda k: c2(l0 + lk * k, k), A0, A1, B0, B1, lo, hi))

    # Q1: z^{l+k-r}, l = r-m-1-k, 0 <= k <= r-m-1
    top = r - m - 1
    if top >= 0:
        add_pair(
            lambda l, k: falling(k, r) * e * falling(-k - 1, lj),
            lambda l, k: -sp * falling(k, r) * falling(-l - 1, li),
            (top, -1),
            lambda l, k: 2 * ((-l - 1) * n + i) - 1,
            lambda l, k: 2 * (-k * n - j) + 1,
            lambda l, k: 2 * (-k * n - j) + 1,
            lambda l, k: 2 * ((-l - 1) * n + i) - 1,
            0,
            top,
        )
    # Q2: z^{-l+k-li-r-1}, l = k+m-li-r >= 0
    c2 = m - li - r
    add_pair(
        lambda l, k: falling(k, r) * e * falling(-k - 1, lj),
        lambda l, k: -sp * falling(k, r) * falling(l + li, li),
        (c2, 1),
        lambda l, k: 2 * (l * n + i) - 1,
        lambda l, k: 2 * (-k * n - j) + 1,
        lambda l, k: 2 * (-k * n - j) + 1,
        lambda l, k: 2 * (l * n + i) - 1,
        max(0, -c2),
        None,
    )
    # Q3: z^{l-k-lj-r-1}, l = k+lj+r-m >= 0
    c3 = lj + r - m
    add_pair(
        lambda l, k: falling(-k - lj - 1, r) * e * falling(k + lj, lj),
        lambda l, k: -sp * falling(-k - lj - 1, r) * falling(-l - 1, li),
        (c3, 1),
        lambda l, k: 2 * (-(l + 1) * n + i) - 1,
        lambda l, k: 2 * ((k + 1) * n - j) + 1,
        lambda l, k: 2 * ((k + 1) * n - j) + 1,
        lambda l, k: 2 * (-(l + 1) * n + i) - 1,
        max(0, -c3),
        None,
    )
    # Q4: z^{-l-k-li-lj-r-2}, l = m-li-lj-r-1-k, 0 <= k <= that
    top4 = m - li - lj - r - 1
    if top4 >= 0:
        add_pair(
            lambda l, k: falling(-k - lj - 1, r) * e * falling(k + lj, lj),
            lambda l, k: -sp * falling(-k - lj - 1, r) * falling(l + li, li),
            (top4, -1),
            lambda l, k: 2 * (l * n + i) - 1,
            lambda l, k: 2 * ((k + 1) * n - j) + 1,
            lambda l, k: 2 * ((k + 1) * n - j) + 1,
            lambda l, k: 2 * (l * n + i) - 1,
            0,
            top4,
        )
    central = Fraction(0)
    if i == j and m == r + li:
        central = math.factorial(r + li) * im_coeff(iota, 0, r + li) - e * math.factorial(r) * math.factorial(li) * im_coeff(iota, r, li)
    return ModOperator(fams, central)


def skew_op(x: GlHatElem, series: str, iota, cfg: EllConfig, central: str = "corrected") -> ModOperator:
    """Closed-form skew series applied to an arbitrary o/sp element via its generator expansion.

    series is "generic", "half" or "integer"; each names which closed-form family
    supplies the image of a spanning generator.  central selects the
    reading of the half-integer central term.
    """
    coeffs = decompose_skew(x, cfg, series)
    out = ModOperator([], x.kappa)
    for (i, j, a, r), c in coeffs.items():
        if series == "generic":
            op = skew_generic_op(i, j, a, r, iota, cfg)
        elif series == "half":
            op = skew_half_op(i, j, a, r, iota, cfg, central)
        elif series == "integer":
            op = skew_integer_op(i, j, a, r, iota, cfg)
        else:
            raise ValueError(f"unknown series {series!r}")
        out = out + op.scale(c)
    return out


def series_generator(series: str, i: int, j: int, a: int, r: int, cfg: EllConfig) -> GlHatElem:
    if series == "generic":
        return skew_generic_generator(i, j, a, r, cfg)
    if series == "half":
        return skew_half_generator(i, j, a, r, cfg)
    if series == "integer":
        return gen_skew(i, j, a, r, cfg)
    raise ValueError(f"unknown series {series!r}")


def _series_param(series: str, i: int, j: int, m: int, r: int, cfg: EllConfig) -> int:
    """Series parameter a whose generator has t-exponent m."""
    if series == "generic":
        return m - r
    if series == "half":
        eps = cfg.eps
        mi, mj = (cfg.ell[i - 1] - eps) // 2, (cfg.ell[j - 1] - eps) // 2
        return m - mi - mj - r - eps
    return m


def decompose_skew(x: GlHatElem, cfg: EllConfig, series: str = "integer") -> dict:
    """Write the matrix part of an o/sp element as a combination of spanning generators.

    Candidate generators are those touching the entries of x; the expansion is
    found by exact elimination and checked.
    """
    cands = []
    seen = set()
    for (i, j, m, s) in x.terms:
        for (p, q) in ((i, j), (cfg.star(j), cfg.star(i))):
            lq = cfg.ell[q - 1]
            smax = max(ss for (_, _, _, ss) in x.terms) + 1
            for r in range(0, smax - lq + 1):
                a = _series_param(series, p, q, m, r, cfg)
                key = (p, q, a, r)
                if key not in seen:
                    seen.add(key)
                    cands.append(key)
    gens = [series_generator(series, *c, cfg) for c in cands]
    coords = sorted({k for g in gens for k in g.terms} | set(x.terms))
    cols = [[g.terms.get(k, Fraction(0)) for k in coords] for g in gens]
    target = [x.terms.get(k, Fraction(0)) for k in coords]
    sol = solve_exact(cols, target)
    if sol is None:
        raise ValueError("element is not in the span of the generators")
    return {c: v for c, v in zip(cands, sol) if v}


def solve_exact(cols: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """Find coefficients c with sum_k c_k cols[k] = target, or None."""
    nrows = len(target)
    ncols = len(cols)
    rows = [[cols[k][r] for k in range(ncols)] + [target[r]] for r in range(nrows)]
    piv_cols = []
    rank = 0
    for col in range(ncols):
        p = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        piv_cols.append(col)
        rank += 1
    if any(rows[r][-1] for r in range(rank, nrows)):
        return None
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(piv_cols):
        sol[col] = rows[r][-1]
    return sol


# ---------------------------------------------------------------- checks


@dataclass
class Report:
    check: str
    params: dict
    window: dict
    result: str
    instances: int = 0
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def as_json(self) -> dict:
        out = {"check": self.check, "params": self.params, "window": self.window, "result": self.result, "instances": self.instances}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.details:
            out["details"] = self.details
        return out


def _vec_json(v: dict) -> list:
    return [[repr(k), str(c)] for k, c in sorted(v.items(), key=lambda kv: repr(kv[0]))]


def hom_defect(x: GlHatElem, y: GlHatElem, iota, module, v: dict, form="generic", cfg=None) -> dict:
    """sigma([x,y]) v - (sigma(x) sigma(y) - sigma(y) sigma(x)) v."""
    sx = sigma_op(x, iota, form, cfg)
    sy = sigma_op(y, iota, form, cfg)
    sxy = sigma_op(ghbracket(x, y), iota, form, cfg)
    out = sxy.apply(module, v)
    vadd(out, sx.apply(module, sy.apply(module, v)), -1)
    vadd(out, sy.apply(module, sx.apply(module, v)), 1)
    return out


def check_hom(x: GlHatElem, y: GlHatElem, iota, cfg: EllConfig, probes: Sequence[dict], module=FERMIONIC, form: str = "generic") -> Report:
    iota = scalar(iota)
    for idx, v in enumerate(probes):
        d = hom_defect(x, y, iota, module, v, form, cfg)
        if d:
            return Report(
                "hom",
                {"iota": str(iota), "n": cfg.n, "ell": list(cfg.ell), "form": form},
                {"probes": len(probes)},
                "fail",
                idx + 1,
                {"x": repr(x), "y": repr(y), "probe": _vec_json(v), "defect": _vec_json(d)},
            )
    return Report("hom", {"iota": str(iota), "n": cfg.n, "ell": list(cfg.ell), "form": form}, {"probes": len(probes)}, "pass", len(probes))


def op_hom_defect(ox: ModOperator, oy: ModOperator, oxy: ModOperator, module, v: dict) -> dict:
    out = oxy.apply(module, v)
    vadd(out, ox.apply(module, oy.apply(module, v)), -1)
    vadd(out, oy.apply(module, ox.apply(module, v)), 1)
    return out


# ---------------------------------------------------------------- residue identity


def rhat_mode_op(i: int, j: int, r1: int, r2: int, P: int, iota, n: int) -> ModOperator:
    """Coefficient of z^(-P-1) in the image of E_ij[r1, r2].

    sum over half-integers p + q = P - r1 - r2 of
    C(-p-iota-1/2, r1) C(-q+iota-1/2, r2) E_ij(p, q) + delta_{P, r1+r2} Im_{r1,r2} tr kappa0,
    with E_ij(L+1/2, K-1/2) = E_{Ln+i-1/2, Kn-j+1/2}.
    """
    iota = scalar(iota)
    S = P - r1 - r2  # p + q = S, p = L + 1/2, q = K - 1/2, so L = S - K
    fam = Family(
        lambda K: gbinom(-(S - K) - 1 - iota, r1) * gbinom(-K + iota, r2),
        A0=2 * (S * n + i) - 1,
        A1=-2 * n,
        B0=-2 * j + 1,
        B1=2 * n,
    )
    central = im_coeff(iota, r1, r2) if (i == j and P == r1 + r2) else Fraction(0)
    return ModOperator([fam], central)
