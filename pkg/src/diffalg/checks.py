"""Seeded verification suites shared by the command line and the test-suite.

Each suite returns a Report whose params echo the inputs and the seed, so a
failing instance can be replayed exactly.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from .diffop import LaurentPoly, apply, dmul, random_diffop
from .fock import BOSONIC, FERMIONIC, act_infmat, twisted_by_cocycle, vadd, vclean
from .glinf import STANDARD, AlphaCocycle, BetaCocycle, ibracket, random_infmat
from .matliealg import EllConfig, GlHatElem, ghbracket, random_gl_elem, random_skew_elem
from .numkernel import scalar, scalar_str
from .repmap import Report, _vec_json, check_hom, op_hom_defect, skew_op
from .vacuum import VacuumModule, check_singular, singular_vector
from .vertexcalc import (
    RHatElem,
    VertexOperators,
    bracket_equiv,
    conformal_axioms,
    generator_vector,
    locality,
    theorem22_modes,
    virasoro_check,
)


def _sum3(f, a, b, c):
    return f(f(a, b), c) + f(f(b, c), a) + f(f(c, a), b)


def random_ferm_probe(rng, top: int = 7) -> dict:
    pool = list(range(-top, 0, 2))
    bars = tuple(sorted(rng.sample(pool, rng.randint(0, 2))))
    ths = tuple(sorted(rng.sample(pool, rng.randint(0, 2))))
    return {(bars, ths): Fraction(1)}


def random_bose_probe(rng, top: int = 7) -> dict:
    pool = list(range(-top, 0, 2))
    xb = tuple(sorted({i: rng.randint(1, 2) for i in rng.sample(pool, rng.randint(0, 2))}.items()))
    xs = tuple(sorted({i: rng.randint(1, 2) for i in rng.sample(pool, rng.randint(0, 2))}.items()))
    return {(xb, xs): Fraction(1)}


def _fail(check, params, window, count, cx) -> Report:
    return Report(check, params, window, "fail", count, cx)


# ---------------------------------------------------------------- algebra-level suites


def suite_diffop(seed: int = 0, count: int = 200) -> Report:
    """Composition of differential operators against their action on Laurent polynomials."""
    rng = random.Random(seed)
    params = {"seed": seed}
    for k in range(count):
        a, b = random_diffop(rng), random_diffop(rng)
        p = LaurentPoly({e: rng.randint(-3, 3) for e in range(-3, 4)})
        if apply(dmul(a, b), p) != apply(a, apply(b, p)):
            return _fail("diffop", params, {"pairs": count}, k + 1, {"a": repr(a), "b": repr(b), "p": repr(p)})
    return Report("diffop", params, {"pairs": count}, "pass", count)


def suite_jacobi(seed: int = 0, count: int = 200, n_max: int = 3) -> Report:
    """Antisymmetry and the Jacobi identity for the centrally extended bracket."""
    rng = random.Random(seed)
    params = {"seed": seed, "n_max": n_max}
    for k in range(count):
        n = rng.randint(1, n_max)
        cfg = EllConfig.make(n, 0)
        x, y, z = (random_gl_elem(rng, cfg) for _ in range(3))
        if not (ghbracket(x, y) + ghbracket(y, x)).is_zero():
            return _fail("jacobi", params, {"triples": count}, k + 1, {"x": repr(x), "y": repr(y), "law": "antisymmetry"})
        if not _sum3(ghbracket, x, y, z).is_zero():
            return _fail("jacobi", params, {"triples": count}, k + 1, {"x": repr(x), "y": repr(y), "z": repr(z), "law": "jacobi"})
    return Report("jacobi", params, {"triples": count}, "pass", count)


COCYCLES: list[tuple[str, Callable]] = [
    ("standard", lambda: STANDARD),
    ("alpha(0,(0))", lambda: AlphaCocycle(0, (0,))),
    ("alpha(1,(1,1))", lambda: AlphaCocycle(1, (1, 1))),
    ("alpha(-1,(0,2))", lambda: AlphaCocycle(-1, (0, 2))),
    ("beta(1,(1,0))", lambda: BetaCocycle(1, (1, 0))),
    ("beta(-1,(0,2,1))", lambda: BetaCocycle(-1, (0, 2, 1))),
]


def suite_cocycles(seed: int = 0, count: int = 200) -> Report:
    """Jacobi identity of the infinite-matrix bracket for each cocycle."""
    params = {"seed": seed, "cocycles": [name for name, _ in COCYCLES]}
    total = 0
    for name, make in COCYCLES:
        rng = random.Random(seed)
        co = make()
        br = lambda a, b: ibracket(a, b, co)
        for _ in range(count):
            total += 1
            a, b, c = (random_infmat(rng) for _ in range(3))
            if not _sum3(br, a, b, c).is_zero():
                return _fail("cocycles", params, {"triples": count}, total, {"cocycle": name, "a": repr(a), "b": repr(b), "c": repr(c)})
    return Report("cocycles", params, {"triples": count}, "pass", total)


def suite_fock_rep(seed: int = 0, count: int = 100) -> Report:
    """Both Fock spaces carry representations, with the center acting by +1 and -1."""
    params = {"seed": seed}
    total = 0
    for module, probe in ((FERMIONIC, random_ferm_probe), (BOSONIC, random_bose_probe)):
        rng = random.Random(seed)
        for _ in range(count):
            total += 1
            a, b = random_infmat(rng, 9, 1), random_infmat(rng, 9, 1)
            v = probe(rng)
            lhs = act_infmat(module, ibracket(a, b), v)
            vadd(lhs, act_infmat(module, a, act_infmat(module, b, v)), -1)
            vadd(lhs, act_infmat(module, b, act_infmat(module, a, v)), 1)
            if vclean(lhs):
                return _fail("fock-rep", params, {"instances": count}, total, {"module": module.tag, "a": repr(a), "b": repr(b), "probe": _vec_json(v)})
    return Report("fock-rep", params, {"instances": count}, "pass", total)


# ---------------------------------------------------------------- representation suites


def hom_module(cfg: EllConfig, iota):
    """Module and series on which the closed-form map for cfg at iota is checked.

    gl uses the plain fermionic space.  o/sp pick the series by the class of iota:
    generic iota uses the plain space, half-integers a module twisted by the
    alpha cocycle, integers one twisted by the beta cocycle.
    """
    iota = scalar(iota)
    if cfg.variant == "gl":
        return FERMIONIC, None
    if (2 * iota).denominator != 1:
        return FERMIONIC, "generic"
    if iota.denominator == 2:
        i0 = int(iota - Fraction(1, 2))
        m = tuple((l - cfg.eps) // 2 for l in cfg.ell)
        return twisted_by_cocycle(FERMIONIC, AlphaCocycle(i0, m)), "half"
    return twisted_by_cocycle(FERMIONIC, BetaCocycle(int(iota), cfg.ell)), "integer"


def suite_hom(cfg: EllConfig, iota, seed: int = 0, pairs: int = 50, probes: int = 10) -> Report:
    iota = scalar(iota)
    rng = random.Random(seed)
    module, series = hom_module(cfg, iota)
    params = {"seed": seed, "variant": cfg.variant, "n": cfg.n, "ell": list(cfg.ell), "eps": cfg.eps, "iota": scalar_str(iota), "series": series or "gl"}
    window = {"pairs": pairs, "probes": probes}
    vs = [random_ferm_probe(rng) for _ in range(probes)]
    total = 0
    for k in range(pairs):
        if cfg.variant == "gl":
            x, y = random_gl_elem(rng, cfg, 2, 2, 2), random_gl_elem(rng, cfg, 2, 2, 2)
            rep = check_hom(x, y, iota, cfg, vs, module)
            total += rep.instances
            if not rep.passed:
                return _fail("hom", params, window, total, rep.counterexample)
            continue
        x, y = random_skew_elem(rng, cfg, 2, 1, 2), random_skew_elem(rng, cfg, 2, 1, 2)
        ox, oy, oxy = (skew_op(e, series, iota, cfg) for e in (x, y, ghbracket(x, y)))
        for v in vs:
            total += 1
            d = op_hom_defect(ox, oy, oxy, module, v)
            if vclean(d):
                return _fail("hom", params, window, total, {"x": repr(x), "y": repr(y), "probe": _vec_json(v), "defect": _vec_json(d)})
    return Report("hom", params, window, "pass", total)


# ---------------------------------------------------------------- vacuum-module suites


def suite_singular(cfg: EllConfig, chi: int, depth: int | None = None, power: int | None = None) -> Report:
    mod = VacuumModule(cfg, chi)
    v = singular_vector(mod, chi, power)
    params = {"variant": cfg.variant, "n": cfg.n, "ell": list(cfg.ell), "eps": cfg.eps, "chi": str(chi), "power": power if power is not None else chi + 1}
    if not v:
        return Report("singular", params, {"depth": depth}, "fail", 0, {"reason": "vector is zero"})
    rep = check_singular(mod, v, depth)
    window = {"depth": rep.depth, "degree": max(mod.degrees(v))}
    if rep.passed:
        return Report("singular", params, window, "pass", rep.instances, details={"eigenvalues": {str(k): scalar_str(c) for k, c in rep.eigenvalues.items()}})
    return Report("singular", params, window, "fail", rep.instances, {"annihilation_failures": [str(f) for f in rep.failures[:10]], "count": len(rep.failures)})


def locality_cases(cfg: EllConfig) -> list[tuple[str, GlHatElem, GlHatElem]]:
    """Generator pairs t^-1 d^(r+l_j) E_ij over off-diagonal units of the first two indices, r in {0, 1}."""
    n = cfg.n
    out = []
    if cfg.variant == "gl":
        units = [(1, 2), (2, 1)] if n >= 2 else [(1, 1)]
        gens = [((i, j, r), GlHatElem.unit(n, i, j, -1, r + cfg.ell[j - 1])) for (i, j) in units for r in (0, 1)]
    else:
        mod = VacuumModule(cfg, 1)
        basis = [g for k in (1, 2) for g in mod.basis(k)]
        gens = [(g.gid, g.elem) for g in basis[:4]]
    for (la, a), (lb, b) in itertools.product(gens, repeat=2):
        out.append((f"{la}x{lb}", a, b))
    return out


def suite_locality(cfg: EllConfig, chi, window: int = 2, m_max: int = 6) -> Report:
    mod = VacuumModule(cfg, chi)
    Y = VertexOperators(mod)
    probes = [mod.vacuum()]
    params = {"variant": cfg.variant, "n": cfg.n, "ell": list(cfg.ell), "chi": str(chi)}
    found = {}
    total = 0
    for label, a, b in locality_cases(cfg):
        m, rep = locality(Y, generator_vector(mod, a), generator_vector(mod, b), probes, window, m_max)
        total += rep.instances
        if m is None:
            return _fail("locality", params, rep.window, total, {"case": label, **(rep.counterexample or {})})
        found[label] = m
    return Report("locality", params, {"pairs": (2 * window + 1) ** 2, "m_max": m_max}, "pass", total, details={"m": found})


def rhat_basis(n: int, max_degree: int) -> list[RHatElem]:
    return [
        RHatElem.basis(n, i, j, a, b)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for a in range(max_degree + 1)
        for b in range(max_degree + 1 - a)
    ]


def suite_conformal(n: int = 2, max_degree: int = 2, seed: int = 0, count: int | None = 200) -> Report:
    """Conformal-algebra axioms on basis triples; count=None runs every triple."""
    basis = rhat_basis(n, max_degree)
    triples = list(itertools.product(basis, repeat=3))
    if count is not None and count < len(triples):
        triples = random.Random(seed).sample(triples, count)
    params = {"seed": seed, "n": n, "max_degree": max_degree}
    for k, (u, v, w) in enumerate(triples):
        rep = conformal_axioms(u, v, w)
        if not rep.passed:
            return _fail("conformal", params, {"triples": len(triples)}, k + 1, rep.counterexample)
    return Report("conformal", params, {"triples": len(triples)}, "pass", len(triples))


def random_rhat(rng, n: int, max_degree: int = 2, nterms: int = 2) -> RHatElem:
    out = RHatElem(n)
    for _ in range(rng.randint(1, nterms)):
        a = rng.randint(0, max_degree)
        b = rng.randint(0, max_degree - a)
        out = out + RHatElem.basis(n, rng.randint(1, n), rng.randint(1, n), a, b, rng.randint(-2, 2) or 1)
    return out


def suite_bracket_equiv(n: int = 2, iota=Fraction(1, 3), seed: int = 0, pairs: int = 50, window: int = 2) -> Report:
    """Mode commutators of the current realization, on the algebra and on Fock space."""
    iota = scalar(iota)
    rng = random.Random(seed)
    params = {"seed": seed, "n": n, "iota": scalar_str(iota)}
    win = {"pairs": pairs, "modes": (2 * window + 1) ** 2}
    total = 0
    for k in range(pairs):
        u, v = random_rhat(rng, n), random_rhat(rng, n)
        for rep in (bracket_equiv(u, v, window), theorem22_modes(u, v, iota, window, FERMIONIC, random_ferm_probe(rng))):
            total += rep.instances
            if not rep.passed:
                return _fail("bracket-equiv", params, win, total, {"side": rep.params.get("side"), **(rep.counterexample or {})})
    return Report("bracket-equiv", params, win, "pass", total)


def suite_virasoro(cfg: EllConfig, chi, window: int = 2) -> Report:
    return virasoro_check(cfg, chi, window)


SUITE_NAMES = ("jacobi", "cocycles", "hom", "singular", "locality", "conformal", "bracket-equiv", "virasoro", "fock-rep")
