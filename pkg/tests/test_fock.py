import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from diffalg.fock import (
    BOSONIC,
    FERMIONIC,
    InducedModule,
    TensorFock,
    act_infmat,
    bose_act,
    bose_monomial,
    charge,
    ferm_act,
    ferm_monomial,
    hw_vector,
    hw_weight,
    tensor_act,
    tensor_from_factors,
    translation,
    twisted_by_cocycle,
)
from diffalg.glinf import AlphaCocycle, InfMat, ibracket, random_infmat, weight_eval

IDX = [-1, -3, -5, -7]  # doubled negative half-integers kept in the truncation


def test_examples():
    one = ferm_monomial()
    assert ferm_act(-1, -3, one) == ferm_monomial(thetas=[-3], bars=[-1])
    assert ferm_act(1, -1, one).is_zero()
    assert ferm_act(3, -1, ferm_monomial(thetas=[-1])).is_zero()
    b1 = bose_monomial()
    assert bose_act(-1, -1, b1).is_zero() is False
    assert bose_act(1, 1, b1).is_zero()
    assert bose_act(-1, -3, b1) == bose_monomial(xs={-3: 1}, xbars={-1: 1})


def test_charges():
    assert charge(ferm_monomial()) == 0
    assert charge(ferm_monomial(thetas=[-1, -3])) == 2
    assert charge(bose_monomial(xbars={-1: 3})) == -3


def test_highest_weight_vectors():
    assert hw_vector("fermionic", 0) == ferm_monomial()
    assert hw_vector("fermionic", -2) == ferm_monomial(bars=[-1, -3])
    assert hw_vector("bosonic", 3) == bose_monomial(xs={-1: 3})
    w = hw_weight("fermionic", 0)
    assert w.kappa0_val == 1 and not w.diag
    w = hw_weight("bosonic", 2)
    assert w.kappa0_val == -1 and w.diag == {1: -2}


@pytest.mark.parametrize("space,module", [("fermionic", FERMIONIC), ("bosonic", BOSONIC)])
@pytest.mark.parametrize("k", [-3, -1, 0, 2, 3])
def test_highest_weight_property(space, module, k):
    v = hw_vector(space, k).as_dict()
    lam = hw_weight(space, k)
    for l2 in range(-11, 12, 2):
        for k2 in range(-11, 12, 2):
            w = module.act(l2, k2, v)
            if l2 == -k2:
                assert w == {m: c * weight_eval(lam, InfMat.unit2(l2, k2)) for m, c in v.items() if weight_eval(lam, InfMat.unit2(l2, k2))}
            elif l2 > -k2:
                # the strictly triangular part with l + k > 0 kills the vector
                assert not w, (l2, k2)


def test_bracket_relation_seeded():
    rng = random.Random(2)
    pool = [-1, -3, -5, -7]
    for module in (FERMIONIC, BOSONIC):
        for _ in range(60):
            a, b = random_infmat(rng, 7, 1), random_infmat(rng, 7, 1)
            if module is FERMIONIC:
                v = ferm_monomial(rng.sample(pool, 2), rng.sample(pool, 1)).as_dict()
            else:
                v = bose_monomial({rng.choice(pool): 2}, {rng.choice(pool): 1}).as_dict()
            lhs = act_infmat(module, ibracket(a, b), v)
            ab = act_infmat(module, a, act_infmat(module, b, v))
            ba = act_infmat(module, b, act_infmat(module, a, v))
            diff = {k: lhs.get(k, 0) - ab.get(k, 0) + ba.get(k, 0) for k in set(lhs) | set(ab) | set(ba)}
            assert not any(diff.values())


# ---------------------------------------------------------------- Jordan-Wigner oracle

# generator order: bars (sorted) then thetas (sorted), matching the monomial layout
GENS = [("bar", i) for i in sorted(IDX)] + [("theta", i) for i in sorted(IDX)]


def _jw(kind, idx, create):
    size = 1 << len(GENS)
    pos = GENS.index((kind, idx))
    m = np.zeros((size, size), dtype=np.int64)
    for s in range(size):
        occupied = (s >> pos) & 1
        if occupied == create:
            continue
        sign = (-1) ** bin(s & ((1 << pos) - 1)).count("1")
        m[s ^ (1 << pos), s] = sign
    return m


def _theta(l2):
    return _jw("theta", l2, 1) if l2 < 0 else _jw("bar", -l2, 0)


def _bar(l2):
    return _jw("bar", l2, 1) if l2 < 0 else _jw("theta", -l2, 0)


def _state_of(mono):
    bars, ths = mono
    s = 0
    for i in bars:
        s |= 1 << GENS.index(("bar", i))
    for i in ths:
        s |= 1 << GENS.index(("theta", i))
    return s


def _mono_of(s):
    bars = tuple(i for k, (kind, i) in enumerate(GENS) if kind == "bar" and s >> k & 1)
    ths = tuple(i for k, (kind, i) in enumerate(GENS) if kind == "theta" and s >> k & 1)
    return bars, ths


def test_jordan_wigner_operators_satisfy_clifford_relations():
    ops = {l2: (_theta(l2), _bar(l2)) for l2 in [-7, -5, -3, -1, 1, 3, 5, 7]}
    for a, (ta, ba) in ops.items():
        for b, (tb, bb) in ops.items():
            assert not (ta @ tb + tb @ ta).any()
            assert not (ba @ bb + bb @ ba).any()
            expect = np.eye(ta.shape[0], dtype=np.int64) * (a + b == 0)
            assert (ta @ bb + bb @ ta == expect).all()


def test_fermionic_action_matches_jordan_wigner():
    indices = [-7, -5, -3, -1, 1, 3, 5, 7]
    for l2, k2 in itertools.product(indices, repeat=2):
        if l2 > 0 and l2 == -k2:
            oracle = -_theta(k2) @ _bar(l2)
        else:
            oracle = _bar(l2) @ _theta(k2)
        for s in range(1 << len(GENS)):
            got = FERMIONIC.act(l2, k2, {_mono_of(s): Fraction(1)})
            col = oracle[:, s]
            expect = {_mono_of(t): Fraction(int(c)) for t, c in enumerate(col) if c}
            assert got == expect, (l2, k2, _mono_of(s))


# ---------------------------------------------------------------- Weyl algebra oracle

XS = {i: sympy.Symbol(f"x{-i}") for i in IDX}
XB = {i: sympy.Symbol(f"xb{-i}") for i in IDX}


def _x(l2, f):
    return XS[l2] * f if l2 < 0 else sympy.diff(f, XB[-l2])


def _xbar(l2, f):
    return XB[l2] * f if l2 < 0 else -sympy.diff(f, XS[-l2])


def _to_poly(mono):
    xb, xs = mono
    out = sympy.Integer(1)
    for i, e in xb:
        out *= XB[i] ** e
    for i, e in xs:
        out *= XS[i] ** e
    return out


def _to_sym(v):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * _to_poly(m) for m, c in v.items()))


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([-7, -5, -3, -1, 1, 3, 5, 7]),
    st.sampled_from([-7, -5, -3, -1, 1, 3, 5, 7]),
    st.dictionaries(st.sampled_from(IDX), st.integers(1, 3), max_size=2),
    st.dictionaries(st.sampled_from(IDX), st.integers(1, 3), max_size=2),
)
def test_bosonic_action_matches_weyl_oracle(l2, k2, xs, xbars):
    v = bose_monomial(xs, xbars).as_dict()
    f = _to_poly(next(iter(v)))
    if l2 > 0 and k2 < 0:
        expect = _x(k2, _xbar(l2, f))  # creation operator written to the left
    else:
        expect = _xbar(l2, _x(k2, f))
    assert _to_sym(BOSONIC.act(l2, k2, v)) == sympy.expand(expect)


# ---------------------------------------------------------------- derived modules


def test_tensor_center_and_leibniz():
    for base, sign in ((FERMIONIC, 1), (BOSONIC, -1)):
        t = TensorFock(base, 3)
        assert t.kappa0 == 3 * sign
        w = TensorFock(base, 2).one()
        out = tensor_act(-1, -3, w, base, 2)
        assert len(out) == 2
        assert all(c == 1 for c in out.values())
    with pytest.raises(ValueError):
        TensorFock(FERMIONIC, 0)


def test_tensor_bracket_relation():
    t = TensorFock(FERMIONIC, 2)
    v = tensor_from_factors([ferm_monomial(thetas=[-1]), ferm_monomial(bars=[-3])])
    rng = random.Random(4)
    for _ in range(30):
        a, b = random_infmat(rng, 7, 1), random_infmat(rng, 7, 1)
        lhs = act_infmat(t, ibracket(a, b), v)
        ab = act_infmat(t, a, act_infmat(t, b, v))
        ba = act_infmat(t, b, act_infmat(t, a, v))
        assert not any(lhs.get(k, 0) - ab.get(k, 0) + ba.get(k, 0) for k in set(lhs) | set(ab) | set(ba))


def test_twisted_module_represents_alternate_cocycle():
    co = AlphaCocycle(1, (1, 1))
    mod = twisted_by_cocycle(FERMIONIC, co)
    rng = random.Random(8)
    v = ferm_monomial(thetas=[-1, -3], bars=[-5]).as_dict()
    for _ in range(40):
        a, b = random_infmat(rng, 9, 2), random_infmat(rng, 9, 2)
        lhs = act_infmat(mod, ibracket(a, b, co), v)
        ab = act_infmat(mod, a, act_infmat(mod, b, v))
        ba = act_infmat(mod, b, act_infmat(mod, a, v))
        assert not any(lhs.get(k, 0) - ab.get(k, 0) + ba.get(k, 0) for k in set(lhs) | set(ab) | set(ba))


def test_induced_module():
    mod = InducedModule(2)
    one = mod.one()
    assert mod.act(1, -1, one) == {}
    v = mod.act(-1, -3, one)
    assert mod.act(3, 1, v) == {(): Fraction(2)}
    rng = random.Random(9)
    for _ in range(30):
        a, b = random_infmat(rng, 5, 1), random_infmat(rng, 5, 1)
        lhs = act_infmat(mod, ibracket(a, b), v)
        ab = act_infmat(mod, a, act_infmat(mod, b, v))
        ba = act_infmat(mod, b, act_infmat(mod, a, v))
        assert not any(lhs.get(k, 0) - ab.get(k, 0) + ba.get(k, 0) for k in set(lhs) | set(ab) | set(ba))


def test_translation():
    assert translation(ferm_monomial()).is_zero()
    out = translation(ferm_monomial(thetas=[-1]))
    assert out == ferm_monomial(thetas=[-3])
    assert translation(bose_monomial()).is_zero()
