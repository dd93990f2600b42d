import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diffalg.glinf import (
    STANDARD,
    AlphaCocycle,
    BetaCocycle,
    InfMat,
    WeightFn,
    from_matrix_units,
    ibracket,
    imul,
    in_gamma,
    in_skew,
    matrix_unit_cocycle,
    matrix_unit_product,
    random_infmat,
    to_matrix_units,
    weight_eval,
)

h = Fraction(1, 2)
E = InfMat.unit


def jacobi(a, b, c, co):
    br = lambda x, y: ibracket(x, y, co)
    return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)


def test_products():
    assert imul(E(h, -h), E(h, -h)) == E(h, -h)
    assert imul(E(h, -h), E(-h, h)).is_zero()
    assert imul(E(3 * h, 5 * h), E(-5 * h, -h)) == E(3 * h, -h)


@pytest.mark.parametrize("l", [Fraction(k, 2) for k in range(-5, 4, 2)])
def test_unit_relations(l):
    lhs = ibracket(E(l + 1, -l), E(l, -l - 1))
    expect = E(l + 1, -l - 1) - E(l, -l)
    if l == -h:
        # here the pair straddles zero and the central term appears
        expect = expect + InfMat({}, 1)
    assert lhs == expect


def test_central_relation():
    lhs = ibracket(E(h, h), E(-h, -h))
    assert lhs == E(h, -h) - E(-h, h) + InfMat({}, 1)


def test_skew_membership():
    assert in_skew(E(3 * h, h) - E(h, 3 * h), "o_d")
    assert in_skew(E(h, h), "sp")
    assert not in_skew(E(h, -h), "o_d")


@pytest.mark.parametrize(
    "co",
    [STANDARD, AlphaCocycle(0, (0,)), AlphaCocycle(1, (1, 1)), AlphaCocycle(-1, (0, 2)), BetaCocycle(1, (1, 0)), BetaCocycle(-1, (0, 2, 1))],
    ids=repr,
)
def test_cocycle_jacobi(co):
    rng = random.Random(5)
    for _ in range(100):
        a, b, c = (random_infmat(rng) for _ in range(3))
        assert jacobi(a, b, c, co).is_zero()
        assert (ibracket(a, b, co) + ibracket(b, a, co)).is_zero()


def test_disjunctive_beta_reading_is_not_a_cocycle():
    # Reading the threshold pair as a disjunction breaks the Jacobi identity.
    co = BetaCocycle(1, (1, 0), reading="or")
    rng = random.Random(0)
    bad = 0
    for _ in range(200):
        a, b, c = (random_infmat(rng) for _ in range(3))
        bad += not jacobi(a, b, c, co).is_zero()
    assert bad > 0


def test_alternate_cocycles_differ_from_standard_by_diagonal_shift():
    co = AlphaCocycle(1, (1, 1))
    for a2 in range(-15, 16, 2):
        lhs = ibracket(E(Fraction(a2, 2), Fraction(-a2, 2)), E(Fraction(-a2, 2), Fraction(a2, 2)), co).kappa0
        rhs = ibracket(E(Fraction(a2, 2), Fraction(-a2, 2)), E(Fraction(-a2, 2), Fraction(a2, 2))).kappa0
        assert lhs == rhs


@settings(max_examples=100)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_matrix_unit_round_trip(n, i, j, L, K):
    if i > n or j > n:
        return
    l2, k2 = from_matrix_units(n, i, j, 2 * L + 1, 2 * K - 1)
    assert to_matrix_units(n, l2, k2) == (i, j, 2 * L + 1, 2 * K - 1)


def test_matrix_unit_product_matches_index_product():
    n = 2
    rng = random.Random(1)
    for _ in range(50):
        a = (rng.randint(1, n), rng.randint(1, n), 2 * rng.randint(-3, 3) + 1, 2 * rng.randint(-3, 3) - 1)
        b = (rng.randint(1, n), rng.randint(1, n), 2 * rng.randint(-3, 3) + 1, 2 * rng.randint(-3, 3) - 1)
        prod = matrix_unit_product({a: 1}, {b: 1})
        ea, eb = InfMat.unit2(*from_matrix_units(n, *a)), InfMat.unit2(*from_matrix_units(n, *b))
        expect = InfMat({from_matrix_units(n, *k): c for k, c in prod.items()})
        assert imul(ea, eb) == expect
        # the two-index cocycle is the standard one
        ia, ib = from_matrix_units(n, *a), from_matrix_units(n, *b)
        assert matrix_unit_cocycle(*a, *b) == ibracket(InfMat.unit2(*ia), InfMat.unit2(*ib)).kappa0


def test_weights():
    lam = WeightFn(-1, {1: -3})
    assert weight_eval(lam, InfMat({}, 2)) == -2
    assert weight_eval(lam, E(h, -h)) == -3
    with pytest.raises(ValueError):
        weight_eval(lam, E(h, h))
    assert in_gamma(WeightFn(-1, {1: -4}), 1)
    assert not in_gamma(WeightFn(-1, {3: -1, -3: 1}), 1)
    assert in_gamma(WeightFn(-2), 2)
    assert not in_gamma(WeightFn(-1, {1: Fraction(-1, 2)}), 1)
