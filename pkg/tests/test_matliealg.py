import random

import pytest
from hypothesis import given, settings, strategies as st

from diffalg.matliealg import (
    EllConfig,
    GlHatElem,
    cocycle_positive_vanishes,
    gen_skew,
    ghbracket,
    in_subalgebra,
    random_gl_elem,
    random_skew_elem,
    tau_ast,
    tau_dag,
)

U = GlHatElem.unit


def test_bracket_central_examples():
    assert ghbracket(U(1, 1, 1, 1), U(1, 1, 1, -1)) == GlHatElem.central(1)
    for k in range(1, 5):
        assert ghbracket(U(1, 1, 1, k), U(1, 1, 1, -k)) == GlHatElem.central(1, k)


def test_bracket_of_units():
    x, y = U(2, 1, 2, 0, 0), U(2, 2, 1, 0, 0)
    assert ghbracket(x, y) == U(2, 1, 1) - U(2, 2, 2)
    assert ghbracket(x, x).is_zero()


def test_positive_part_has_no_central_term():
    assert cocycle_positive_vanishes(U(2, 1, 2, 1, 1), U(2, 2, 1, 2, 1))
    assert cocycle_positive_vanishes(U(2, 1, 1), U(2, 1, 1))
    with pytest.raises(ValueError):
        cocycle_positive_vanishes(U(1, 1, 1, -1), U(1, 1, 1, 1))


def test_involutions():
    cfg = EllConfig.make(2)
    assert tau_ast(U(2, 1, 2), cfg) == U(2, 1, 2)
    assert tau_dag(U(2, 1, 1), cfg) == U(2, 2, 2)
    assert tau_dag(U(2, 1, 2), cfg) == U(2, 1, 2, c=-1)


def test_gen_skew_examples():
    cfg = EllConfig.make(2, 0, eps=1, variant="o", strict=False)
    assert gen_skew(2, 1, -1, 0, cfg) == U(2, 2, 1, -1, 0, 2)
    cfg1 = EllConfig.make(1, 1, eps=1, variant="o")
    assert gen_skew(1, 1, 0, 0, cfg1) == U(1, 1, 1, 0, 1, 2)


def test_subalgebra_membership():
    assert not in_subalgebra(U(2, 1, 2, 1, 0), EllConfig.make(2, (0, 2)))
    assert in_subalgebra(GlHatElem.central(2), EllConfig.make(2, (0, 2)))
    assert in_subalgebra(GlHatElem.central(2), EllConfig.make(2, 1, 1, "o"))


@pytest.mark.parametrize(
    "cfg",
    [
        EllConfig.make(2, 0, 0, "o"),
        EllConfig.make(2, 1, 1, "o"),
        EllConfig.make(3, 1, 1, "o"),
        EllConfig.make(2, 0, 0, "sp"),
        EllConfig.make(4, (1, 3, 3, 1), 1, "sp"),
    ],
)
def test_generators_lie_in_subalgebra(cfg):
    for i in range(1, cfg.n + 1):
        for j in range(1, cfg.n + 1):
            for m in (-2, 0, 1):
                for r in (0, 1, 2):
                    assert in_subalgebra(gen_skew(i, j, m, r, cfg), cfg)


@pytest.mark.parametrize("variant,eps,n", [("o", 0, 2), ("o", 1, 3), ("sp", 0, 2), ("sp", 1, 2)])
def test_subalgebra_closed_under_bracket(variant, eps, n):
    cfg = EllConfig.make(n, eps, eps, variant)
    rng = random.Random(3)
    for _ in range(20):
        x, y = random_skew_elem(rng, cfg), random_skew_elem(rng, cfg)
        assert in_subalgebra(ghbracket(x, y), cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        EllConfig.make(2, (0, 1), 0, "o")
    with pytest.raises(ValueError):
        EllConfig.make(3, 0, 0, "sp")
    with pytest.raises(ValueError):
        EllConfig.make(2, 1, 0, "o")
    assert EllConfig.make(2, 1, 0, "o", strict=False).ell == (1, 1)
    with pytest.raises(ValueError):
        U(2, 3, 1)
    with pytest.raises(ValueError):
        U(1, 1, 1) + U(2, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_jacobi_and_antisymmetry(seed, n):
    rng = random.Random(seed)
    cfg = EllConfig.make(n, tuple(rng.randint(0, 2) for _ in range(n)))
    x, y, z = (random_gl_elem(rng, cfg) for _ in range(3))
    assert (ghbracket(x, y) + ghbracket(y, x)).is_zero()
    jac = ghbracket(ghbracket(x, y), z) + ghbracket(ghbracket(y, z), x) + ghbracket(ghbracket(z, x), y)
    assert jac.is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_tau_reverses_brackets(seed):
    rng = random.Random(seed)
    cfg = EllConfig.make(2)
    x, y = random_gl_elem(rng, cfg), random_gl_elem(rng, cfg)
    for tau in (tau_ast, tau_dag):
        assert tau(tau(x, cfg), cfg) == x.matrix_part()
        lhs = tau(ghbracket(x, y), cfg)
        rhs = ghbracket(tau(y, cfg), tau(x, cfg))
        assert lhs == rhs.matrix_part()
