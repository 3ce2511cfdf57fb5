"""Tangent-direction characters, line scalars, both computation routes."""

import random
from fractions import Fraction

import pytest

from padiclinv.linvariant import (
    BcgsResult,
    TangentData,
    WeightSpacePoint,
    bcgs,
    duality_swap,
    kappa_eps,
    kappa_eps_at_log,
    l_invariant_from_line,
    sym2_from_series,
    triangulation_params,
)
from padiclinv.padic import (
    DualNumber,
    Homomorphism,
    PadicNumber,
    log_p,
)


def unit(p, a, prec=8):
    return PadicNumber.from_rational(p, a, prec)


def random_unit(p, rng, prec=8):
    while True:
        a = rng.randrange(1, p ** 6)
        if a % p:
            return unit(p, a, prec)


# -- unit-group characters ----------------------------------------------


def test_kappa_at_prescribed_log():
    v = (Fraction(3), Fraction(5))
    assert kappa_eps_at_log(1, v, 1) == DualNumber(Fraction(1), Fraction(3))
    assert kappa_eps_at_log(2, v, 1) == DualNumber(Fraction(1), Fraction(5))
    # third coordinate inverts the product of the first two
    assert kappa_eps_at_log(3, v, 1) == DualNumber(Fraction(1), Fraction(-8))


def test_kappa_trivial_at_one():
    x = unit(5, 1)
    k = kappa_eps(1, (2, 7), x)
    assert k.eps.is_zero()


def test_kappa_requires_unit():
    with pytest.raises(ValueError, match="unit argument"):
        kappa_eps(1, (1, 0), PadicNumber.from_rational(5, 10, 8))
    with pytest.raises(ValueError, match="index"):
        kappa_eps_at_log(4, (1, 0), 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_kappa_multiplicative(p):
    rng = random.Random(p)
    for _ in range(30):
        xa = random_unit(p, rng)
        xb = random_unit(p, rng)
        v = (Fraction(rng.randrange(-4, 5)), Fraction(rng.randrange(-4, 5)))
        for i in (1, 2, 3):
            assert kappa_eps(i, v, xa * xb) == kappa_eps(i, v, xa) * kappa_eps(
                i, v, xb
            )


# -- triangulation characters -------------------------------------------


def test_pure_log_direction():
    tri = triangulation_params((1, 0), 0, 0)
    assert tri.partials[0] - tri.partials[1] == Homomorphism.log()


def test_excluded_direction_flattens_restriction():
    # (1, 1) kills the first difference on units
    tri = triangulation_params((1, 1), Fraction(2), Fraction(3))
    assert (tri.partials[0] - tri.partials[1]).a == 0


def test_exponents_sum_to_zero():
    tri = triangulation_params((Fraction(2), Fraction(-7, 3)), Fraction(1, 2), 4)
    total = tri.partials[0] + tri.partials[1] + tri.partials[2]
    assert total == Homomorphism(0, 0)
    prod = tri.value_at_p(1) * tri.value_at_p(2) * tri.value_at_p(3)
    assert prod == DualNumber(Fraction(1), Fraction(0))


def test_delta_restriction_matches_kappa():
    tri = triangulation_params((2, -1), Fraction(1, 2), 3)
    u = unit(5, 7)
    for i in (1, 2, 3):
        assert tri.delta(i, u) == kappa_eps(i, (2, -1), u)


def test_delta_value_at_p():
    tri = triangulation_params((2, -1), Fraction(1, 2), 3)
    xp = PadicNumber.from_rational(5, 5, 8)
    for i in (1, 2, 3):
        got = tri.delta(i, xp)
        assert got.eps == PadicNumber.from_rational(5, tri.partials[i - 1].b, 8)


def test_delta_multiplicative_across_valuations():
    tri = triangulation_params((2, -1), Fraction(1, 2), 3)
    xp = PadicNumber.from_rational(5, 5, 8)
    u = unit(5, 7)
    assert tri.delta(2, xp * u) == tri.delta(2, xp) * tri.delta(2, u)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_restriction_formulas_on_random_units(p):
    rng = random.Random(40 + p)
    v1 = Fraction(3, 2)
    v2 = Fraction(-2)
    tri = triangulation_params((v1, v2), Fraction(1, 3), Fraction(2))
    first = tri.partials[0] - tri.partials[1]
    second = tri.partials[1] - tri.partials[2]
    for _ in range(100):
        u = random_unit(p, rng)
        lg = log_p(u)
        assert first(u) == lg * (v1 - v2)
        assert second(u) == lg * (v1 + 2 * v2)


# -- scalar extraction --------------------------------------------------


def test_line_scalar_examples():
    assert l_invariant_from_line(Homomorphism.log()) == 0
    assert l_invariant_from_line(Homomorphism(1, -7)) == 7
    assert l_invariant_from_line(Homomorphism(Fraction(2), Fraction(3))) == Fraction(-3, 2)


def test_line_scalar_padic_rendering():
    got = l_invariant_from_line(Homomorphism(1, -7), p=5, prec=6)
    assert got == PadicNumber.from_rational(5, 7, 6)


def test_ord_line_rejected():
    with pytest.raises(ValueError, match="line contains ord_p"):
        l_invariant_from_line(Homomorphism.ord())


# -- the two scalar routes ----------------------------------------------


def test_first_index_example():
    r = bcgs(1, (1, 0), Fraction(2, 5), 0)
    assert r.via_eigenvalues == r.via_characters == Fraction(-4, 5)
    assert r.line == Homomorphism(1, Fraction(4, 5))
    assert l_invariant_from_line(r.line) == r.scalar


def test_second_index_example():
    # normalized direction (0, 1/2); only the second derivative is nonzero
    r = bcgs(2, (0, Fraction(1, 2)), 0, Fraction(3))
    assert r.via_eigenvalues == r.via_characters == -6


def test_rescaled_input_gives_same_line():
    r = bcgs(1, (1, 0), Fraction(2, 5), 0)
    doubled = bcgs(1, (2, 0), Fraction(4, 5), 0)
    assert doubled.scalar == r.scalar
    assert doubled.line == r.line


@pytest.mark.parametrize("i", [1, 2])
def test_routes_agree_as_linear_forms(i):
    rng = random.Random(11 * i)
    samples = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
               (Fraction(0), Fraction(0))]
    samples += [
        (
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)),
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)),
        )
        for _ in range(25)
    ]
    for d1, d2 in samples:
        v = (Fraction(rng.randrange(-5, 6)), Fraction(rng.randrange(-5, 6)))
        normalizer = v[0] - v[1] if i == 1 else v[0] + 2 * v[1]
        if normalizer == 0:
            continue
        r = bcgs(i, v, d1, d2)
        assert r.via_eigenvalues == r.via_characters
        assert l_invariant_from_line(r.line) == r.scalar


def test_bcgs_guards():
    with pytest.raises(ValueError, match="index"):
        bcgs(3, (1, 0), 0, 0)
    with pytest.raises(ValueError, match=r"proportional to \(1, 1\)"):
        bcgs(1, (2, 2), 1, 2)
    with pytest.raises(ValueError, match=r"proportional to \(2, -1\)"):
        bcgs(2, (2, -1), 1, 2)


# -- duality transport --------------------------------------------------


def test_swap_is_involutive():
    data = TangentData(3, -1, Fraction(2, 7), 5)
    j, swapped = duality_swap(2, data)
    assert j == 1
    jj, back = duality_swap(j, swapped)
    assert jj == 2 and back == data


def test_swap_transports_scalar_and_line():
    rng = random.Random(23)
    for _ in range(20):
        data = TangentData(
            rng.randrange(-5, 6), rng.randrange(-5, 6),
            Fraction(rng.randrange(-9, 10), 3), Fraction(rng.randrange(-9, 10), 2),
        )
        if data.v1 + 2 * data.v2 == 0:
            continue
        _, swapped = duality_swap(2, data)
        direct = bcgs(2, data.v, data.da1, data.da2)
        routed = bcgs(1, swapped.v, swapped.da1, swapped.da2)
        assert direct.scalar == routed.scalar
        assert direct.line == routed.line


def test_selfdual_data_equalizes_indices():
    r1 = bcgs(1, (1, 0), Fraction(6), Fraction(6))
    r2 = bcgs(2, (1, 0), Fraction(6), Fraction(6))
    assert r1.scalar == r2.scalar == -6


# -- symmetric-square specialization ------------------------------------


def test_sym2_scalar_and_line():
    s = sym2_from_series([1, Fraction(3, 4), 9])
    assert s.scalar == Fraction(-3, 2)
    assert s.line == Homomorphism(1, Fraction(3, 2))
    assert s.first.scalar == s.second.scalar == -2 * s.c1


def test_sym2_constant_series():
    s = sym2_from_series([1])
    assert s.scalar == 0


def test_sym2_guard():
    with pytest.raises(ValueError, match="constant term 1"):
        sym2_from_series([2, 1])
    with pytest.raises(ValueError, match="constant term 1"):
        sym2_from_series([])


# -- character-space points ---------------------------------------------


def test_exact_point_generator_values():
    w = WeightSpacePoint(5, 8, Fraction(5), Fraction(-10))
    one = unit(5, 1)
    assert w.kappa_from_log(1, one) == one + PadicNumber.from_rational(5, 5, 8)
    assert w.kappa_from_log(2, one) == one + PadicNumber.from_rational(5, -10, 8)


def test_exact_point_multiplicative():
    w = WeightSpacePoint(5, 8, Fraction(5), Fraction(-10))
    ua = unit(5, 7)
    ub = unit(5, 13)
    for i in (1, 2, 3):
        assert w.kappa(i, ua * ub) == w.kappa(i, ua) * w.kappa(i, ub)


def test_dual_point_matches_kappa_eps():
    w = WeightSpacePoint(5, 8, DualNumber(Fraction(0), Fraction(2)),
                         DualNumber(Fraction(0), Fraction(-3)))
    ua = unit(5, 7)
    for i in (1, 2, 3):
        got = w.kappa(i, ua)
        want = kappa_eps(i, (2, -3), ua)
        assert got.base == want.base and got.eps == want.eps


def test_dual_point_generator_value():
    w = WeightSpacePoint(5, 8, DualNumber(Fraction(0), Fraction(2)),
                         DualNumber(Fraction(0), Fraction(-3)))
    g = w.kappa_from_log(1, 1)
    assert g.base == unit(5, 1)
    assert g.eps == PadicNumber.from_rational(5, 2, 8)


def test_displacement_guard():
    with pytest.raises(ValueError, match="divisible by p"):
        WeightSpacePoint(5, 8, Fraction(1, 2), 0)
    with pytest.raises(ValueError, match="divisible by p"):
        WeightSpacePoint(5, 8, DualNumber(Fraction(1), Fraction(0)), 0)
