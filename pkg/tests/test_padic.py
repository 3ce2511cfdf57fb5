"""Core p-adic arithmetic, log/exp/Teichmuller, dual numbers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiclinv.padic import (
    DualNumber,
    Homomorphism,
    PadicNumber,
    exp_p,
    hom_eval,
    log_p,
    teichmuller,
)

# values computed by an independent route (Teichmuller-split series for log,
# factorial series for exp, iterated Frobenius for the root of unity)
LOG5_2_MOD_5_8 = 190335
EXP5_5_MOD_5_8 = 349831
TEICH5_2_MOD_5_8 = 280182


def from_q(p, q, prec=8):
    return PadicNumber.from_rational(p, Fraction(q), prec)


def test_representation_normalizes_unit():
    x = PadicNumber(5, 0, 50, 8)
    assert x.val == 2 and x.unit == 2 and x.prec == 6


def test_rational_embedding_roundtrip():
    x = from_q(5, Fraction(16, 25))
    assert x.val == -2
    assert x.lift() * 25 % 5 ** 8 == 16


def test_zero_and_ord_error():
    z = PadicNumber.from_rational(7, 0, 6)
    assert z.is_zero()
    with pytest.raises(ValueError, match="valuation undefined at this precision"):
        z.ord()


def test_addition_cancellation_tracks_precision():
    x = from_q(5, 3, 6)
    y = from_q(5, -3 + 5 ** 4, 6)
    s = x + y
    assert s.val == 4 and s.unit == 1
    # absolute precision capped by the less precise summand
    assert s.absprec == 6


def test_add_mixed_valuations():
    x = PadicNumber(5, -1, 2, 4)  # 2/5, known mod 5^3
    y = PadicNumber(5, 1, 3, 4)  # 15, known mod 5^5
    s = x + y
    assert s.val == -1 and s.absprec == 3
    assert (s - x - y).is_zero()


def test_mul_and_inverse():
    x = from_q(5, Fraction(7, 3))
    assert (x * x.inverse() - 1).is_zero()
    assert (x * from_q(5, Fraction(3, 7)) - 1).is_zero()


def test_division_by_apparent_zero():
    with pytest.raises(ZeroDivisionError):
        PadicNumber.zero(5, 4).inverse()


def test_str_digit_expansion():
    x = PadicNumber(5, 2, 2 + 3 * 5, 3)
    s = str(x)
    assert s.startswith("5^2 * (2 + 3*5")
    assert s.endswith("mod 5^3")
    assert str(PadicNumber.zero(5, 4)) == "O(5^4)"


def test_json_form():
    x = PadicNumber(5, -1, 12, 4)
    assert x.to_json() == {"p": 5, "val": -1, "unit": 12, "prec": 4}


def test_log_frozen_value():
    x = from_q(5, 2)
    val = log_p(x)
    assert val.lift() % 5 ** 8 == LOG5_2_MOD_5_8
    assert val.ord() == 1


def test_exp_frozen_value():
    x = from_q(5, 5)
    assert exp_p(x).lift() % 5 ** 8 == EXP5_5_MOD_5_8


def test_teichmuller_frozen_value():
    zeta, u1 = teichmuller(from_q(5, 2))
    assert zeta.lift() == TEICH5_2_MOD_5_8
    assert (zeta ** 4 - 1).is_zero()
    assert u1.residue(1) == 1
    assert (zeta * u1 - 2).is_zero()


def test_log_kills_p_and_roots_of_unity():
    p = 7
    assert log_p(from_q(p, p)).is_zero()
    assert log_p(from_q(p, p ** 3)).is_zero()
    zeta, _ = teichmuller(from_q(p, 3))
    assert log_p(zeta).is_zero()


def test_log_diverges_on_exhausted_precision():
    x = PadicNumber(5, 0, 2, 1)
    with pytest.raises(ValueError, match="precision exhausted"):
        log_p(x)


def test_exp_divergent_outside_pzp():
    with pytest.raises(ValueError, match="exp divergent"):
        exp_p(from_q(5, 2))
    with pytest.raises(ValueError, match="exp divergent"):
        exp_p(from_q(5, Fraction(1, 5)))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_log_additivity(p):
    prec = 7
    for a, b in [(2, 3), (1 + p, 1 + 2 * p), (Fraction(7, 2), 4 - p if p != 3 else 10)]:
        x, y = from_q(p, a, prec), from_q(p, b, prec)
        assert (log_p(x * y) - log_p(x) - log_p(y)).is_zero()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_exp_log_inverse_on_one_units(p):
    prec = 7
    for k in range(1, p):
        u = from_q(p, 1 + k * p, prec)
        assert exp_p(log_p(u)) == u
        v = from_q(p, k * p, prec)
        assert log_p(exp_p(v)) == v


@given(st.integers(min_value=1, max_value=5 ** 6 - 1), st.integers(min_value=1, max_value=5 ** 6 - 1))
@settings(max_examples=60, deadline=None)
def test_log_additivity_random_units(a, b):
    p, prec = 5, 6
    if a % p == 0 or b % p == 0:
        return
    x, y = from_q(p, a, prec), from_q(p, b, prec)
    assert (log_p(x * y) - log_p(x) - log_p(y)).is_zero()


@given(st.integers(min_value=-200, max_value=200), st.integers(min_value=-200, max_value=200))
@settings(max_examples=60, deadline=None)
def test_ring_laws_random(a, b):
    p, prec = 7, 6
    if a == 0 or b == 0:
        return
    x, y = from_q(p, a, prec), from_q(p, b, prec)
    assert (x + y) * (x - y) == x * x - y * y
    assert x * (y + 1) == x * y + x


def test_homomorphism_log_ord_split():
    p = 5
    lam = Homomorphism(Fraction(2), Fraction(-3))
    x = from_q(p, 2 * 5 ** 2)  # val 2, unit part 2
    got = hom_eval(lam, x)
    want = log_p(from_q(p, 2)) * 2 + from_q(p, -6)
    assert (got - want).is_zero()


def test_homomorphism_coefficients_recoverable():
    # a = lam(1+p)/log(1+p), b = lam(p)
    p = 5
    lam = Homomorphism(Fraction(3, 2), Fraction(-1, 4))
    one_unit = from_q(p, 1 + p)
    a = hom_eval(lam, one_unit) / log_p(one_unit)
    b = hom_eval(lam, from_q(p, p))
    assert a == from_q(p, Fraction(3, 2))
    assert b == from_q(p, Fraction(-1, 4))


def test_dual_number_algebra():
    x = DualNumber(Fraction(3), Fraction(2))
    y = DualNumber(Fraction(5), Fraction(-1))
    assert (x * y).base == 15 and (x * y).eps == 3 * -1 + 2 * 5
    assert (x * x.inverse()).base == 1 and (x * x.inverse()).eps == 0
    assert (x ** 3).eps == 3 * Fraction(3) ** 2 * 2


def test_dual_number_padic_components():
    p = 5
    x = DualNumber(from_q(p, 2), from_q(p, 7))
    inv = x.inverse()
    prod = x * inv
    assert (prod.base - 1).is_zero()
    assert prod.eps.is_zero()


def test_even_prime_rejected():
    with pytest.raises(ValueError, match="odd prime"):
        PadicNumber(2, 0, 1, 4)
    with pytest.raises(ValueError, match="odd prime"):
        PadicNumber(9, 0, 1, 4)
