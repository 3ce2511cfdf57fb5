"""Laurent ring, Hecke-polynomial factorizations, character bookkeeping."""

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiclinv.satake import (
    LaurentPoly,
    hecke_H,
    hecke_H_definitional,
    hecke_H_dual,
    hecke_H_dual_definitional,
    hecke_Htilde,
    parabolic_satake_check,
    root_names,
    satake_identity_check,
    standard_weight_elementary,
    universal_characters,
)
from padiclinv.weyl import (
    Weight,
    WeylElement,
    enumerate_MW,
    long_element,
    long_levi_element,
    star_action,
)

RING_VARS = ("l", "q", "y", "X")


def sparse_polys():
    exps = st.tuples(*(st.integers(min_value=-3, max_value=3) for _ in RING_VARS))
    coefs = st.builds(
        Fraction,
        st.integers(min_value=-9, max_value=9),
        st.integers(min_value=1, max_value=4),
    )
    return st.dictionaries(exps, coefs, max_size=5).map(
        lambda d: LaurentPoly(RING_VARS, d)
    )


# -- ring structure -----------------------------------------------------


def test_constructor_validation():
    with pytest.raises(ValueError, match="duplicate"):
        LaurentPoly(("x", "x"))
    with pytest.raises(ValueError, match="length mismatch"):
        LaurentPoly(("x", "y"), {(1,): 1})


def test_q_square_rewrites_to_l():
    v = ("l", "q", "X")
    q = LaurentPoly.variable(v, "q")
    el = LaurentPoly.variable(v, "l")
    assert q * q == el
    assert q ** 3 == el * q
    assert q ** -2 == el ** -1
    # q^-1 lands on the canonical side q/l
    assert q ** -1 == el ** -1 * q
    assert q ** -1 * q == LaurentPoly.constant(v, 1)


def test_rewrite_ignored_without_both_symbols():
    v = ("q", "X")
    q = LaurentPoly.variable(v, "q")
    assert (q * q).terms == {(2, 0): Fraction(1)}


def test_cancellation_gives_zero():
    x = LaurentPoly.variable(RING_VARS, "X")
    z = x - x
    assert z.is_zero()
    assert str(z) == "0"


@given(sparse_polys(), sparse_polys(), sparse_polys())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(sparse_polys(), sparse_polys())
@settings(max_examples=40, deadline=None)
def test_substitution_is_a_ring_homomorphism(a, b):
    target = ("l", "q", "t", "X")
    image = LaurentPoly.monomial(target, 1, {"t": 1, "X": -1})
    sub = lambda f: f.substitute({"y": image}, target)
    assert sub(a + b) == sub(a) + sub(b)
    assert sub(a * b) == sub(a) * sub(b)


def test_pow_matches_repeated_product():
    f = 1 + LaurentPoly.variable(RING_VARS, "y") * LaurentPoly.variable(
        RING_VARS, "X"
    )
    assert f ** 3 == f * f * f
    assert f ** 0 == LaurentPoly.constant(RING_VARS, 1)
    with pytest.raises(ValueError, match="monomials invert"):
        f ** -1


def test_substitution_guards():
    f = LaurentPoly.variable(RING_VARS, "y")
    with pytest.raises(ValueError, match="not in target"):
        f.substitute({}, ("l", "q", "X"))
    with pytest.raises(ValueError, match="wrong universe"):
        f.substitute({"y": LaurentPoly.variable(("z",), "z")})


def test_coefficients_in_reconstructs():
    random.seed(3)
    terms = {
        tuple(random.randrange(-2, 3) for _ in RING_VARS): random.randrange(-5, 6)
        for _ in range(8)
    }
    f = LaurentPoly(RING_VARS, terms)
    x = LaurentPoly.variable(RING_VARS, "X")
    rebuilt = LaurentPoly.constant(RING_VARS, 0)
    for k, coef in f.coefficients_in("X").items():
        lifted = LaurentPoly(
            RING_VARS,
            {e[:3] + (0,): c for e, c in coef.terms.items()},
        )
        rebuilt = rebuilt + lifted * x ** k
    assert rebuilt == f


def test_sparse_printing():
    v = ("l", "q", "b1", "X")
    f = LaurentPoly.monomial(v, Fraction(3, 2), {"b1": 2, "q": 1, "X": 3})
    assert str(f) == "3/2 * q b1^2 X^3"
    g = 1 - LaurentPoly.variable(v, "b1")
    assert str(g) == "1 - b1"


# -- Hecke polynomials --------------------------------------------------


def test_rank_one_linear_factor():
    h = hecke_H(1)
    v = h.variables
    x = LaurentPoly.variable(v, "X")
    b = LaurentPoly.variable(v, "b1")
    assert h == 1 - b * x


def test_rank_two_expansion():
    h = hecke_H(2)
    coefs = h.coefficients_in("X")
    v = coefs[0].variables
    b1 = LaurentPoly.variable(v, "b1")
    b2 = LaurentPoly.variable(v, "b2")
    assert coefs[0] == 1
    assert coefs[1] == -(b1 + b2)
    assert coefs[2] == b1 * b2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coefficients_are_signed_elementary(n):
    h = hecke_H(n)
    coefs = h.coefficients_in("X")
    v = h.variables
    for i in range(n + 1):
        e_i = LaurentPoly.constant(v, 0)
        for chosen in combinations(root_names(n), i):
            e_i = e_i + LaurentPoly.monomial(v, 1, {name: 1 for name in chosen})
        want = ((-1) ** i * e_i).coefficients_in("X")[0]
        assert coefs[i] == want


def test_dual_roots_inverted():
    h = hecke_H_dual(2)
    coefs = h.coefficients_in("X")
    v = coefs[0].variables
    b1 = LaurentPoly.variable(v, "b1", -1)
    b2 = LaurentPoly.variable(v, "b2", -1)
    assert coefs[1] == -(b1 + b2)
    assert coefs[2] == b1 * b2


@pytest.mark.parametrize("n", [2, 3])
def test_definitional_sums_match_products(n):
    # the q-power alternating sums on normalized parameters reduce to the
    # product forms after the scaling a_i -> q^{1-n} b_i
    a = root_names(n, "a")
    b = root_names(n, "b")
    universe = ("l", "q") + a + b + ("X",)
    q = LaurentPoly.variable(universe, "q")
    scale = {
        f"a{i}": q ** (1 - n) * LaurentPoly.variable(universe, f"b{i}")
        for i in range(1, n + 1)
    }
    defn = hecke_H_definitional(n, a, universe)
    assert defn.substitute(scale) == hecke_H(n, b, universe)
    dual = hecke_H_dual_definitional(n, a, universe)
    assert dual.substitute(scale) == hecke_H_dual(n, b, universe)


def test_selfdual_rank_one_product():
    h = hecke_Htilde(1)
    v = h.variables
    x = LaurentPoly.variable(v, "X")
    u = LaurentPoly.variable(v, "u1")
    assert h == (1 - x) * (1 - u * x) * (1 - u ** -1 * x)
    coefs = h.coefficients_in("X")
    middle = 1 + u + u ** -1
    assert coefs[1] == (-middle).coefficients_in("X")[0]
    assert coefs[2] == middle.coefficients_in("X")[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_selfdual_constant_and_top_coefficients(n):
    coefs = hecke_Htilde(n).coefficients_in("X")
    assert sorted(coefs) == list(range(2 * n + 2))
    assert coefs[0] == 1
    assert coefs[2 * n + 1] == -1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_selfdual_palindromic_coefficients(n):
    # e_i of the self-inverse weight multiset equals e_{2n+1-i}
    coefs = hecke_Htilde(n).coefficients_in("X")
    for i in range(2 * n + 2):
        e_i = standard_weight_elementary(n, i)
        e_dual = standard_weight_elementary(n, 2 * n + 1 - i)
        assert e_i == e_dual
        sign = -1 if i % 2 else 1
        assert coefs[i] == (sign * e_i).coefficients_in("X")[0]


# -- factorization checks -----------------------------------------------


def test_identity_rank_one_explicit():
    report = satake_identity_check(1)
    assert report["passed"]
    v = ("l", "q", "b1", "X")
    x = LaurentPoly.variable(v, "X")
    el = LaurentPoly.variable(v, "l")
    b = LaurentPoly.variable(v, "b1")
    triple = (1 - x) * (1 - el * b * x) * (1 - el ** -1 * b ** -1 * x)
    substituted = hecke_Htilde(1).substitute({"u1": el * b}, v)
    assert substituted == triple


@pytest.mark.parametrize("n,count", [(2, 6), (3, 8)])
def test_identity_coefficient_counts(n, count):
    report = satake_identity_check(n)
    assert report["passed"]
    assert report["coefficients_checked"] == count
    assert report["mismatched_degrees"] == []


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_identity_full_range(n):
    assert satake_identity_check(n)["passed"]


def test_identity_rank_guard():
    with pytest.raises(ValueError, match="1..6"):
        satake_identity_check(0)
    with pytest.raises(ValueError, match="1..6"):
        satake_identity_check(7)


def _partitions(j):
    if j == 0:
        yield ()
        return
    for first in range(1, j + 1):
        for rest in _partitions(j - first):
            yield (first,) + rest


ALL_PARTITIONS = [
    (n, part) for n in range(0, 4) for j in range(0, n + 1) for part in _partitions(j)
]


@pytest.mark.parametrize("n,part", ALL_PARTITIONS)
def test_parabolic_all_compositions(n, part):
    report = parabolic_satake_check(n, part)
    assert report["passed"], report
    assert report["coefficients_checked"] == 2 * n + 2


def test_parabolic_siegel_case():
    report = parabolic_satake_check(2, (2,))
    assert report["passed"]
    assert report["coefficients_checked"] == 6


def test_parabolic_degenerate_rank_zero():
    report = parabolic_satake_check(0, ())
    assert report["passed"]
    # both sides reduce to the linear polynomial 1 - X
    assert report["coefficients_checked"] == 2


def test_parabolic_guards():
    with pytest.raises(ValueError, match="0..4"):
        parabolic_satake_check(5, (1,))
    with pytest.raises(ValueError, match="positive"):
        parabolic_satake_check(3, (0, 1))
    with pytest.raises(ValueError, match="exceeds the rank"):
        parabolic_satake_check(2, (2, 1))


# -- character bookkeeping ----------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_middle_character_trivial(n):
    fam = universal_characters(n, (0,) * n)
    assert fam.psi[n].is_trivial()


def test_explicit_family_rank_three():
    fam = universal_characters(3, (2, 1, 0))
    c1, c2, c3 = fam.chi
    assert (c1.omega_power, c1.unit_power, c1.diamonds) == (0, 0, ((1, 1),))
    assert c1.frobenius == (("U1", 1),)
    assert c2.frobenius == (("U1", -1), ("U2", 1))
    assert (c3.omega_power, c3.unit_power) == (-2, -2)
    p1 = fam.psi[0]
    assert (p1.omega_power, p1.unit_power, p1.diamonds) == (3, 2, ((3, -1),))
    assert p1.frobenius == (("Ut2", 1), ("Ut3", -1))
    p_last = fam.psi[6]
    assert (p_last.omega_power, p_last.unit_power) == (-3, -2)
    assert p_last.frobenius == (("Ut2", -1), ("Ut3", 1))
    # first past the middle: index-0 operator dropped as the identity
    assert fam.psi[4].frobenius == (("Ut1", 1),)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_telescoping_product(n):
    lam = tuple(range(3 * n, 2 * n, -1))
    fam = universal_characters(n, lam)
    prod = fam.psi[0]
    for c in fam.psi[1:n]:
        prod = prod * c
    assert prod.frobenius == ((f"Ut{n}", -1),)
    assert prod.omega_power == n * (n + 1) // 2
    assert prod.unit_power == sum(lam)
    assert prod.diamonds == tuple((k, -1) for k in range(1, n + 1))


def test_multiplication_and_inverse():
    fam = universal_characters(2, (4, 1))
    c = fam.chi[1]
    assert (c * c.inverse()).is_trivial()
    twisted = c.cyclotomic_twist(5)
    assert twisted.omega_power == c.omega_power + 5
    assert twisted.frobenius == c.frobenius


def test_weight_coercion_and_guards():
    fam = universal_characters(2, Weight((5, 2), 7))
    assert fam.weight.entries == (5, 2)
    with pytest.raises(ValueError, match="rank mismatch"):
        universal_characters(3, (1, 0))


def test_reindex_identity_ordering():
    fam = universal_characters(2, (5, 2))
    assert fam.reindex(WeylElement.identity(2)) == fam.zeta()


def test_reindex_rejects_bad_elements():
    fam = universal_characters(2, (5, 2))
    with pytest.raises(ValueError, match="minimal coset"):
        fam.reindex(long_levi_element(2))
    with pytest.raises(ValueError, match="rank mismatch"):
        fam.reindex(WeylElement.identity(3))


@pytest.mark.parametrize("n", [2, 3])
def test_reindex_is_a_bijection(n):
    fam = universal_characters(n, tuple(range(3 * n, 2 * n, -1)))
    base = Counter(c.data() for c in fam.zeta())
    for _subset, w, _length in enumerate_MW(n):
        out = fam.reindex(w)
        assert len(out) == 2 * n
        assert Counter(c.data() for c in out) == base


@pytest.mark.parametrize("n", [2, 3])
def test_unit_weights_are_signed_shifted_entries(n):
    random.seed(10 + n)
    lam = tuple(
        sorted((random.randrange(0, 40) for _ in range(n)), reverse=True)
    )
    fam = universal_characters(n, lam)
    shifted = [lam[i] + (n - i) for i in range(n)]
    want = Counter(shifted + [-v for v in shifted])
    psi_side = Counter(
        c.art_u_weight() for i, c in enumerate(fam.psi) if i != n
    )
    zeta_side = Counter(c.art_u_weight() for c in fam.zeta())
    assert psi_side == want
    assert zeta_side == want


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reindexed_zeta_recovers_psi_weight_multiset(n):
    # the twisted weight behind each minimal representative produces the
    # same signed multiset of unit exponents as the full character list
    random.seed(77 + n)
    for _trial in range(3):
        base = sorted((random.randrange(1, 60) for _ in range(n)), reverse=True)
        lam = Weight(tuple(b + (n - i) * 3 for i, b in enumerate(base)), 0)
        psi_side = Counter(
            c.art_u_weight()
            for i, c in enumerate(universal_characters(n, lam).psi)
            if i != n
        )
        for _subset, w, _length in enumerate_MW(n):
            x = long_levi_element(n) * w * long_element(n)
            lam_x = star_action(x, lam)
            fam_x = universal_characters(n, lam_x.entries)
            zeta_side = Counter(c.art_u_weight() for c in fam_x.reindex(w))
            assert zeta_side == psi_side
