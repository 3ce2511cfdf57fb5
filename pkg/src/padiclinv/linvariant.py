"""First-order character deformations and scalar invariants of lines.

A tangent datum is a direction (v1, v2) in a two-parameter character
space together with the directional derivatives (da1, da2) of the two
normalized eigenvalues at the origin.  All characters here are trivial
to zeroth order, so each is 1 + h(x) eps for a unique homomorphism
h = a*log_p + b*ord_p and the arithmetic stays exact.  The module
builds the three characters attached to a datum (unit restrictions
prescribed by the direction, values at p by the eigenvalue
derivatives), extracts the scalar invariant -b/a of the lines they
span, and evaluates the same scalar by two independent routes: directly
from products of deformed eigenvalues and through quotients of the
character values at p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import (
    DualNumber,
    Homomorphism,
    PadicNumber,
    exp_p,
    hom_eval,
    log_p,
)


@dataclass(frozen=True)
class TangentData:
    """Direction (v1, v2) and eigenvalue derivatives (da1, da2)."""

    v1: Fraction
    v2: Fraction
    da1: Fraction
    da2: Fraction

    def __post_init__(self):
        for name in ("v1", "v2", "da1", "da2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def v(self) -> tuple[Fraction, Fraction]:
        return (self.v1, self.v2)

    def scaled(self, c) -> "TangentData":
        c = Fraction(c)
        return TangentData(self.v1 * c, self.v2 * c, self.da1 * c, self.da2 * c)


def duality_swap(i: int, data: TangentData) -> tuple[int, TangentData]:
    """Transport a datum to the complementary index.

    The swapped datum poses the same line extraction problem for the
    other index: scalars and lines agree, and the swap is involutive.
    """
    if i not in (1, 2):
        raise ValueError("index must be 1 or 2")
    return 3 - i, TangentData(
        data.v1 + data.v2, -data.v2, data.da2, data.da1
    )


def _direction_coefficients(v) -> tuple[Fraction, Fraction, Fraction]:
    v1, v2 = (Fraction(c) for c in v)
    return (v1, v2, -(v1 + v2))


def kappa_eps_at_log(i: int, v, log_value) -> DualNumber:
    """1 + log_value * v_i * eps, with v_3 = -(v_1 + v_2)."""
    if i not in (1, 2, 3):
        raise ValueError("index must be 1, 2 or 3")
    vi = _direction_coefficients(v)[i - 1]
    if isinstance(log_value, PadicNumber):
        one = PadicNumber.from_rational(log_value.p, 1, max(log_value.prec, 1))
        return DualNumber(one, log_value * vi)
    return DualNumber(Fraction(1), Fraction(log_value) * vi)


def kappa_eps(i: int, v, x: PadicNumber) -> DualNumber:
    """The unit-group character 1 + log_p(x) v_i eps."""
    if x.is_zero() or x.ord() != 0:
        raise ValueError("unit argument required")
    return kappa_eps_at_log(i, v, log_p(x))


@dataclass(frozen=True)
class TriangulationData:
    """Three characters 1 + (a_i log + b_i ord) eps with sum of exponents zero."""

    partials: tuple[Homomorphism, Homomorphism, Homomorphism]
    direction: tuple[Fraction, Fraction]

    def value_at_p(self, i: int) -> DualNumber:
        """Exact dual-number value of the i-th character at p."""
        return DualNumber(Fraction(1), self.partials[i - 1].b)

    def delta(self, i: int, x: PadicNumber) -> DualNumber:
        """Evaluate the i-th character at any nonzero x."""
        one = PadicNumber.from_rational(x.p, 1, max(x.prec, 1))
        return DualNumber(one, hom_eval(self.partials[i - 1], x))


def triangulation_params(v, da1, da2) -> TriangulationData:
    """Characters with unit restriction v_i log and prescribed values at p.

    The first takes value 1 + da1*eps at p, the product of the first two
    takes 1 + da2*eps, and the product of all three is exactly 1; the
    same relations determine the ord-coefficients of the exponents.
    """
    a1, a2, a3 = _direction_coefficients(v)
    da1 = Fraction(da1)
    da2 = Fraction(da2)
    partials = (
        Homomorphism(a1, da1),
        Homomorphism(a2, da2 - da1),
        Homomorphism(a3, -da2),
    )
    return TriangulationData(partials, (a1, a2))


def l_invariant_from_line(line: Homomorphism, p: int | None = None,
                          prec: int = 8):
    """Scalar -b/a of the line spanned by a*log_p + b*ord_p.

    Exact rational by default; rendered p-adically when p is given.
    """
    if line.a == 0:
        raise ValueError("line contains ord_p; L-invariant undefined")
    scalar = -line.b / line.a
    if p is None:
        return scalar
    return PadicNumber.from_rational(p, scalar, prec)


_EXCLUDED_DIRECTION = {1: "(1, 1)", 2: "(2, -1)"}


@dataclass(frozen=True)
class BcgsResult:
    """Both scalar computations and the line they came from."""

    i: int
    data: TangentData
    via_eigenvalues: Fraction
    via_characters: Fraction
    line: Homomorphism

    @property
    def scalar(self) -> Fraction:
        return self.via_eigenvalues


def bcgs(i: int, v, da1, da2) -> BcgsResult:
    """Scalar invariant of the i-th line, by two independent routes.

    The datum is rescaled so the line's log-coefficient is 1 (possible
    exactly when the direction avoids the excluded ray for that index).
    One route multiplies the deformed eigenvalues 1 + da*eps; the other
    divides adjacent character values at p.  Both equal -b where
    line = log_p + b*ord_p.
    """
    if i not in (1, 2):
        raise ValueError("index must be 1 or 2")
    v1, v2 = (Fraction(c) for c in v)
    data = TangentData(v1, v2, da1, da2)
    normalizer = v1 - v2 if i == 1 else v1 + 2 * v2
    if normalizer == 0:
        raise ValueError(
            "tangent direction proportional to "
            f"{_EXCLUDED_DIRECTION[i]}; line degenerates to a multiple of ord_p"
        )
    data = data.scaled(1 / normalizer)

    one = Fraction(1)
    e1 = DualNumber(one, data.da1)
    e2 = DualNumber(one, data.da2)
    if i == 1:
        eigen = e1 * e1 * e2.inverse()
    else:
        eigen = e2 * e2 * e1.inverse()
    via_eigenvalues = -eigen.eps

    tri = triangulation_params(data.v, data.da1, data.da2)
    char = tri.value_at_p(i) * tri.value_at_p(i + 1).inverse()
    via_characters = -char.eps

    line = tri.partials[i - 1] - tri.partials[i]
    return BcgsResult(i, data, via_eigenvalues, via_characters, line)


@dataclass(frozen=True)
class Sym2Result:
    """Symmetric-square specialization: both indices share one scalar."""

    c1: Fraction
    data: TangentData
    first: BcgsResult
    second: BcgsResult
    line: Homomorphism
    scalar: Fraction


def sym2_from_series(coefficients) -> Sym2Result:
    """Scalar invariant from a unit-eigenvalue power series 1 + c1*k + ...

    The direction is (1, 0) and both normalized eigenvalues deform as
    the square of the series, so both indices give the scalar -2*c1.
    """
    coefficients = [Fraction(c) for c in coefficients]
    if not coefficients or coefficients[0] != 1:
        raise ValueError("series must have constant term 1")
    c1 = coefficients[1] if len(coefficients) > 1 else Fraction(0)
    data = TangentData(1, 0, 2 * c1, 2 * c1)
    first = bcgs(1, data.v, data.da1, data.da2)
    second = bcgs(2, data.v, data.da1, data.da2)
    return Sym2Result(c1, data, first, second, first.line, first.scalar)


# -- character-space points with exact or dual coordinates ---------------


class WeightSpacePoint:
    """Point (T1, T2) of the two-parameter character space.

    Coordinates are displacements from the origin: exact rationals
    divisible by p, or dual numbers (base divisible by p).  The i-th
    character sends a unit x to (1 + T_i)^(log_p(x)), computed by
    exponentiating log_p(x) * log(1 + T_i); the third coordinate is the
    inverse of the product of the first two.
    """

    __slots__ = ("p", "prec", "t1", "t2")

    def __init__(self, p: int, prec: int, t1, t2):
        self.p = p
        self.prec = prec
        self.t1 = self._coerce(t1)
        self.t2 = self._coerce(t2)

    def _embed(self, value) -> PadicNumber:
        return PadicNumber.from_rational(self.p, Fraction(value), self.prec)

    def _coerce(self, t):
        if isinstance(t, DualNumber):
            base = t.base if isinstance(t.base, PadicNumber) else self._embed(t.base)
            eps = t.eps if isinstance(t.eps, PadicNumber) else self._embed(t.eps)
            if not base.is_zero() and base.ord() < 1:
                raise ValueError("displacement must be divisible by p")
            return DualNumber(base, eps)
        t = t if isinstance(t, PadicNumber) else self._embed(t)
        if not t.is_zero() and t.ord() < 1:
            raise ValueError("displacement must be divisible by p")
        return t

    def _one(self) -> PadicNumber:
        return PadicNumber.from_rational(self.p, 1, self.prec)

    def _log1p(self, t):
        if isinstance(t, DualNumber):
            base = self._one() + t.base
            return DualNumber(log_p(base), t.eps / base)
        return log_p(self._one() + t)

    @staticmethod
    def _exp(z):
        if isinstance(z, DualNumber):
            e = exp_p(z.base)
            return DualNumber(e, z.eps * e)
        return exp_p(z)

    def kappa_from_log(self, i: int, log_value):
        """(1 + T_i)^y for a prescribed value y of the logarithm."""
        if i not in (1, 2, 3):
            raise ValueError("index must be 1, 2 or 3")
        if not isinstance(log_value, PadicNumber):
            log_value = self._embed(log_value)
        if i == 3:
            k1 = self.kappa_from_log(1, log_value)
            k2 = self.kappa_from_log(2, log_value)
            return (k1 * k2).inverse()
        t = self.t1 if i == 1 else self.t2
        return self._exp(log_value * self._log1p(t))

    def kappa(self, i: int, x: PadicNumber):
        """Value of the i-th character at a unit."""
        if x.is_zero() or x.ord() != 0:
            raise ValueError("unit argument required")
        return self.kappa_from_log(i, log_p(x))
