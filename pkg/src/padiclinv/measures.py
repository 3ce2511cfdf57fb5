"""Finite-level measures on Zp^x, character and power evaluation, Euler factors.

A measure at level n assigns a coefficient to each unit residue mod p^n;
the group-algebra product, the tower norm maps, and evaluation against
characters or the analytic family <x>^s are all computed exactly, with
p-adic series entering only through log_p and the Teichmuller splitting.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .padic import PadicNumber, check_odd_prime, log_p, teichmuller


def _is_exact_zero(v) -> bool:
    if isinstance(v, PadicNumber):
        return v.is_zero()
    return v == 0


class Measure:
    """Coefficients indexed by (Z/p^n)^x; missing residues count as zero."""

    def __init__(self, p: int, n: int, table: dict):
        self.p = check_odd_prime(p)
        if n < 1:
            raise ValueError("level must be at least 1")
        self.n = n
        mod = p ** n
        full = {}
        for a, v in table.items():
            a = int(a) % mod
            if a % p == 0:
                raise ValueError("residue is not a unit at this level")
            full[a] = full.get(a, 0) + v
        self.table = {a: full.get(a, 0) for a in units_mod(p, n)}

    @property
    def mod(self) -> int:
        return self.p ** self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        return (
            self.p == other.p
            and self.n == other.n
            and all(self.table[a] == other.table[a] for a in self.table)
        )

    def __add__(self, other: "Measure") -> "Measure":
        if self.p != other.p or self.n != other.n:
            raise ValueError("level mismatch")
        return Measure(
            self.p, self.n, {a: self.table[a] + other.table[a] for a in self.table}
        )

    def scale(self, c) -> "Measure":
        return Measure(self.p, self.n, {a: c * v for a, v in self.table.items()})

    def __sub__(self, other: "Measure") -> "Measure":
        return self + other.scale(-1)

    def __repr__(self) -> str:
        nonzero = {a: v for a, v in self.table.items() if not _is_exact_zero(v)}
        return f"Measure(p={self.p}, n={self.n}, {nonzero!r})"


def units_mod(p: int, n: int) -> list:
    return [a for a in range(1, p ** n) if a % p != 0]


def dirac(p: int, n: int, a: int) -> Measure:
    if a % p == 0:
        raise ValueError("residue is not a unit at this level")
    return Measure(p, n, {a: Fraction(1)})


def norm_project(mu: Measure) -> Measure:
    """Push a level-(n+1) measure down to level n by summing fibers."""
    if mu.n < 2:
        raise ValueError("already at the bottom level")
    table = {}
    mod = mu.p ** (mu.n - 1)
    for a, v in mu.table.items():
        key = a % mod
        table[key] = table.get(key, 0) + v
    return Measure(mu.p, mu.n - 1, table)


def iota(mu: Measure) -> Measure:
    """Precompose with x -> x^-1."""
    mod = mu.mod
    return Measure(mu.p, mu.n, {pow(a, -1, mod): v for a, v in mu.table.items()})


def convolve(mu: Measure, nu: Measure) -> Measure:
    if mu.p != nu.p or mu.n != nu.n:
        raise ValueError("level mismatch")
    mod = mu.mod
    table = {}
    for a, v in mu.table.items():
        if _is_exact_zero(v):
            continue
        for b, w in nu.table.items():
            if _is_exact_zero(w):
                continue
            key = (a * b) % mod
            table[key] = table.get(key, 0) + v * w
    return Measure(mu.p, mu.n, table)


class Character:
    """A value table on (Z/p^n)^x whose values are (p-1)-th roots of unity."""

    def __init__(self, p: int, n: int, table: dict, validate: bool = True):
        self.p = check_odd_prime(p)
        self.n = n
        mod = p ** n
        self.table = {a % mod: v for a, v in table.items()}
        missing = [a for a in units_mod(p, n) if a not in self.table]
        if missing:
            raise ValueError("character table does not cover the units")
        if validate:
            if self.table[1 % mod] != 1:
                raise ValueError("character does not send 1 to 1")
            for a, v in self.table.items():
                if v ** (p - 1) != 1:
                    raise ValueError("character order does not divide p - 1")

    @classmethod
    def trivial(cls, p: int, n: int) -> "Character":
        return cls(p, n, {a: Fraction(1) for a in units_mod(p, n)}, validate=False)

    @classmethod
    def teichmuller_power(cls, p: int, n: int, k: int, prec: int = 8) -> "Character":
        table = {}
        for a in units_mod(p, n):
            zeta, _ = teichmuller(PadicNumber(p, 0, a, prec))
            table[a] = zeta ** (k % (p - 1)) if k % (p - 1) else Fraction(1)
        return cls(p, n, table, validate=False)

    def __call__(self, a: int):
        return self.table[a % (self.p ** self.n)]

    def inverse(self) -> "Character":
        table = {}
        for a, v in self.table.items():
            table[a] = v ** (self.p - 2) if isinstance(v, PadicNumber) else 1 / Fraction(v)
        return Character(self.p, self.n, table, validate=False)


def eval_character(mu: Measure, chi: Character):
    if chi.p != mu.p:
        raise ValueError("prime mismatch")
    if chi.n > mu.n:
        raise ValueError("conductor too deep")
    acc = 0
    for a, v in mu.table.items():
        if _is_exact_zero(v):
            continue
        acc = acc + chi(a) * v
    return acc


def _unit_logs(mu: Measure, prec: int) -> dict:
    p = mu.p
    return {
        a: log_p(PadicNumber(p, 0, a, prec + 2))
        for a in mu.table
        if not _is_exact_zero(mu.table[a])
    }


def moment(mu: Measure, k: int, prec: int = 8):
    """m_k = integral of (log_p<x>)^k against the measure."""
    if k == 0:
        return eval_character(mu, Character.trivial(mu.p, mu.n))
    logs = _unit_logs(mu, prec)
    acc = 0
    for a, la in logs.items():
        acc = acc + la ** k * mu.table[a]
    if acc == 0:
        return PadicNumber.zero(mu.p, prec)
    return acc


def eval_power(mu: Measure, s, prec: int = 8):
    """Integral of <x>^s via the exponential series over the moments.

    The k-th term s^k/k! * m_k has valuation at least k - k/(p-1) when
    s is integral, so the sum below carries absolute precision prec.
    """
    p = mu.p
    kmax = (prec * (p - 1)) // (p - 2) + 2
    logs = _unit_logs(mu, prec + kmax)
    acc = eval_character(mu, Character.trivial(p, mu.n))
    powers = {a: 1 for a in logs}
    s_pow = 1
    for k in range(1, kmax + 1):
        s_pow = s_pow * s
        if _is_exact_zero(s_pow):
            break
        m_k = 0
        for a, la in logs.items():
            powers[a] = powers[a] * la
            m_k = m_k + powers[a] * mu.table[a]
        acc = acc + s_pow * Fraction(1, factorial(k)) * m_k
    if isinstance(acc, PadicNumber):
        # the truncated tail is only known to be O(p^prec)
        return acc + PadicNumber.zero(p, prec)
    return PadicNumber.from_rational_abs(p, Fraction(acc), prec)


def bracket_power(p: int, a: int, s: int, prec: int = 8) -> PadicNumber:
    """<a>^s for integer s: the principal-unit part of a, raised exactly."""
    _, u1 = teichmuller(PadicNumber(p, 0, a, prec))
    if s >= 0:
        return u1 ** s
    return u1.inverse() ** (-s)


def derivative_at(mu: Measure, s0: int, twist=None, prec: int = 8):
    """d/ds of the measure's analytic family at s0 in {0, 1}.

    s0 = 0: the first moment, integral of log_p against the measure.
    s0 = 1 with twist (N, eps): derivative of eps^-1 <N>^(1-s) P(1-s)
    where P(h) integrates <x>^h; requires the total mass to vanish so
    the twist factor drops out of the product rule.
    """
    m1 = moment(mu, 1, prec)
    if s0 == 0:
        return m1
    if s0 == 1:
        if twist is None:
            raise ValueError("derivative at 1 needs a twist (N, eps)")
        _, eps = twist
        mass = eval_character(mu, Character.trivial(mu.p, mu.n))
        if not _is_exact_zero(mass):
            raise ValueError("no exceptional zero")
        return -m1 / eps
    raise ValueError("derivative implemented at s0 = 0 and 1 only")


def smoothing_measure(p: int, n: int, c: int, psi_c) -> Measure:
    """c^2 [1] - psi(c)^-1 [c^-1], the auxiliary smoothing element."""
    inv = pow(c, -1, p ** n)
    return Measure(p, n, {1: Fraction(c) ** 2, inv: -1 / psi_c})


# ---------------------------------------------------------------------------
# local Euler factors


def _l_value(p: int, s: int) -> Fraction:
    den = 1 - Fraction(1, p) ** (s + 1)
    if den == 0:
        raise ValueError("pole of the local L-factor")
    return 1 / den


def euler_factor(kind: str, p: int, s: int = None):
    """The modified local factors e^-(s) = (1-p^s) L(s), e^+ = -p^s (1-p^(s-1)) L(s).

    With s given, returns the exact value at that integer.  Without s,
    returns the zero report: location, order, the stripped multiplier
    E^(c)(c), and the leading coefficient against the vanishing factor.
    """
    check_odd_prime(p)
    if kind not in ("minus", "plus"):
        raise ValueError("kind must be 'minus' or 'plus'")
    if s is not None:
        if not isinstance(s, int):
            raise TypeError("evaluation point must be an integer")
        X = Fraction(p) ** s
        if kind == "minus":
            return (1 - X) * _l_value(p, s)
        return -X * (1 - X / p) * _l_value(p, s)
    if kind == "minus":
        return {
            "kind": "minus",
            "p": p,
            "zero_at": 0,
            "zero_order": 1,
            "modified_value": Fraction(1),
            "leading_coefficient": Fraction(p, p - 1),
        }
    return {
        "kind": "plus",
        "p": p,
        "zero_at": 1,
        "zero_order": 1,
        "modified_value": Fraction(-p),
        "leading_coefficient": Fraction(-p ** 3, p ** 2 - 1),
    }
