"""Exact arithmetic in Qp at finite precision.

A number is stored as p^val * unit where the unit is known modulo p^prec.
The logarithm is normalized so that log(p) = 0 and log kills roots of unity;
the exponential converges on pZp for odd p.
"""

from __future__ import annotations

from fractions import Fraction

_PRIME_CACHE: dict[int, bool] = {}


def _ivaluation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """p-adic number p^val * unit, unit a unit modulo p^prec.

    A value that is indistinguishable from zero at the working precision is
    stored with unit == 0; val then records the best known lower bound for
    the valuation ("valuation >= val").
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        check_odd_prime(p)
        if prec < 1:
            raise ValueError("precision must be >= 1")
        u = unit % p ** prec
        if u == 0:
            self.p, self.val, self.unit, self.prec = p, val + prec, 0, 0
            return
        shift = 0
        while u % p == 0:
            # absorbing stray p-powers costs relative precision
            u //= p
            shift += 1
        self.p = p
        self.val = val + shift
        self.prec = prec - shift
        self.unit = u % (p ** self.prec)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicNumber":
        """Zero known to valuation >= absprec."""
        z = cls.__new__(cls)
        z.p, z.val, z.unit, z.prec = p, absprec, 0, 0
        return z

    @classmethod
    def from_rational(cls, p: int, x, prec: int) -> "PadicNumber":
        """Embed an int or Fraction with prec significant p-adic digits."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        num, den = x.numerator, x.denominator
        vn, vd = _ivaluation(num, p), _ivaluation(den, p)
        num //= p ** vn
        den //= p ** vd
        m = p ** prec
        u = num * pow(den, -1, m) % m
        return cls(p, vn - vd, u, prec)

    @classmethod
    def from_rational_abs(cls, p: int, x, absprec: int) -> "PadicNumber":
        """Embed an int or Fraction known modulo p^absprec."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, absprec)
        num, den = x.numerator, x.denominator
        vn, vd = _ivaluation(num, p), _ivaluation(den, p)
        v = vn - vd
        if v >= absprec:
            return cls.zero(p, absprec)
        num //= p ** vn
        den //= p ** vd
        m = p ** (absprec - v)
        u = num * pow(den, -1, m) % m
        return cls(p, v, u, absprec - v)

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absprec(self) -> int:
        """Exponent of the modulus the value is known by: p^val*unit mod p^absprec."""
        return self.val + self.prec

    def ord(self) -> int:
        if self.unit == 0:
            raise ValueError("valuation undefined at this precision")
        return self.val

    def lift(self) -> Fraction:
        """The canonical representative p^val * unit as an exact rational."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def unit_digits(self) -> list[int]:
        digits = []
        u = self.unit
        for _ in range(self.prec):
            digits.append(u % self.p)
            u //= self.p
        return digits

    def residue(self, k: int = 1) -> int:
        """p^val * unit mod p^k, for 0 <= k <= absprec; requires val >= 0 knowledge."""
        if k > self.absprec:
            raise ValueError("precision exhausted")
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise ValueError("not a p-adic integer")
        return (self.unit * self.p ** self.val) % self.p ** k

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "PadicNumber"):
        if self.p != other.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicNumber.zero(self.p, self.absprec if self.unit else self.val)
            ref = self.prec if self.unit else 1
            return PadicNumber.from_rational(self.p, other, max(ref, 1))
        return NotImplemented

    def __add__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        p = self.p
        if self.unit == 0 and other.unit == 0:
            return PadicNumber.zero(p, min(self.val, other.val))
        if self.unit == 0:
            # adding an unknown multiple of p^val truncates the other summand
            return _truncate_abs(other, self.val)
        if other.unit == 0:
            return _truncate_abs(self, other.val)
        v = min(self.val, other.val)
        cap = min(self.absprec, other.absprec)
        if cap <= v:
            return PadicNumber.zero(p, cap)
        m = p ** (cap - v)
        s = (self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)) % m
        if s == 0:
            return PadicNumber.zero(p, cap)
        return PadicNumber(p, v, s, cap - v)

    __radd__ = __add__

    def __neg__(self) -> "PadicNumber":
        if self.unit == 0:
            return self
        return PadicNumber(self.p, self.val, -self.unit % self.p ** self.prec, self.prec)

    def __sub__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PadicNumber":
        return (-self) + other

    def __mul__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        p = self.p
        if self.unit == 0 or other.unit == 0:
            va = self.val if self.unit == 0 else self.ord()
            vb = other.val if other.unit == 0 else other.ord()
            return PadicNumber.zero(p, va + vb)
        prec = min(self.prec, other.prec)
        u = self.unit * other.unit % p ** prec
        return PadicNumber(p, self.val + other.val, u, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.unit == 0:
            raise ZeroDivisionError("inverse of (apparent) zero")
        u = pow(self.unit, -1, self.p ** self.prec)
        return PadicNumber(self.p, -self.val, u, self.prec)

    def __truediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        return self.inverse() * other

    def __pow__(self, e: int) -> "PadicNumber":
        if e < 0:
            return self.inverse() ** (-e)
        r = PadicNumber.from_rational(self.p, 1, self.prec if self.unit else 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other) -> bool:
        """Agreement at the common known precision."""
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.p != other.p:
            return False
        cap = min(self.absprec, other.absprec)
        d = self - other
        return d.unit == 0 and d.val >= cap

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    # -- display --------------------------------------------------------

    def __str__(self) -> str:
        if self.unit == 0:
            return f"O({self.p}^{self.val})"
        terms = []
        for i, d in enumerate(self.unit_digits()):
            if d == 0:
                continue
            if i == 0:
                terms.append(f"{d}")
            elif i == 1:
                terms.append(f"{d}*{self.p}" if d > 1 else f"{self.p}")
            else:
                terms.append(f"{d}*{self.p}^{i}" if d > 1 else f"{self.p}^{i}")
        body = " + ".join(terms) if terms else "0"
        head = "" if self.val == 0 else f"{self.p}^{self.val} * "
        return f"{head}({body}) mod {self.p}^{self.prec}"

    def __repr__(self) -> str:
        return f"PadicNumber(p={self.p}, val={self.val}, unit={self.unit}, prec={self.prec})"

    def to_json(self) -> dict:
        return {"p": self.p, "val": self.val, "unit": self.unit, "prec": self.prec}


def _truncate_abs(x: PadicNumber, absprec: int) -> PadicNumber:
    if x.unit == 0:
        return PadicNumber.zero(x.p, min(x.val, absprec))
    if absprec <= x.val:
        return PadicNumber.zero(x.p, absprec)
    return PadicNumber(x.p, x.val, x.unit, min(x.prec, absprec - x.val))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> int:
    ok = _PRIME_CACHE.get(p)
    if ok is None:
        ok = _PRIME_CACHE.setdefault(p, p != 2 and _is_prime(p))
    if not ok:
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


# -- logarithm / exponential / Teichmuller ------------------------------


def _log_one_unit(p: int, z: int, absprec: int) -> Fraction:
    """log(1+z) as an exact rational partial sum, valid mod p^absprec; p | z."""
    # term z^k/k has valuation >= k - log_p(k); k_max = absprec + log_p(absprec) + 2
    kmax = absprec + 2
    t = absprec
    while t:
        kmax += 1
        t //= p
    zred = z % p ** (absprec + kmax.bit_length() + 2)
    total = Fraction(0)
    zk = 1
    for k in range(1, kmax + 1):
        zk *= zred
        total += Fraction((-1) ** (k + 1) * zk, k)
    return total


def log_p(x: PadicNumber) -> PadicNumber:
    """Iwasawa logarithm: log(p) = 0, roots of unity are killed.

    The unit part u is pushed into 1+pZp via u^(p-1); the series result is
    divided back by p-1.
    """
    if x.unit == 0:
        raise ValueError("valuation undefined at this precision")
    p = x.p
    if x.prec <= 1:
        raise ValueError("precision exhausted")
    n = x.prec
    u1 = pow(x.unit, p - 1, p ** n)
    s = _log_one_unit(p, u1 - 1, n) / (p - 1)
    return PadicNumber.from_rational_abs(p, s, n)


def exp_p(x: PadicNumber) -> PadicNumber:
    """exp via the power series; requires valuation >= 1 (odd p)."""
    p = x.p
    if x.unit == 0:
        if x.val < 1:
            raise ValueError("exp divergent")
        return PadicNumber.from_rational_abs(p, 1, x.val)
    if x.val < 1:
        raise ValueError("exp divergent")
    a = x.absprec
    # ord(x^k/k!) >= k*val - (k-1)/(p-1); safe cutoff for val >= 1
    kmax = (a * (p - 1)) // (p - 2) + 2
    xl = (x.unit * p ** x.val) % p ** (a + kmax.bit_length() + 2)
    total = Fraction(1)
    term = Fraction(1)
    for k in range(1, kmax + 1):
        term = term * xl / k
        total += term
    return PadicNumber.from_rational_abs(p, total, a)


def teichmuller(x: PadicNumber) -> tuple[PadicNumber, PadicNumber]:
    """Split a unit as zeta * u1 with zeta^(p-1) = 1 and u1 in 1+pZp."""
    if x.unit == 0 or x.val != 0:
        raise ValueError("teichmuller lift needs a unit")
    p, n = x.p, x.prec
    m = p ** n
    z = x.unit % m
    for _ in range(n + 2):
        z1 = pow(z, p, m)
        if z1 == z:
            break
        z = z1
    zeta = PadicNumber(p, 0, z, n)
    return zeta, x / zeta


# -- homomorphisms Qp^x -> Qp -------------------------------------------


class Homomorphism:
    """lam = a*log + b*ord on Qp^x, coefficients exact rationals."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def log(cls) -> "Homomorphism":
        return cls(1, 0)

    @classmethod
    def ord(cls) -> "Homomorphism":
        return cls(0, 1)

    def __call__(self, x: PadicNumber) -> PadicNumber:
        return hom_eval(self, x)

    def __add__(self, other: "Homomorphism") -> "Homomorphism":
        return Homomorphism(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Homomorphism") -> "Homomorphism":
        return Homomorphism(self.a - other.a, self.b - other.b)

    def scale(self, c) -> "Homomorphism":
        return Homomorphism(self.a * c, self.b * c)

    def __eq__(self, other) -> bool:
        return isinstance(other, Homomorphism) and (self.a, self.b) == (other.a, other.b)

    def __repr__(self) -> str:
        return f"Homomorphism(a={self.a}, b={self.b})"


def hom_eval(lam: Homomorphism, x: PadicNumber) -> PadicNumber:
    """Evaluate a*log(x) + b*ord(x)."""
    v = x.ord()
    out = PadicNumber.from_rational_abs(x.p, lam.b * v, x.prec)
    if lam.a != 0:
        out = out + log_p(x) * lam.a
    return out


# -- dual numbers base + eps*e, e^2 = 0 ---------------------------------


def _one_like(x):
    if isinstance(x, PadicNumber):
        return PadicNumber.from_rational(x.p, 1, max(x.prec, 1))
    return Fraction(1)


def _inv(x):
    if isinstance(x, PadicNumber):
        return x.inverse()
    return 1 / Fraction(x)


class DualNumber:
    """base + eps*e with e^2 = 0; components may be Fraction or PadicNumber."""

    __slots__ = ("base", "eps")

    def __init__(self, base, eps):
        self.base = base
        self.eps = eps

    def __add__(self, other) -> "DualNumber":
        if not isinstance(other, DualNumber):
            return DualNumber(self.base + other, self.eps)
        return DualNumber(self.base + other.base, self.eps + other.eps)

    __radd__ = __add__

    def __neg__(self) -> "DualNumber":
        return DualNumber(-self.base, -self.eps)

    def __sub__(self, other) -> "DualNumber":
        return self + (-other if isinstance(other, DualNumber) else DualNumber(-other, 0 * self.eps))

    def __mul__(self, other) -> "DualNumber":
        if not isinstance(other, DualNumber):
            return DualNumber(self.base * other, self.eps * other)
        return DualNumber(self.base * other.base, self.base * other.eps + self.eps * other.base)

    __rmul__ = __mul__

    def inverse(self) -> "DualNumber":
        ib = _inv(self.base)
        return DualNumber(ib, -(ib * ib) * self.eps)

    def __truediv__(self, other) -> "DualNumber":
        if not isinstance(other, DualNumber):
            other = DualNumber(other, 0 * self.eps)
        return self * other.inverse()

    def __pow__(self, e: int) -> "DualNumber":
        if e < 0:
            return self.inverse() ** (-e)
        r = DualNumber(_one_like(self.base), 0 * self.eps)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualNumber):
            return NotImplemented
        return self.base == other.base and self.eps == other.eps

    def __repr__(self) -> str:
        return f"DualNumber({self.base!r}, {self.eps!r})"


__all__ = [
    "PadicNumber",
    "DualNumber",
    "Homomorphism",
    "log_p",
    "exp_p",
    "teichmuller",
    "hom_eval",
    "check_odd_prime",
]
