"""Sparse Laurent polynomials and the Hecke-polynomial factorizations.

Everything is computed in a commutative Laurent ring over named
variables, with a distinguished pair (l, q) obeying the eager rewrite
q^2 -> l so half-integral powers of the prime stay polynomial.  The
three Hecke polynomials are realized on parameters: H = prod(1 - b_i X)
for a general linear group of rank n, its dual with inverted roots, and
the self-dual degree-(2n+1) polynomial of the similitude group built
from the weights (u_1,..,u_n, 1, u_n^-1,..,u_1^-1).  The module's
checks expand both sides of the displayed factorizations, that of the
Siegel substitution u_i -> l b_i and of its block refinements, and
compare every coefficient.  A small formal model of the universal
characters at p (cyclotomic power, unit exponent, diamond index, and a
monomial in the U-operators) supports the parameter-list reindexing by
minimal coset representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .weyl import Weight, WeylElement, is_minimal_representative


class LaurentPoly:
    """Sparse Laurent polynomial: exponent vectors over named variables.

    When both "l" and "q" are among the variables, every term is kept in
    the canonical form with q-exponent 0 or 1, surplus powers of q
    converting to powers of l in pairs.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable name")
        collected = {}
        for exps, coef in (terms or {}).items():
            coef = Fraction(coef)
            if not coef:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables):
                raise ValueError("exponent vector length mismatch")
            exps = self._canonical(exps)
            collected[exps] = collected.get(exps, Fraction(0)) + coef
        self.terms = {e: c for e, c in collected.items() if c}

    def _canonical(self, exps):
        if "q" not in self.variables or "l" not in self.variables:
            return exps
        qi = self.variables.index("q")
        k = exps[qi]
        if 0 <= k <= 1:
            return exps
        out = list(exps)
        out[qi] = k % 2
        out[self.variables.index("l")] += (k - k % 2) // 2
        return tuple(out)

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, variables, value):
        return cls(variables, {(0,) * len(tuple(variables)): Fraction(value)})

    @classmethod
    def monomial(cls, variables, coefficient=1, powers=None):
        variables = tuple(variables)
        exps = [0] * len(variables)
        for name, e in (powers or {}).items():
            exps[variables.index(name)] += int(e)
        return cls(variables, {tuple(exps): Fraction(coefficient)})

    @classmethod
    def variable(cls, variables, name, power=1):
        return cls.monomial(variables, 1, {name: power})

    # -- ring structure -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.variables != self.variables:
                raise ValueError("variable universes differ")
            return other
        return LaurentPoly.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, Fraction(0)) + c
        return LaurentPoly(self.variables, merged)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return LaurentPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self._inverse_monomial() ** (-k)
        out = LaurentPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _inverse_monomial(self):
        if len(self.terms) != 1:
            raise ValueError("only monomials invert")
        (exps, coef), = self.terms.items()
        return LaurentPoly(self.variables, {tuple(-e for e in exps): 1 / coef})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.variables, other)
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    # -- substitution and views -----------------------------------------

    def substitute(self, mapping, variables=None):
        """Ring map sending each named variable to a polynomial.

        Unmapped variables pass through by name and must exist in the
        target universe.  A variable occurring with negative exponents
        needs an invertible (single-term) image.
        """
        target = tuple(variables) if variables is not None else self.variables
        images = {}
        for i, name in enumerate(self.variables):
            if name in mapping:
                value = mapping[name]
                if not isinstance(value, LaurentPoly):
                    value = LaurentPoly.constant(target, value)
                if value.variables != target:
                    raise ValueError("substitution image in the wrong universe")
                images[i] = value
            else:
                if name not in target:
                    raise ValueError(f"unmapped variable {name!r} not in target")
                images[i] = LaurentPoly.variable(target, name)
        out = LaurentPoly.constant(target, 0)
        for exps, coef in self.terms.items():
            term = LaurentPoly.constant(target, coef)
            for i, e in enumerate(exps):
                if e:
                    term = term * images[i] ** e
            out = out + term
        return out

    def coefficients_in(self, name):
        """Collect coefficients by the exponent of one variable."""
        idx = self.variables.index(name)
        rest = self.variables[:idx] + self.variables[idx + 1:]
        out = {}
        for exps, coef in self.terms.items():
            reduced = exps[:idx] + exps[idx + 1:]
            bucket = out.setdefault(exps[idx], {})
            bucket[reduced] = bucket.get(reduced, Fraction(0)) + coef
        return {k: LaurentPoly(rest, v) for k, v in sorted(out.items())}

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coef in sorted(self.terms.items()):
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.variables, exps)
                if e
            ]
            if not factors:
                pieces.append(str(coef))
            elif coef == 1:
                pieces.append(" ".join(factors))
            elif coef == -1:
                pieces.append("-" + " ".join(factors))
            else:
                pieces.append(f"{coef} * " + " ".join(factors))
        return " + ".join(pieces).replace("+ -", "- ")

    __repr__ = __str__


def _default_universe(names):
    return ("l", "q") + tuple(names) + ("X",)


def root_names(n, tag="b"):
    return tuple(f"{tag}{i}" for i in range(1, n + 1))


def hecke_H(n, names=None, variables=None):
    """prod_i (1 - b_i X): coefficient of X^i is (-1)^i e_i(b)."""
    names = tuple(names) if names is not None else root_names(n)
    if len(names) != n:
        raise ValueError("need one root variable per rank")
    variables = variables if variables is not None else _default_universe(names)
    x = LaurentPoly.variable(variables, "X")
    out = LaurentPoly.constant(variables, 1)
    for name in names:
        out = out * (1 - LaurentPoly.variable(variables, name) * x)
    return out


def hecke_H_dual(n, names=None, variables=None):
    """prod_i (1 - b_i^-1 X), the dual with inverted roots."""
    names = tuple(names) if names is not None else root_names(n)
    if len(names) != n:
        raise ValueError("need one root variable per rank")
    variables = variables if variables is not None else _default_universe(names)
    x = LaurentPoly.variable(variables, "X")
    out = LaurentPoly.constant(variables, 1)
    for name in names:
        out = out * (1 - LaurentPoly.variable(variables, name, -1) * x)
    return out


def hecke_Htilde(n, names=None, variables=None):
    """(1 - X) prod_i (1 - u_i X)(1 - u_i^-1 X), degree 2n+1 and self-dual."""
    names = tuple(names) if names is not None else root_names(n, "u")
    if len(names) != n:
        raise ValueError("need one root variable per rank")
    variables = variables if variables is not None else _default_universe(names)
    x = LaurentPoly.variable(variables, "X")
    out = 1 - x
    for name in names:
        out = out * (1 - LaurentPoly.variable(variables, name) * x)
        out = out * (1 - LaurentPoly.variable(variables, name, -1) * x)
    return out


def standard_weight_elementary(n, i, names=None, variables=None):
    """e_i of the 2n+1 standard weights (u_1,..,u_n, 1, u_n^-1,..,u_1^-1)."""
    names = tuple(names) if names is not None else root_names(n, "u")
    variables = variables if variables is not None else _default_universe(names)
    monomials = (
        [LaurentPoly.variable(variables, name) for name in names]
        + [LaurentPoly.constant(variables, 1)]
        + [LaurentPoly.variable(variables, name, -1) for name in reversed(names)]
    )
    out = LaurentPoly.constant(variables, 0)
    for chosen in combinations(monomials, i):
        term = LaurentPoly.constant(variables, 1)
        for f in chosen:
            term = term * f
        out = out + term
    return out


def hecke_H_definitional(n, names=None, variables=None):
    """The alternating-sum form sum_i (-1)^i q^{i(n-1)} e_i(a) X^i.

    Written on normalized parameters a_i; scaling a_i -> q^{1-n} b_i
    recovers the product form in the b variables.
    """
    names = tuple(names) if names is not None else root_names(n, "a")
    variables = variables if variables is not None else _default_universe(names)
    x = LaurentPoly.variable(variables, "X")
    q = LaurentPoly.variable(variables, "q")
    out = LaurentPoly.constant(variables, 0)
    for i in range(n + 1):
        e_i = _elementary(names, i, variables)
        out = out + (-1) ** i * q ** (i * (n - 1)) * e_i * x ** i
    return out


def hecke_H_dual_definitional(n, names=None, variables=None):
    """sum_i (-1)^i q^{-i(n-1)} e_n(a)^-1 e_{n-i}(a) X^i on parameters."""
    names = tuple(names) if names is not None else root_names(n, "a")
    variables = variables if variables is not None else _default_universe(names)
    x = LaurentPoly.variable(variables, "X")
    q = LaurentPoly.variable(variables, "q")
    top = LaurentPoly.monomial(variables, 1, {name: -1 for name in names})
    out = LaurentPoly.constant(variables, 0)
    for i in range(n + 1):
        e_rest = _elementary(names, n - i, variables)
        out = out + (-1) ** i * q ** (-i * (n - 1)) * top * e_rest * x ** i
    return out


def _elementary(names, i, variables):
    out = LaurentPoly.constant(variables, 0)
    for chosen in combinations(names, i):
        out = out + LaurentPoly.monomial(variables, 1, {name: 1 for name in chosen})
    return out


# -- factorization checks -----------------------------------------------


def _compare(lhs, rhs):
    idx = lhs.variables.index("X")
    rest = lhs.variables[:idx] + lhs.variables[idx + 1:]
    zero = LaurentPoly.constant(rest, 0)
    left = lhs.coefficients_in("X")
    right = rhs.coefficients_in("X")
    degrees = sorted(set(left) | set(right))
    mismatched = [
        k for k in degrees if left.get(k, zero) != right.get(k, zero)
    ]
    return degrees, mismatched


def satake_identity_check(n):
    """Expand u_i -> l b_i in the degree-(2n+1) polynomial and compare.

    The target is (1 - X) H(l X) H_dual(l^-1 X); the report lists the
    X-degrees compared and any mismatches.
    """
    if not 1 <= n <= 6:
        raise ValueError("rank must lie in 1..6")
    u_names = root_names(n, "u")
    b_names = root_names(n, "b")
    variables = _default_universe(b_names)
    ell = LaurentPoly.variable(variables, "l")
    x = LaurentPoly.variable(variables, "X")
    mapping = {
        f"u{i}": ell * LaurentPoly.variable(variables, f"b{i}")
        for i in range(1, n + 1)
    }
    lhs = hecke_Htilde(n, u_names).substitute(mapping, variables)
    rhs = (
        (1 - x)
        * hecke_H(n, b_names, variables).substitute({"X": ell * x})
        * hecke_H_dual(n, b_names, variables).substitute({"X": ell ** -1 * x})
    )
    degrees, mismatched = _compare(lhs, rhs)
    return {
        "n": n,
        "substitution": "u_i -> l * b_i",
        "degrees_checked": degrees,
        "coefficients_checked": len(degrees),
        "mismatched_degrees": mismatched,
        "passed": not mismatched and len(degrees) == 2 * n + 2,
    }


def parabolic_satake_check(n, partition):
    """Block refinement of the factorization for a partition of j <= n.

    Block k of size j_k (cumulative J_k) gets its own roots at the shift
    l^{n+1-J_k}; the residual rank n-j keeps similitude-type roots; the
    target multiplies the smaller self-dual polynomial by the shifted
    block polynomials and their duals in reverse order.
    """
    if not 0 <= n <= 4:
        raise ValueError("rank must lie in 0..4")
    partition = tuple(int(v) for v in partition)
    if any(v < 1 for v in partition):
        raise ValueError("partition parts must be positive")
    j = sum(partition)
    if j > n:
        raise ValueError("partition exceeds the rank")

    block_names = [
        tuple(f"b{k}_{r}" for r in range(1, size + 1))
        for k, size in enumerate(partition, start=1)
    ]
    rest_names = root_names(n - j, "v")
    flat = tuple(name for block in block_names for name in block)
    variables = _default_universe(flat + rest_names)
    ell = LaurentPoly.variable(variables, "l")
    x = LaurentPoly.variable(variables, "X")

    mapping = {}
    cumulative = 0
    for k, size in enumerate(partition):
        for r in range(1, size + 1):
            shift = n + 1 - (cumulative + size)
            mapping[f"u{cumulative + r}"] = ell ** shift * LaurentPoly.variable(
                variables, block_names[k][r - 1]
            )
        cumulative += size
    for i in range(1, n - j + 1):
        mapping[f"u{j + i}"] = LaurentPoly.variable(variables, f"v{i}")
    lhs = hecke_Htilde(n, root_names(n, "u")).substitute(mapping, variables)

    rhs = hecke_Htilde(n - j, rest_names, variables)
    cumulative = 0
    for k, size in enumerate(partition):
        cumulative += size
        shifted = hecke_H(size, block_names[k], variables)
        rhs = rhs * shifted.substitute({"X": ell ** (n + 1 - cumulative) * x})
    for k in reversed(range(len(partition))):
        cumulative = sum(partition[: k + 1])
        dual = hecke_H_dual(partition[k], block_names[k], variables)
        rhs = rhs * dual.substitute({"X": ell ** (cumulative - 1 - n) * x})

    degrees, mismatched = _compare(lhs, rhs)
    return {
        "n": n,
        "partition": list(partition),
        "degrees_checked": degrees,
        "coefficients_checked": len(degrees),
        "mismatched_degrees": mismatched,
        "passed": not mismatched and len(degrees) == 2 * n + 2,
    }


# -- universal character bookkeeping ------------------------------------


@dataclass(frozen=True)
class UniversalCharacter:
    """Formal character data at p.

    The value at a unit u is omega^omega_power times u^unit_power times
    the listed diamond operators; the value at the uniformizer is
    omega^omega_power times the recorded monomial in the U-operators.
    """

    label: str
    omega_power: int
    unit_power: int
    diamonds: tuple[tuple[int, int], ...] = ()
    frobenius: tuple[tuple[str, int], ...] = ()

    def data(self):
        """Identity-blind key: everything except the label."""
        return (self.omega_power, self.unit_power, self.diamonds, self.frobenius)

    def is_trivial(self) -> bool:
        return self.data() == (0, 0, (), ())

    def art_u_weight(self) -> int:
        """Total exponent of u on units, reading the cyclotomic character
        as u and the diamond action as trivial."""
        return self.omega_power + self.unit_power

    def cyclotomic_twist(self, k: int) -> "UniversalCharacter":
        return UniversalCharacter(
            f"{self.label}(w^{k:+d})",
            self.omega_power + k,
            self.unit_power,
            self.diamonds,
            self.frobenius,
        )

    def inverse(self) -> "UniversalCharacter":
        return UniversalCharacter(
            f"{self.label}^-1",
            -self.omega_power,
            -self.unit_power,
            _merge_pairs([(i, -e) for i, e in self.diamonds]),
            _merge_pairs([(s, -e) for s, e in self.frobenius]),
        )

    def __mul__(self, other: "UniversalCharacter") -> "UniversalCharacter":
        return UniversalCharacter(
            f"{self.label}*{other.label}",
            self.omega_power + other.omega_power,
            self.unit_power + other.unit_power,
            _merge_pairs(list(self.diamonds) + list(other.diamonds)),
            _merge_pairs(list(self.frobenius) + list(other.frobenius)),
        )


def _merge_pairs(pairs):
    merged = {}
    for key, e in pairs:
        merged[key] = merged.get(key, 0) + e
    return tuple(sorted((k, e) for k, e in merged.items() if e))


def _frobenius_monomial(*factors):
    # drop the index-0 operator: it is the identity double coset
    return _merge_pairs([(s, e) for s, e in factors if not s.endswith("0")])


@dataclass(frozen=True)
class CharacterFamily:
    """The n lower-rank characters and the 2n+1 full-rank ones at a weight."""

    n: int
    weight: Weight
    chi: tuple[UniversalCharacter, ...]
    psi: tuple[UniversalCharacter, ...]

    def zeta(self) -> tuple[UniversalCharacter, ...]:
        """The 2n-parameter list: chi twisted down, then reversed inverses
        twisted up."""
        first = tuple(c.cyclotomic_twist(-1) for c in self.chi)
        second = tuple(
            self.chi[self.n - k].inverse().cyclotomic_twist(1)
            for k in range(1, self.n + 1)
        )
        return first + second

    def reindex(self, w: WeylElement) -> tuple[UniversalCharacter, ...]:
        """Reorder the 2n parameters by a minimal coset representative."""
        if w.n != self.n:
            raise ValueError("rank mismatch")
        if not is_minimal_representative(w):
            raise ValueError("not a minimal coset representative")
        zeta = self.zeta()
        return tuple(zeta[w(k) - 1] for k in range(1, 2 * self.n + 1))


def universal_characters(n: int, weight) -> CharacterFamily:
    """Build the character family attached to an n-entry weight."""
    if isinstance(weight, Weight):
        lam = weight
    else:
        lam = Weight(tuple(weight), 0)
    if lam.n != n:
        raise ValueError("weight rank mismatch")
    entries = lam.entries

    chi = []
    for i in range(1, n + 1):
        chi.append(
            UniversalCharacter(
                f"chi_{i}",
                omega_power=1 - i,
                unit_power=-entries[n - i],
                diamonds=((i, 1),),
                frobenius=_frobenius_monomial((f"U{i}", 1), (f"U{i - 1}", -1)),
            )
        )

    psi = []
    for i in range(1, 2 * n + 2):
        if i <= n:
            psi.append(
                UniversalCharacter(
                    f"psi_{i}",
                    omega_power=n + 1 - i,
                    unit_power=entries[i - 1],
                    diamonds=((n + 1 - i, -1),),
                    frobenius=_frobenius_monomial(
                        (f"Ut{n - i}", 1), (f"Ut{n + 1 - i}", -1)
                    ),
                )
            )
        elif i == n + 1:
            psi.append(UniversalCharacter(f"psi_{i}", 0, 0))
        else:
            psi.append(
                UniversalCharacter(
                    f"psi_{i}",
                    omega_power=n + 1 - i,
                    unit_power=-entries[2 * n + 1 - i],
                    diamonds=((i - n - 1, 1),),
                    frobenius=_frobenius_monomial(
                        (f"Ut{i - n - 1}", 1), (f"Ut{i - n - 2}", -1)
                    ),
                )
            )
    return CharacterFamily(n, lam, tuple(chi), tuple(psi))
