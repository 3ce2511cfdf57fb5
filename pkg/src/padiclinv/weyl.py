"""Signed-permutation Weyl combinatorics for the rank-n similitude group.

The Weyl group lives inside S_{2n} as the permutations w with
w(i) + w(2n+1-i) = 2n+1.  Subsets B of {1,..,n} label the 2^n
minimal-length representatives w_B of the parabolic quotient attached
to the Siegel Levi; their lengths realise the Poincare polynomial
prod_i (1 + x^i).  On top of that sit the shifted star action on
weights, a constructive selection of a dominant weight family with one
member per cohomological degree, a pairwise audit showing distinct
representatives never produce clashing weights, and a prime search
certifying characters whose values have large multiplicative order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import isqrt


@dataclass(frozen=True)
class Weight:
    """Integer weight (entries_1, .., entries_n; similitude)."""

    entries: tuple[int, ...]
    similitude: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if not self.entries:
            raise ValueError("weight needs at least one entry")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __add__(self, other: "Weight") -> "Weight":
        if other.n != self.n:
            raise ValueError("weight rank mismatch")
        return Weight(
            tuple(a + b for a, b in zip(self.entries, other.entries)),
            self.similitude + other.similitude,
        )

    def __sub__(self, other: "Weight") -> "Weight":
        if other.n != self.n:
            raise ValueError("weight rank mismatch")
        return Weight(
            tuple(a - b for a, b in zip(self.entries, other.entries)),
            self.similitude - other.similitude,
        )

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.entries), -self.similitude)

    def offset(self, a: int) -> "Weight":
        """Shift every entry by a, keeping the similitude coordinate."""
        return Weight(tuple(e + a for e in self.entries), self.similitude)

    def is_dominant(self) -> bool:
        """Weakly decreasing entries ending at a nonnegative one."""
        return self.is_levi_dominant() and self.entries[-1] >= 0

    def is_levi_dominant(self) -> bool:
        return all(a >= b for a, b in zip(self.entries, self.entries[1:]))

    def is_sufficiently_regular(self, gap: int | None = None) -> bool:
        """Consecutive gaps and the last entry at least `gap` (default n).

        The weaker threshold gap=1 (plain regularity) is the other choice
        consumers may ask for; the default is the stronger one.
        """
        if gap is None:
            gap = self.n
        if any(a - b < gap for a, b in zip(self.entries, self.entries[1:])):
            return False
        return self.entries[-1] >= gap

    def to_json(self) -> dict:
        return {"entries": list(self.entries), "similitude": self.similitude}


def rho(n: int) -> Weight:
    """Half-sum surrogate (n, n-1, .., 1; 0); similitude pinned to zero."""
    return Weight(tuple(range(n, 0, -1)), 0)


@dataclass(frozen=True)
class WeylElement:
    """Permutation of {1,..,2n} commuting with i -> 2n+1-i, one-line form."""

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(c) for c in self.perm))
        two_n = len(self.perm)
        if two_n == 0 or two_n % 2:
            raise ValueError("one-line notation must have even positive length")
        if sorted(self.perm) != list(range(1, two_n + 1)):
            raise ValueError("not a permutation of {1,..,2n}")
        for i in range(1, two_n + 1):
            if self.perm[i - 1] + self.perm[two_n - i] != two_n + 1:
                raise ValueError("permutation breaks the pairing i <-> 2n+1-i")

    @property
    def n(self) -> int:
        return len(self.perm) // 2

    def __call__(self, i: int) -> int:
        two_n = len(self.perm)
        if not 1 <= i <= two_n:
            raise ValueError("argument outside {1,..,2n}")
        return self.perm[i - 1]

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(range(1, 2 * n + 1)))

    def is_identity(self) -> bool:
        return all(self.perm[i] == i + 1 for i in range(len(self.perm)))

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, c in enumerate(self.perm, start=1):
            inv[c - 1] = i
        return WeylElement(tuple(inv))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """Composition: (self * other)(i) = self(other(i))."""
        if other.n != self.n:
            raise ValueError("rank mismatch")
        return WeylElement(tuple(self.perm[c - 1] for c in other.perm))

    def _signed_images(self, entries: tuple[int, ...]) -> tuple[int, ...]:
        # Acting on a coordinate vector: slot i receives the entry sitting
        # at the preimage of i, with entries at slots past n read as the
        # negated mirror entry.
        n = self.n
        ext = list(entries) + [-e for e in reversed(entries)]
        inv = self.inverse().perm
        return tuple(ext[inv[i] - 1] for i in range(n))

    def act(self, weight: Weight) -> Weight:
        """Plain (unshifted) action on a weight.

        Entries move by the signed permutation; each sign flip feeds the
        flipped entry into the similitude coordinate, matching how the
        torus character transforms.
        """
        if weight.n != self.n:
            raise ValueError("rank mismatch")
        n = self.n
        inv = self.inverse().perm
        sim = weight.similitude
        for i in range(n):
            if inv[i] > n:
                sim += weight.entries[2 * n - inv[i]]
        return Weight(self._signed_images(weight.entries), sim)

    def length(self) -> int:
        """Inversion count against the type-C positive system."""
        count = 0
        for root in _positive_roots(self.n):
            image = self._signed_images(root)
            first = next(e for e in image if e)
            if first < 0:
                count += 1
        return count

    def one_line(self) -> list[int]:
        return list(self.perm)


@lru_cache(maxsize=None)
def _positive_roots(n: int) -> tuple[tuple[int, ...], ...]:
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i], e[j] = 1, -1
            roots.append(tuple(e))
            e[j] = 1
            roots.append(tuple(e))
        e = [0] * n
        e[i] = 2
        roots.append(tuple(e))
    return tuple(roots)


def long_element(n: int) -> WeylElement:
    """The order-reversing permutation i -> 2n+1-i (all signs flipped)."""
    return WeylElement(tuple(range(2 * n, 0, -1)))


def long_levi_element(n: int) -> WeylElement:
    """Longest element of the Levi factor: reverses each block of n."""
    perm = [n + 1 - i for i in range(1, n + 1)]
    perm += [3 * n + 1 - c for c in range(n + 1, 2 * n + 1)]
    return WeylElement(tuple(perm))


def enumerate_weyl(n: int) -> list[WeylElement]:
    """Every signed permutation of rank n (2^n n! elements)."""
    out = []
    for sigma in permutations(range(1, n + 1)):
        for mask in range(1 << n):
            perm = [0] * (2 * n)
            for i in range(n):
                image = sigma[i] if not mask >> i & 1 else 2 * n + 1 - sigma[i]
                perm[i] = image
                perm[2 * n - 1 - i] = 2 * n + 1 - image
            out.append(WeylElement(tuple(perm)))
    return out


def coset_representative(subset, n: int) -> WeylElement:
    """w_B: members of B head to the flipped block, the rest stay in order."""
    members = sorted(set(subset))
    if members and not (1 <= members[0] and members[-1] <= n):
        raise ValueError("subset must sit inside {1,..,n}")
    rest = [c for c in range(1, n + 1) if c not in set(members)]
    perm = [0] * (2 * n)
    for i, b in enumerate(members, start=1):
        perm[b - 1] = n + i
    for i, b in enumerate(rest, start=1):
        perm[b - 1] = i
    for c in range(n + 1, 2 * n + 1):
        perm[c - 1] = 2 * n + 1 - perm[2 * n - c]
    return WeylElement(tuple(perm))


def is_minimal_representative(w: WeylElement) -> bool:
    """Increasing-preimage criterion: w^-1(1) < ... < w^-1(n)."""
    inv = w.inverse().perm
    return all(inv[i] < inv[i + 1] for i in range(w.n - 1))


@lru_cache(maxsize=None)
def enumerate_MW(n: int) -> tuple[tuple[tuple[int, ...], WeylElement, int], ...]:
    """All 2^n pairs (B, w_B) with the length sum(n+1-b for b in B)."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    out = []
    for size in range(n + 1):
        for subset in combinations(range(1, n + 1), size):
            w = coset_representative(subset, n)
            out.append((subset, w, w.length()))
    return tuple(out)


def star_action(w: WeylElement, weight: Weight) -> Weight:
    """Shifted action w . (weight + rho) - rho."""
    shift = rho(w.n)
    return w.act(weight + shift) - shift


# -- dominant weight family, one member per degree ----------------------


def subset_parameters(j: int, n: int) -> tuple[int, int]:
    """Smallest (y, z), 0 <= y < z <= n+1, with (y+1)(n+1) - y(y+1)/2 - z = j."""
    for y in range(n + 1):
        z = (y + 1) * (n + 1) - y * (y + 1) // 2 - j
        if y < z <= n + 1:
            return y, z
    raise ValueError("degree out of range 0..n(n+1)/2")


def degree_subset(j: int, n: int) -> tuple[int, ...]:
    """The subset {1,..,y} or {1,..,y, z} whose representative has length j."""
    y, z = subset_parameters(j, n)
    members = list(range(1, y + 1))
    if z <= n:
        members.append(z)
    return tuple(members)


def _entry_bound(n: int) -> int:
    """Strict bound on |entries| of w^-1 . rho - rho over the 2^n reps."""
    worst = 0
    base = rho(n)
    for _, w, _ in enumerate_MW(n):
        moved = w.inverse().act(base) - base
        worst = max(worst, max(abs(e) for e in moved.entries))
    return worst + 1


def choose_weights(n: int, m: int, p: int, residue_card: int | None = None) -> dict:
    """Build a dominant, sufficiently regular weight for every degree 0..d.

    The base weight has entries (2^n - 2^i) * M with M the least multiple
    of 8 n (p-1) u strictly above 8(C+n), where u counts units in the
    depth-m residue ring and C exactly bounds the rho displacements.  For
    each degree j the returned offset a_j is congruent to M/8 modulo M/2
    and lands in an interval guaranteeing that twisting back by the
    degree-j representative yields a dominant, sufficiently regular
    weight; both properties are checked, never assumed.
    """
    if n < 2:
        raise ValueError("rank must be at least 2")
    if m < 1:
        raise ValueError("depth must be at least 1")
    if p < 3 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    if residue_card is None:
        residue_card = p
    card, power = residue_card, 0
    while card % p == 0:
        card //= p
        power += 1
    if card != 1 or power < 1:
        raise ValueError("residue field cardinality must be a power of p")

    d = n * (n + 1) // 2
    units = residue_card ** (m - 1) * (residue_card - 1)
    divisor = 8 * n * (p - 1) * units
    bound = 8 * (_entry_bound(n) + n)
    big_m = divisor * (bound // divisor + 1)
    half, eighth = big_m // 2, big_m // 8
    lam = tuple((2 ** n - 2 ** i) * big_m for i in range(1, n + 1))

    reps = {subset: (w, length) for subset, w, length in enumerate_MW(n)}
    complement = {
        subset: tuple(c for c in range(1, n + 1) if c not in subset)
        for subset in reps
    }

    steps = []
    for j in range(d + 1):
        y, z = subset_parameters(j, n)
        subset = degree_subset(j, n)
        x_j, x_len = reps[subset]
        w_j, w_len = reps[complement[subset]]
        if x_len != j or w_len != d - j:
            raise RuntimeError("length bookkeeping broke")
        if z == n + 1:
            low = -(2 ** (n + 1) - 2 ** (n + 1 - y)) * half
        elif y == 0:
            low = -(2 ** n - 2 ** (z - 1)) * half
        else:
            low = -(2 ** (n + 1) - 2 ** (n - y) - 2 ** (z - y - 1)) * half
        a_j = low + eighth
        twisted = star_action(x_j.inverse(), Weight(lam, 0).offset(a_j))
        if not (twisted.is_dominant() and twisted.is_sufficiently_regular()):
            raise RuntimeError("selected weight failed the dominance audit")
        steps.append(
            {
                "degree": j,
                "subset": list(subset),
                "offset": a_j,
                "x": x_j.one_line(),
                "w": w_j.one_line(),
                "w_length": w_len,
                "weight": twisted.to_json(),
            }
        )
    return {
        "n": n,
        "depth": m,
        "p": p,
        "residue_card": residue_card,
        "entry_bound": _entry_bound(n),
        "scale": big_m,
        "base_weight": list(lam),
        "steps": steps,
    }


# -- pairwise weight clash audit ----------------------------------------


def weight_clash_check(weight: Weight, n: int | None = None) -> dict:
    """Audit that distinct representatives never clash after the shift.

    For every ordered pair of distinct subsets B, C the twisted weights
    must satisfy star(w_C) != star(w_B) + (n-1,..,n-1) on the first n
    coordinates.  Each pair is also classified into one of three cases by
    comparing complement sizes, and the single-coordinate inequality that
    the case hinges on is recorded; a broken case inequality is flagged
    even when the full vectors still differ elsewhere.
    """
    if n is None:
        n = weight.n
    if weight.n != n:
        raise ValueError("weight rank mismatch")
    shift = rho(n)
    shifted = (weight + shift).entries
    reps = enumerate_MW(n)
    twisted = {
        subset: star_action(w, weight).entries for subset, w, _ in reps
    }
    complements = {
        subset: tuple(c for c in range(1, n + 1) if c not in subset)
        for subset, _, _ in reps
    }

    clashes = []
    broken = []
    for b_set, _, _ in reps:
        for c_set, _, _ in reps:
            if b_set == c_set:
                continue
            bc, cc = complements[b_set], complements[c_set]
            target = tuple(e + (n - 1) for e in twisted[b_set])
            if twisted[c_set] == target:
                clashes.append({"first": list(b_set), "second": list(c_set)})
            if len(cc) > len(bc):
                case = "second complement longer"
                i = len(bc) + 1
                lhs = shifted[cc[i - 1] - 1]
                rhs = -shifted[b_set[n - i] - 1] + (n - 1)
            elif len(bc) > len(cc):
                case = "first complement longer"
                i = len(cc) + 1
                lhs = -shifted[c_set[n - i] - 1]
                rhs = shifted[bc[i - 1] - 1] + (n - 1)
            else:
                case = "equal complements"
                i = next(k for k in range(1, len(bc) + 1) if bc[k - 1] != cc[k - 1])
                lhs = shifted[cc[i - 1] - 1]
                rhs = shifted[bc[i - 1] - 1] + (n - 1)
            if lhs == rhs:
                broken.append(
                    {
                        "first": list(b_set),
                        "second": list(c_set),
                        "case": case,
                        "coordinate": i,
                        "value": lhs,
                    }
                )
    return {
        "n": n,
        "weight": weight.to_json(),
        "sufficiently_regular": weight.is_sufficiently_regular(),
        "pairs_checked": len(reps) * (len(reps) - 1),
        "clashes": clashes,
        "case_inequality_failures": broken,
        "passed": not clashes,
    }


# -- prime search for characters of large order -------------------------


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    for f in range(3, isqrt(q) + 1, 2):
        if q % f == 0:
            return False
    return True


def _factor(value: int) -> dict:
    out = {}
    f = 2
    while f * f <= value:
        while value % f == 0:
            out[f] = out.get(f, 0) + 1
            value //= f
        f += 1 if f == 2 else 2
    if value > 1:
        out[value] = out.get(value, 0) + 1
    return out


def multiplicative_order(a: int, q: int) -> int:
    """Order of a modulo q for prime q not dividing a."""
    a %= q
    if a == 0:
        raise ValueError("argument divisible by the modulus")
    order = q - 1
    for f in _factor(q - 1):
        while order % f == 0 and pow(a, order // f, q) == 1:
            order //= f
    return order


def character_avoidance(s0, ell: int, orders, p: int | None = None,
                        cap: int = 10 ** 8) -> tuple[int, dict]:
    """Least prime q giving both ell and p large order modulo q.

    `orders` lists the multiplicative orders of the finite set of
    residue-field elements to avoid; with M their maximum, the search
    wants an odd prime q coprime to ell*p, not 1 mod p, and larger than
    both ell^M and p^M.  Then the orders a, b of ell and p modulo q are
    automatically coprime to p and exceed M, so a character of conductor
    q sends the two Frobenius classes outside the avoided set.
    """
    s0 = sorted(set(int(v) for v in s0))
    if not s0:
        raise ValueError("the base prime set is empty")
    for v in s0:
        if not _is_prime(v):
            raise ValueError("base set must consist of primes")
    if p is None:
        if len(s0) != 1:
            raise ValueError("ambiguous base set: pass p explicitly")
        p = s0[0]
    if p not in s0:
        raise ValueError("p must belong to the base set")
    if p % 2 == 0 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    if not _is_prime(ell):
        raise ValueError("ell must be prime")
    if ell in s0:
        raise ValueError("ell must avoid the base set")
    orders = sorted(set(int(v) for v in orders))
    if not orders or orders[0] < 1:
        raise ValueError("orders must be positive integers")
    biggest = orders[-1]

    q = max(ell ** biggest, p ** biggest) + 1
    while True:
        if q > cap:
            raise ValueError("no qualifying prime below the search cap")
        if _is_prime(q) and q % p != 1 and ell % q != 0 and p % q != 0:
            break
        q += 1
    a = multiplicative_order(ell, q)
    b = multiplicative_order(p, q)
    certificate = {
        "q": q,
        "p": p,
        "ell": ell,
        "avoided_order_bound": biggest,
        "order_of_ell": a,
        "order_of_p": b,
        "orders_exceed_bound": a > biggest and b > biggest,
        "orders_coprime_to_p": a % p != 0 and b % p != 0,
        "q_not_one_mod_p": q % p != 1,
        "powers_below_q": ell ** biggest < q and p ** biggest < q,
    }
    return q, certificate
