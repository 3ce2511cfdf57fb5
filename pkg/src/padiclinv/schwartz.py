"""Compactly supported locally constant functions on Qp^2.

A function is a finite sum of coefficient * ch(box), where a box is a
product of cosets (a + p^k1 Zp) x (b + p^k2 Zp).  All boxes of one
function share the same level pair (k1, k2); addition refines to a
common level.  GL2 acts on row vectors by (h.f)(v) = f(v*h).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _coset_rep(a: Fraction, p: int, k: int) -> Fraction:
    """Canonical representative of a + p^k Zp inside p^{-M}Z, 0 <= rep < p^k."""
    den = a.denominator
    m = 0
    while den % p == 0:
        den //= p
        m += 1
    # write a = r / (p^m d) with d a unit; reduce r d^{-1} modulo p^{k+m}
    m_use = max(m, -k, 0)
    mod = p ** (k + m_use)
    r = a.numerator * p ** (m_use - m)
    if den != 1 and mod > 1:
        r = r * pow(den, -1, mod)
    return Fraction(r % mod, p ** m_use)


@dataclass(frozen=True)
class SchwartzFunction:
    p: int
    k1: int
    k2: int
    table: tuple  # sorted tuple of ((a, b), coeff), coeff nonzero

    @classmethod
    def from_boxes(cls, p: int, k1: int, k2: int, boxes: dict) -> "SchwartzFunction":
        acc = {}
        for (a, b), c in boxes.items():
            key = (_coset_rep(Fraction(a), p, k1), _coset_rep(Fraction(b), p, k2))
            acc[key] = acc.get(key, 0) + c
        items = tuple(sorted((k, c) for k, c in acc.items() if c != 0))
        return cls(p, k1, k2, items)

    @classmethod
    def zero(cls, p: int) -> "SchwartzFunction":
        return cls(p, 0, 0, ())

    @classmethod
    def indicator_pair(cls, p: int, n: int) -> "SchwartzFunction":
        """ch(p^n Zp x (1 + p^n Zp))."""
        return cls.from_boxes(p, n, n, {(0, 1): 1})

    def refine(self, k1: int, k2: int) -> "SchwartzFunction":
        if k1 < self.k1 or k2 < self.k2:
            raise ValueError("refinement must not coarsen")
        p = self.p
        boxes = {}
        for (a, b), c in self.table:
            for i in range(p ** (k1 - self.k1)):
                for j in range(p ** (k2 - self.k2)):
                    boxes[(a + i * p ** self.k1, b + j * p ** self.k2)] = c
        return SchwartzFunction.from_boxes(p, k1, k2, boxes)

    def __add__(self, other: "SchwartzFunction") -> "SchwartzFunction":
        if self.p != other.p:
            raise ValueError("prime mismatch")
        if not self.table:
            return other
        if not other.table:
            return self
        k1, k2 = max(self.k1, other.k1), max(self.k2, other.k2)
        a, b = self.refine(k1, k2), other.refine(k1, k2)
        boxes = dict(a.table)
        for key, c in b.table:
            boxes[key] = boxes.get(key, 0) + c
        return SchwartzFunction.from_boxes(self.p, k1, k2, boxes)

    def scale(self, c) -> "SchwartzFunction":
        if c == 0:
            return SchwartzFunction.zero(self.p)
        return SchwartzFunction(self.p, self.k1, self.k2, tuple((k, c * v) for k, v in self.table))

    def __sub__(self, other: "SchwartzFunction") -> "SchwartzFunction":
        return self + other.scale(-1)

    def translate(self, h) -> "SchwartzFunction":
        """(h.f)(v) = f(v h): pull boxes back through the inverse matrix.

        h is a 2x2 matrix of Fractions with nonzero determinant; box images
        under v -> v h^{-1} must again be boxes, which holds for the
        integral and diagonal-rescaling elements used here.
        """
        (h11, h12), (h21, h22) = h
        det = h11 * h22 - h12 * h21
        if det == 0:
            raise ValueError("singular translation matrix")
        inv = ((h22 / det, -h12 / det), (-h21 / det, h11 / det))
        p = self.p
        out_boxes = {}
        # image of (a + p^k1 Zp, b + p^k2 Zp) under right mult by inv
        (i11, i12), (i21, i22) = inv
        lv1 = min(
            _vp(c, p) + k for c, k in ((i11, self.k1), (i21, self.k2)) if c != 0
        )
        lv2 = min(
            _vp(c, p) + k for c, k in ((i12, self.k1), (i22, self.k2)) if c != 0
        )
        # the image lattice p^k1 Zp * row1(inv) + p^k2 Zp * row2(inv) must be
        # a product of ideals for the box picture to persist
        lat_ok = _lattice_is_box(inv, self.k1, self.k2, p)
        if not lat_ok:
            raise ValueError("translation does not preserve the box grid")
        for (a, b), c in self.table:
            x = a * i11 + b * i21
            y = a * i12 + b * i22
            key = (x, y)
            out_boxes[key] = out_boxes.get(key, 0) + c
        return SchwartzFunction.from_boxes(p, lv1, lv2, out_boxes)

    def eval(self, x, y):
        x, y = Fraction(x), Fraction(y)
        try:
            key = (_coset_rep(x, self.p, self.k1), _coset_rep(y, self.p, self.k2))
        except ValueError:
            return 0
        for k, c in self.table:
            if k == key:
                return c
        return 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        if self.p != other.p:
            return False
        k1, k2 = max(self.k1, other.k1), max(self.k2, other.k2)
        return self.refine(k1, k2).table == other.refine(k1, k2).table


def _lattice_is_box(inv, k1: int, k2: int, p: int) -> bool:
    """Does p^k1 Zp*(row 1) + p^k2 Zp*(row 2) equal p^a Zp x p^b Zp?"""
    (i11, i12), (i21, i22) = inv
    v = lambda c, k: (10 ** 9 if c == 0 else _vp(c, p) + k)
    a = min(v(i11, k1), v(i21, k2))
    b = min(v(i12, k1), v(i22, k2))
    det_v = _vp(i11 * i22 - i12 * i21, p)
    return a + b == det_v + k1 + k2


def vbc(p: int, n: int, b: int, c: int):
    """The 2x2 matrix (1, 0; p^n b, 1 + p^n c)."""
    return ((Fraction(1), Fraction(0)), (Fraction(p ** n * b), Fraction(1 + p ** n * c)))


def mat2_mul(a, b):
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2)
    )


def schwartz_trace(phi: SchwartzFunction, reps) -> SchwartzFunction:
    out = SchwartzFunction.zero(phi.p)
    for h in reps:
        out = out + phi.translate(h)
    return out
