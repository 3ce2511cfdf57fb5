"""Bruhat cell decomposition g = pbar * w * k for GL3 over Qp.

pbar lies in the lower-triangular parabolic P1bar (first row (a,0,0)),
w is one of three permutation matrices, and k is an Iwahori-shaped
unipotent factor.  The section g -> pbar feeds the branching cocycles
c_{1,lam} and c_{2,lam} attached to a homomorphism lam: Qp^x -> Qp.

Matrices are 3x3 tuples of tuples; entries are Fractions (exact) or
PadicNumbers (finite precision).  Cell selection demands certainty: an
undecidable valuation comparison raises "ambiguous cell".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import Homomorphism, PadicNumber, hom_eval

Matrix = tuple[tuple, ...]
_INF = float("inf")


# -- 3x3 matrix helpers -------------------------------------------------


def mat(rows) -> Matrix:
    return tuple(
        tuple(e if isinstance(e, (Fraction, PadicNumber)) else Fraction(e) for e in row) for row in rows
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = a[i][0] * b[0][j]
            acc = acc + a[i][1] * b[1][j]
            acc = acc + a[i][2] * b[2][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_det(a: Matrix):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def _entry_inv(x):
    if isinstance(x, PadicNumber):
        return x.inverse()
    return 1 / Fraction(x)


def mat_inv(a: Matrix) -> Matrix:
    d = _entry_inv(mat_det(a))
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            row.append(minor * d if (i + j) % 2 == 0 else -minor * d)
        rows.append(tuple(row))
    return tuple(rows)


def mat_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))


def theta(g: Matrix) -> Matrix:
    """g -> transpose-inverse, the outer involution."""
    return mat_transpose(mat_inv(g))


def theta_point(coords: tuple) -> tuple:
    """Swap point/plane interpretation: a plane with normal v corresponds
    to the point with coordinates v under f -> f(w0 * g^theta)."""
    return tuple(coords)


IDENTITY3 = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
W_S1 = mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
W_13 = mat([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
W0 = mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
U0 = mat([[1, 0, 0], [0, 0, -1], [0, 1, 0]])


def t_element(p: int) -> Matrix:
    return mat([[p, 0, 0], [0, 1, 0], [0, 0, 1]])


def t2_element(p: int) -> Matrix:
    return mat([[p, 0, 0], [0, p, 0], [0, 0, 1]])


def n1(x, y) -> Matrix:
    return mat([[1, x, y], [0, 1, 0], [0, 0, 1]])


def n_upper(x, y, z) -> Matrix:
    return mat([[1, x, y], [0, 1, z], [0, 0, 1]])


# -- valuation intervals ------------------------------------------------


def _is_zeroish(x) -> bool:
    if isinstance(x, PadicNumber):
        return x.unit == 0
    return x == 0


def _vrange(x, p: int) -> tuple:
    """Interval [lo, hi] containing v_p(x); a point for certain knowledge."""
    if isinstance(x, PadicNumber):
        if x.p != p:
            raise ValueError("prime mismatch in matrix entry")
        if x.unit == 0:
            return (x.val, _INF)
        return (x.val, x.val)
    x = Fraction(x)
    if x == 0:
        return (_INF, _INF)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return (v, v)


# -- the decomposition --------------------------------------------------


@dataclass(frozen=True)
class BruhatDecomposition:
    pbar: Matrix
    w: Matrix
    k: Matrix
    case: str

    @property
    def w_name(self) -> str:
        if self.w == IDENTITY3:
            return "id"
        return "s1" if self.w == W_S1 else "w13"

    def recompose(self) -> Matrix:
        return mat_mul(mat_mul(self.pbar, self.w), self.k)


def decompose(g: Matrix, p: int) -> BruhatDecomposition:
    """Split g = pbar * w * k by the first-row valuations.

    The permutation w records which coordinate of (a, b, c) dominates
    (smallest valuation; ties broken leftward).  Six constructive cases:
    (a-1) w = id; (a-2)/(a-3) b or c dominates over nonzero a;
    (b-1)/(b-2) a = 0; (c) a = b = 0.
    """
    a, b, c = g[0]
    alo, ahi = _vrange(a, p)
    blo, bhi = _vrange(b, p)
    clo, chi = _vrange(c, p)

    if ahi <= blo and ahi <= clo:
        # a dominates: b' = b/a, c' = c/a are integral
        bp, cp = b / a, c / a
        n = n1(bp, cp)
        return BruhatDecomposition(mat_mul(g, mat_inv(n)), IDENTITY3, n, "a-1")

    if bhi < alo and bhi <= clo:
        if _is_zeroish(a):
            cp = c / b
            n = n_upper(0, cp, 0)
            case = "b-1"
        else:
            bp = b / a
            ib = _entry_inv(bp)
            n = n1(ib, ib * (c / a))
            case = "a-2"
        pbar = mat_mul(g, mat_inv(mat_mul(n, W_S1)))
        k = mat_mul(mat_mul(mat_inv(W_S1), n), W_S1)
        return BruhatDecomposition(pbar, W_S1, k, case)

    if chi < alo and chi < blo:
        if _is_zeroish(a) and _is_zeroish(b):
            return BruhatDecomposition(mat_mul(g, mat_inv(W_13)), W_13, IDENTITY3, "c")
        if _is_zeroish(a):
            n = n_upper(0, _entry_inv(c / b), 0)
            case = "b-2"
        else:
            cp = c / a
            ic = _entry_inv(cp)
            n = n1(ic, (b / a) * ic)
            case = "a-3"
        pbar = mat_mul(g, mat_inv(mat_mul(n, W_13)))
        k = mat_mul(mat_mul(mat_inv(W_13), n), W_13)
        return BruhatDecomposition(pbar, W_13, k, case)

    raise ValueError("ambiguous cell")


def section(g: Matrix, p: int) -> Matrix:
    return decompose(g, p).pbar


def v1_of_parabolic(q: Matrix):
    """Character a^{-1} * det(Levi block) on first rows of shape (a,0,0)."""
    if not (_is_zeroish(q[0][1]) and _is_zeroish(q[0][2])):
        raise ValueError("matrix is not in the lower parabolic")
    return _entry_inv(q[0][0]) * (q[1][1] * q[2][2] - q[1][2] * q[2][1])


def section_v1(g: Matrix, p: int):
    return v1_of_parabolic(section(g, p))


# -- mirrored section for the plane parabolic ---------------------------

_MIRROR_W = {"id": W0, "s1": W_13, "w13": W_S1}


def _cross(r1, r2):
    return (
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    )


def decompose2(g: Matrix, p: int) -> BruhatDecomposition:
    """Mirrored split g = pbar2 * w * k with pbar2 in the plane parabolic
    (zero (1,3) and (2,3) entries).

    The case analysis runs on the plane normal of the first two rows; the
    unipotent factor sits in the opposite one-parameter group.  The shape
    of pbar2 is validated rather than assumed.
    """
    normal = _cross(g[0], g[1])
    dec1 = decompose(_complete_row(normal), p)
    n_part = mat_mul(mat_mul(dec1.w, dec1.k), mat_inv(dec1.w))
    u, v = n_part[0][1], n_part[0][2]
    n2 = mat([[1, 0, -v], [0, 1, -u], [0, 0, 1]])
    w2 = _MIRROR_W[dec1.w_name]
    pbar2 = mat_mul(g, mat_inv(mat_mul(n2, w2)))
    if not (_is_zeroish(pbar2[0][2]) and _is_zeroish(pbar2[1][2])):
        raise ValueError("mirrored section left the plane parabolic")
    k2 = mat_mul(mat_mul(mat_inv(w2), n2), w2)
    return BruhatDecomposition(pbar2, w2, k2, "mirror-" + dec1.case)


def _complete_row(row) -> Matrix:
    """Extend a nonzero row to an invertible matrix with unit determinant
    against the dominant coordinate."""
    zs = [_is_zeroish(e) for e in row]
    if not zs[0]:
        basis = ((0, 1, 0), (0, 0, 1))
    elif not zs[1]:
        basis = ((1, 0, 0), (0, 0, 1))
    else:
        basis = ((1, 0, 0), (0, 1, 0))
    return mat([tuple(row), basis[0], basis[1]])


def v2_of_parabolic(q: Matrix):
    """Character e * det(upper-left block)^{-1} on shapes with zero (1,3), (2,3)."""
    if not (_is_zeroish(q[0][2]) and _is_zeroish(q[1][2])):
        raise ValueError("matrix is not in the plane parabolic")
    d2 = q[0][0] * q[1][1] - q[0][1] * q[1][0]
    return q[2][2] * _entry_inv(d2)


# -- branching cocycles -------------------------------------------------


def _lam_of_value(lam: Homomorphism, value, p: int, prec: int) -> PadicNumber:
    if isinstance(value, PadicNumber):
        return hom_eval(lam, value)
    return hom_eval(lam, PadicNumber.from_rational(p, value, prec))


def cocycle_value(
    lam: Homomorphism,
    x: Matrix,
    g: Matrix,
    p: int,
    prec: int = 8,
    index: int = 1,
    route: str = "theta",
) -> PadicNumber:
    """c_{index,lam}[x](g); for index 2 either the theta-transport route or
    the direct mirrored-section route."""
    if index == 1:
        lv = _lam_of_value(lam, section_v1(mat_mul(g, x), p), p, prec)
        return lv - _lam_of_value(lam, section_v1(g, p), p, prec)
    if index != 2:
        raise ValueError(f"cocycle index must be 1 or 2, got {index}")
    if route == "theta":
        gq = mat_mul(W0, theta(g))
        xq = theta(x)
        return cocycle_value(lam, xq, gq, p, prec, index=1)
    if route != "direct":
        raise ValueError(f"unknown route {route!r}")
    lv = _lam_of_value(lam, v2_of_parabolic(decompose2(mat_mul(g, x), p).pbar), p, prec)
    return lv - _lam_of_value(lam, v2_of_parabolic(decompose2(g, p).pbar), p, prec)


# -- exhaustive table check for c_{1,lam}[t] ----------------------------


def enumerate_p2(p: int, m: int) -> list[tuple[int, int, int]]:
    """Primitive representatives of the projective plane over Z/p^m."""
    q = p ** m
    reps = []
    for x in range(q):
        for y in range(q):
            reps.append((1, x, y))
    for x in range(q // p):
        for y in range(q):
            reps.append((p * x, 1, y))
    for x in range(q // p):
        for y in range(q // p):
            reps.append((p * x, p * y, 1))
    return reps


def lift_row_to_gl3(row) -> Matrix:
    return _complete_row(row)


def verify_cocycle_table(lam: Homomorphism, p: int, m: int, prec: int = None) -> dict:
    """Check F(g) = c_{1,lam}[t](g) - lam(p) against its three-case table.

    F must vanish off the cell of w = id; on it, with unipotent coordinates
    (x, y): F = -2 lam(p) for x, y in pZp; -2 lam(x) for x a unit;
    -2 lam(y) for x in pZp, y a unit.
    """
    if prec is None:
        prec = m + 4
    t = t_element(p)
    lam_p = _lam_of_value(lam, Fraction(p), p, prec)
    failures = []
    case_counts = {}
    for row in enumerate_p2(p, m):
        g = lift_row_to_gl3(row)
        dec = decompose(g, p)
        f_val = cocycle_value(lam, t, g, p, prec) - lam_p
        if dec.w_name != "id":
            expected = PadicNumber.zero(p, prec)
            tag = "off-cell"
        else:
            x, y = dec.k[0][1], dec.k[0][2]
            x_in_pzp = _vrange(x, p)[0] >= 1
            y_in_pzp = _vrange(y, p)[0] >= 1
            if x_in_pzp and y_in_pzp:
                expected = lam_p * (-2)
                tag = "x,y in pZp"
            elif not x_in_pzp:
                expected = _lam_of_value(lam, x, p, prec) * (-2)
                tag = "x unit"
            else:
                expected = _lam_of_value(lam, y, p, prec) * (-2)
                tag = "x in pZp, y unit"
        case_counts[tag] = case_counts.get(tag, 0) + 1
        if f_val != expected:
            failures.append({"row": row, "tag": tag, "got": str(f_val), "want": str(expected)})
    return {
        "passed": not failures,
        "points": sum(case_counts.values()),
        "cases": case_counts,
        "failures": failures[:10],
        "failure_count": len(failures),
    }
