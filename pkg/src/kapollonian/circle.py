"""Oriented circles over an imaginary quadratic field and their Minkowski-space avatars.

A circle is the exact triple (n, n', w): curvature n*sqrt|D|, co-curvature
n'*sqrt|D|, curvature-centre i*w with w in O_K, tied together by
n * n' * |D| = N(w) - 1.  The Pedoe map sends it to the vector
(b', b, r, m) on the M = 1 hyperboloid of signature (3,1), where the induced
inner product reads off tangency: -1 external, +1 internal, 0 orthogonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .qint import Disc, ExtRat, OKElem, ext, ext_sqrt, ok

INTERIOR, ON, EXTERIOR = -1, 0, 1

MinkVec = tuple[ExtRat, ExtRat, ExtRat, ExtRat]
MinkMat = tuple[tuple[ExtRat, ...], ...]


# ---------------------------------------------------------------------------
# Points of K-hat
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KPoint:
    """p + q*tau in K, or the point at infinity."""

    p: Fraction = Fraction(0)
    q: Fraction = Fraction(0)
    infinite: bool = False

    @classmethod
    def infinity(cls) -> "KPoint":
        return cls(Fraction(0), Fraction(0), True)

    @classmethod
    def of(cls, p, q=0) -> "KPoint":
        return cls(Fraction(p), Fraction(q))

    def numerator_pair(self, disc: Disc) -> tuple[OKElem, OKElem]:
        """(X, Y) in O_K^2 with X/Y the point, primitive content over Z."""
        if self.infinite:
            return ok(disc, 1, 0), ok(disc, 0, 0)
        den = self.p.denominator
        den *= self.q.denominator // math.gcd(den, self.q.denominator)
        return ok(disc, int(self.p * den), int(self.q * den)), ok(disc, den, 0)

    def __repr__(self):
        return "oo" if self.infinite else f"({self.p}+{self.q}t)"


INF = KPoint.infinity()


# ---------------------------------------------------------------------------
# Moebius maps: [[a, b], [c, d]] acting z -> (az+b)/(cz+d), entries in O_K,
# N(det) = 1, optional complex conjugation applied first.  Identified
# projectively; the constructor rescales by the canonical unit.
# ---------------------------------------------------------------------------


def _unit_canonical(disc: Disc, entries):
    first = next(e for e in entries if not e.is_zero())
    for unit in disc.units():
        t = unit * first
        if disc.delta == -4:
            good = t.u > 0 and t.v >= 0
        else:
            good = t.u > 0 or (t.u == 0 and t.v > 0)
        if good:
            return tuple(unit * e for e in entries)
    raise AssertionError("no canonical unit representative")


@dataclass(frozen=True)
class MobiusMap:
    disc: Disc
    a: OKElem
    b: OKElem
    c: OKElem
    d: OKElem
    conj: bool = False

    def __post_init__(self):
        if self.det().norm() != 1:
            raise ValueError("Moebius matrix must have unit-norm determinant")
        a, b, c, d = _unit_canonical(self.disc, (self.a, self.b, self.c, self.d))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def det(self) -> OKElem:
        return self.a * self.d - self.b * self.c

    def matrix_conj(self) -> "MobiusMap":
        """Entrywise complex conjugate of the matrix part (flag untouched)."""
        return MobiusMap(self.disc, self.a.conj(), self.b.conj(),
                         self.c.conj(), self.d.conj(), self.conj)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        if self.disc != other.disc:
            raise ValueError("mixed discriminants")
        o = other.matrix_conj() if self.conj else other
        return MobiusMap(
            self.disc,
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.conj != other.conj,
        )

    def inverse(self) -> "MobiusMap":
        inv = MobiusMap(self.disc, self.d, -self.b, -self.c, self.a, False)
        if self.conj:
            inv = inv.matrix_conj()
            return MobiusMap(self.disc, inv.a, inv.b, inv.c, inv.d, True)
        return inv

    def apply_point(self, z: KPoint) -> KPoint:
        disc = self.disc
        x, y = z.numerator_pair(disc)
        if self.conj:
            x, y = x.conj(), y.conj()
        num = self.a * x + self.b * y
        den = self.c * x + self.d * y
        return kpoint_from_ok_quotient(num, den)

    def key(self):
        return (self.a.u, self.a.v, self.b.u, self.b.v, self.c.u, self.c.v,
                self.d.u, self.d.v, self.conj)

    def __repr__(self):
        star = "~" if self.conj else ""
        return f"Mob{star}[[{self.a},{self.b}],[{self.c},{self.d}]]"


def mobius(disc: Disc, a, b, c, d, conj: bool = False) -> MobiusMap:
    """Build a map from (u, v) coordinate pairs or OKElem entries."""
    def coerce(x):
        if isinstance(x, OKElem):
            return x
        if isinstance(x, int):
            return ok(disc, x, 0)
        return ok(disc, x[0], x[1])
    return MobiusMap(disc, coerce(a), coerce(b), coerce(c), coerce(d), conj)


def identity_map(disc: Disc) -> MobiusMap:
    return mobius(disc, 1, 0, 0, 1)


def translation_map(disc: Disc, m: int) -> MobiusMap:
    return mobius(disc, 1, m, 0, 1)


def v_map(disc: Disc) -> MobiusMap:
    """V = [[1, tau], [0, -1]], the immediate-tangency move."""
    return mobius(disc, 1, (0, 1), 0, -1)


def s_map(disc: Disc) -> MobiusMap:
    return mobius(disc, 0, -1, 1, 0)


def reflection_map(disc: Disc) -> MobiusMap:
    """z -> -z; composed on the right of a witness it reverses orientation."""
    return mobius(disc, 1, 0, 0, -1)


def kpoint_from_ok_quotient(num: OKElem, den: OKElem) -> KPoint:
    """num/den as a K-hat point; den may be zero (infinity)."""
    if den.is_zero():
        if num.is_zero():
            raise ZeroDivisionError("0/0 is not a point of K-hat")
        return INF
    nd = den.norm()
    t = num * den.conj()
    return KPoint(Fraction(t.u, nd), Fraction(t.v, nd))


# ---------------------------------------------------------------------------
# Oriented circles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrientedCircle:
    disc: Disc
    n: int
    nprime: int
    w: OKElem
    witness: Optional[MobiusMap] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.w.disc != self.disc:
            raise ValueError("w lives in the wrong ring")
        if self.n * self.nprime * self.disc.abs_delta != self.w.norm() - 1:
            raise ValueError(
                f"not a circle: n n' |D| = {self.n * self.nprime * self.disc.abs_delta}"
                f" but N(w) - 1 = {self.w.norm() - 1}")

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.n, self.nprime, self.w.u, self.w.v)

    def unoriented_key(self):
        k = self.key
        return k if k > tuple(-x for x in k) else tuple(-x for x in k)

    def reverse(self) -> "OrientedCircle":
        wit = None
        if self.witness is not None:
            wit = self.witness @ reflection_map(self.disc)
        return OrientedCircle(self.disc, -self.n, -self.nprime, -self.w, wit)

    @property
    def is_line(self) -> bool:
        return self.n == 0

    def center_x(self) -> Fraction:
        """Real part of the centre (bounded circles only)."""
        if self.n == 0:
            raise ValueError("line has no centre")
        return Fraction(-self.w.v, 2 * self.n)

    def center_yhat(self) -> Fraction:
        """Imaginary part of the centre in units of sqrt|D|."""
        if self.n == 0:
            raise ValueError("line has no centre")
        e = self.disc.eps
        return Fraction(2 * self.w.u + e * self.w.v,
                        2 * self.n * self.disc.abs_delta)

    def radius_sq(self) -> Fraction:
        if self.n == 0:
            raise ValueError("line has no radius")
        return Fraction(1, self.n * self.n * self.disc.abs_delta)

    def line_height(self) -> Fraction:
        """For a horizontal line: height in units of sqrt|D|.  w = +-1 only."""
        if self.n != 0 or self.w.v != 0:
            raise ValueError("not a horizontal line")
        return Fraction(self.nprime, 2 * self.w.u)

    def translated(self, m: int) -> "OrientedCircle":
        """Image under z -> z + m, exactly."""
        n, np_, u, v = self.key
        e = self.disc.eps
        wit = None
        if self.witness is not None:
            wit = translation_map(self.disc, m) @ self.witness
        return OrientedCircle(
            self.disc, n, np_ - m * v + m * m * n,
            ok(self.disc, u + m * n * e, v - 2 * m * n), wit)

    def __repr__(self):
        return f"Circle(n={self.n}, n'={self.nprime}, w={self.w.u}{self.w.v:+}t)"


def rhat(disc: Disc) -> OrientedCircle:
    """The extended real line, positively oriented (interior above)."""
    return OrientedCircle(disc, 0, 0, ok(disc, 1, 0), identity_map(disc))


def circle_from_matrix(m: MobiusMap) -> OrientedCircle:
    """The oriented image of the real line under m, with m stored as witness.

    Curvature data comes out of the matrix columns: with m = [[a, b], [c, d]],
    the curvature is i(c conj(d) - conj(c) d), the co-curvature
    i(a conj(b) - conj(a) b) and the curvature-centre i(a conj(d) - b conj(c)).
    A conjugation flag flips the orientation first (z -> conj(z) carries the
    upper half plane below the axis).
    """
    n = -(m.c * m.d.conj()).v
    nprime = -(m.a * m.b.conj()).v
    w = m.a * m.d.conj() - m.b * m.c.conj()
    if m.conj:
        n, nprime, w = -n, -nprime, -w
    return OrientedCircle(m.disc, n, nprime, w, m)


# ---------------------------------------------------------------------------
# Pedoe embedding and the inner product
# ---------------------------------------------------------------------------


def pedoe_embed(c: OrientedCircle) -> MinkVec:
    d = c.disc.abs_delta
    e = c.disc.eps
    return (
        ext(d, 0, c.nprime),
        ext(d, 0, c.n),
        ext(d, 0, Fraction(-c.w.v, 2)),
        ext(d, Fraction(2 * c.w.u + e * c.w.v, 2)),
    )


def circle_from_minkvec(disc: Disc, vec: MinkVec,
                        witness: Optional[MobiusMap] = None) -> OrientedCircle:
    bp, b, r, m = vec
    d = disc.abs_delta
    s = ext_sqrt(d)
    n = (b / s).rational()
    nprime = (bp / s).rational()
    v = (r / s * -2).rational()
    u = (m - ext(d, Fraction(disc.eps) * v / 2)).rational()
    for x in (n, nprime, u, v):
        if x.denominator != 1:
            raise ValueError(f"vector is not an integral circle: {vec}")
    return OrientedCircle(disc, int(n), int(nprime), ok(disc, int(u), int(v)),
                          witness)


def raw_product4(absd: int, eps: int, t1, t2) -> int:
    """4 <.,.> on raw circle coordinate tuples (n, n', u, v)."""
    n1, p1, u1, v1 = t1
    n2, p2, u2, v2 = t2
    return (-2 * absd * (p1 * n2 + n1 * p2) + absd * v1 * v2
            + (2 * u1 + eps * v1) * (2 * u2 + eps * v2))


def raw_translate(t, m: int, eps: int):
    """z -> z + m on a raw circle tuple (n, n', u, v); also valid on columns."""
    n, p, u, v = t
    return (n, p - m * v + m * m * n, u + m * n * eps, v - 2 * m * n)


def raw_circle(disc: Disc, t, witness: Optional[MobiusMap] = None) -> OrientedCircle:
    n, p, u, v = t
    return OrientedCircle(disc, n, p, ok(disc, u, v), witness)


def pedoe_product4(c1: OrientedCircle, c2: OrientedCircle) -> int:
    """4 <pi(c1), pi(c2)>, always an integer."""
    if c1.disc != c2.disc:
        raise ValueError("mixed discriminants")
    return raw_product4(c1.disc.abs_delta, c1.disc.eps, c1.key, c2.key)


def pedoe_product(c1: OrientedCircle, c2: OrientedCircle) -> Fraction:
    return Fraction(pedoe_product4(c1, c2), 4)


def mink_product(d: int, v1: Sequence[ExtRat], v2: Sequence[ExtRat]) -> ExtRat:
    """The signature-(3,1) form: -(b1' b2 + b1 b2')/2 + r1 r2 + m1 m2."""
    half = Fraction(1, 2)
    return (-(v1[0] * v2[1] + v1[1] * v2[0]) * half
            + v1[2] * v2[2] + v1[3] * v2[3])


# ---------------------------------------------------------------------------
# Hermitian-matrix action and the exceptional isomorphism rho
# ---------------------------------------------------------------------------

# complex numbers over Q(sqrt|D|) as (re, im) pairs of ExtRat


def _xc(re: ExtRat, im: ExtRat):
    return (re, im)


def _xc_of_ok(x: OKElem):
    d = x.disc.abs_delta
    e = x.disc.eps
    return (ext(d, Fraction(2 * x.u + e * x.v, 2)), ext(d, 0, Fraction(x.v, 2)))


def _xc_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _xc_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _xc_conj(x):
    return (x[0], -x[1])


def _herm_from_vec(disc: Disc, vec: MinkVec):
    bp, b, r, m = vec
    zero = ext(disc.abs_delta, 0)
    return ((_xc(bp, zero), _xc(r, m)), (_xc(r, -m), _xc(b, zero)))


def _vec_from_herm(h) -> MinkVec:
    (tl, tr), (_, br) = h
    if not tl[1].is_zero() or not br[1].is_zero():
        raise AssertionError("matrix is not Hermitian")
    return (tl[0], br[0], tr[0], tr[1])


def _herm_transform(g: MobiusMap, h):
    """g . T = g T g-dagger / N(det g), with conjugation applied first."""
    if g.conj:
        h = tuple(tuple(_xc_conj(x) for x in row) for row in h)
    ge = ((_xc_of_ok(g.a), _xc_of_ok(g.b)), (_xc_of_ok(g.c), _xc_of_ok(g.d)))
    gd = ((_xc_conj(ge[0][0]), _xc_conj(ge[1][0])),
          (_xc_conj(ge[0][1]), _xc_conj(ge[1][1])))

    def mul2(x, y):
        return tuple(
            tuple(
                _xc_add(_xc_mul(x[i][0], y[0][j]), _xc_mul(x[i][1], y[1][j]))
                for j in range(2))
            for i in range(2))

    out = mul2(mul2(ge, h), gd)
    nd = g.det().norm()
    if nd != 1:
        inv = Fraction(1, nd)
        out = tuple(tuple((x[0] * inv, x[1] * inv) for x in row) for row in out)
    return out


def apply_mobius(g: MobiusMap, c: OrientedCircle) -> OrientedCircle:
    """The conformal action on oriented circles, exact."""
    if g.disc != c.disc:
        raise ValueError("mixed discriminants")
    h = _herm_transform(g, _herm_from_vec(c.disc, pedoe_embed(c)))
    wit = None if c.witness is None else g @ c.witness
    return circle_from_minkvec(c.disc, _vec_from_herm(h), wit)


def rho(g: MobiusMap) -> MinkMat:
    """The exceptional isomorphism Moeb -> O_M, columnwise on basis vectors."""
    d = g.disc.abs_delta
    zero, one = ext(d, 0), ext(d, 1)
    basis = [
        (one, zero, zero, zero),
        (zero, one, zero, zero),
        (zero, zero, one, zero),
        (zero, zero, zero, one),
    ]
    cols = [_vec_from_herm(_herm_transform(g, _herm_from_vec(g.disc, v)))
            for v in basis]
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


# ---------------------------------------------------------------------------
# Exact 4x4 linear algebra over Q(sqrt|D|)
# ---------------------------------------------------------------------------


def ext_mat(d: int, rows) -> MinkMat:
    def coerce(x):
        if isinstance(x, ExtRat):
            return x
        return ext(d, Fraction(x))
    return tuple(tuple(coerce(x) for x in row) for row in rows)


def ext_mat_mul(a: MinkMat, b: MinkMat) -> MinkMat:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)),
                  start=a[0][0] * 0) for j in range(m))
        for i in range(n))


def ext_mat_vec(a: MinkMat, v: Sequence[ExtRat]) -> tuple[ExtRat, ...]:
    return tuple(sum((a[i][j] * v[j] for j in range(len(v))),
                     start=a[0][0] * 0) for i in range(len(a)))


def ext_mat_transpose(a: MinkMat) -> MinkMat:
    return tuple(tuple(a[j][i] for j in range(len(a))) for i in range(len(a[0])))


def ext_mat_eq(a: MinkMat, b: MinkMat) -> bool:
    return all((x - y).is_zero() for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def ext_mat_identity(d: int, n: int = 4) -> MinkMat:
    return tuple(tuple(ext(d, 1 if i == j else 0) for j in range(n))
                 for i in range(n))


def ext_mat_inverse(a: MinkMat) -> MinkMat:
    n = len(a)
    d = a[0][0].d
    aug = [list(row) + [ext(d, 1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def gram_matrix(disc: Disc) -> MinkMat:
    d = disc.abs_delta
    h = Fraction(-1, 2)
    return ext_mat(d, ((0, h, 0, 0), (h, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def in_lorentz_group(disc: Disc, m: MinkMat) -> bool:
    g = gram_matrix(disc)
    return ext_mat_eq(ext_mat_mul(ext_mat_mul(ext_mat_transpose(m), g), m), g)


def is_orthochronous(disc: Disc, m: MinkMat) -> bool:
    """Preserves the time direction, i.e. the sign of b + b' on timelike vectors."""
    d = disc.abs_delta
    y = ext_mat_vec(m, (ext(d, 1), ext(d, 1), ext(d, 0), ext(d, 0)))
    return (y[0] + y[1]).sign() > 0


# ---------------------------------------------------------------------------
# Interior test and tangency points
# ---------------------------------------------------------------------------


def interior_sign(c: OrientedCircle, z: KPoint) -> int:
    """-1 if z is interior to c, 0 if on, +1 if exterior.

    Evaluates E(X, Y) = b X conj(X) - a Y conj(X) - conj(a) X conj(Y)
    + b' Y conj(Y) at z = X/Y; the sign convention puts the upper half plane
    inside the positively oriented real line.
    """
    x, y = z.numerator_pair(c.disc)
    t = c.w * y * x.conj()
    val = c.n * x.norm() + t.v + c.nprime * y.norm()
    return (val > 0) - (val < 0)


def tangency_point(c1: OrientedCircle, c2: OrientedCircle) -> KPoint:
    """The unique common point of two tangent circles, exactly."""
    if c1.disc != c2.disc:
        raise ValueError("mixed discriminants")
    if c1.unoriented_key() == c2.unoriented_key():
        raise ValueError("pair shares the underlying circle")
    p4 = pedoe_product4(c1, c2)
    if p4 == -4:
        n = c1.n + c2.n
        np_ = c1.nprime + c2.nprime
        wu, wv = c1.w.u + c2.w.u, c1.w.v + c2.w.v
    elif p4 == 4:
        n = c1.n - c2.n
        np_ = c1.nprime - c2.nprime
        wu, wv = c1.w.u - c2.w.u, c1.w.v - c2.w.v
    else:
        raise ValueError(f"circles are not tangent (4<,> = {p4})")
    if n == 0:
        assert wu == 0 and wv == 0, (np_, wu, wv)
        return INF
    disc = c1.disc
    e, q, d = disc.eps, disc.tau_sq_const, disc.abs_delta
    # point = w_s * (2 tau - eps) / (n_s |D|)
    pu = 2 * wv * q - e * wu
    pv = 2 * wu + e * wv
    return KPoint(Fraction(pu, n * d), Fraction(pv, n * d))
