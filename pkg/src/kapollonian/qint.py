"""Exact arithmetic in imaginary quadratic integer rings and their real quadratic companions.

The ring O_K = Z + Z*tau for a fundamental discriminant D < 0 (D != -3), with
tau^2 = eps*tau + (D - eps)/4 and eps = Tr(tau) in {0, 1}.  All arithmetic is
arbitrary precision; nothing here ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence


class DiscError(ValueError):
    """Rejected discriminant (non-fundamental, positive, or the excluded -3)."""


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


@dataclass(frozen=True)
class Disc:
    """A fundamental discriminant D < 0 of an imaginary quadratic field, D != -3."""

    delta: int

    def __post_init__(self):
        d = self.delta
        if d >= 0:
            raise DiscError(f"discriminant must be negative, got {d}")
        if d == -3:
            raise DiscError("discriminant -3 is excluded")
        if d % 4 == 1:
            if not _squarefree(d):
                raise DiscError(f"{d} = 1 mod 4 but not squarefree")
        elif d % 4 == 0:
            m = d // 4
            if m % 4 not in (2, 3) or not _squarefree(m):
                raise DiscError(f"{d} is not a fundamental discriminant")
        else:
            raise DiscError(f"{d} is not 0 or 1 mod 4")

    @property
    def eps(self) -> int:
        return 0 if self.delta % 4 == 0 else 1

    @property
    def abs_delta(self) -> int:
        return -self.delta

    @property
    def tau_sq_const(self) -> int:
        """q with tau^2 = eps*tau + q, i.e. q = (delta - eps)/4 = -N(tau)."""
        return (self.delta - self.eps) // 4

    @property
    def norm_tau(self) -> int:
        return -self.tau_sq_const

    def units(self) -> tuple["OKElem", ...]:
        """The unit group of O_K (only Q(i) has units beyond +-1 here)."""
        one = OKElem(self, 1, 0)
        if self.delta == -4:
            i = OKElem(self, 0, 1)
            return (one, i, -one, -i)
        return (one, -one)

    def sqrt_abs(self) -> Optional[int]:
        """Integer square root of |delta| when it is a perfect square (only -4)."""
        r = math.isqrt(self.abs_delta)
        return r if r * r == self.abs_delta else None

    def __repr__(self):
        return f"Disc({self.delta})"


@dataclass(frozen=True)
class OKElem:
    """u + v*tau in O_K."""

    disc: Disc
    u: int
    v: int

    def __add__(self, other: "OKElem") -> "OKElem":
        self._same(other)
        return OKElem(self.disc, self.u + other.u, self.v + other.v)

    def __sub__(self, other: "OKElem") -> "OKElem":
        self._same(other)
        return OKElem(self.disc, self.u - other.u, self.v - other.v)

    def __neg__(self) -> "OKElem":
        return OKElem(self.disc, -self.u, -self.v)

    def __mul__(self, other):
        if isinstance(other, int):
            return OKElem(self.disc, self.u * other, self.v * other)
        self._same(other)
        q = self.disc.tau_sq_const
        e = self.disc.eps
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return OKElem(
            self.disc,
            u1 * u2 + q * v1 * v2,
            u1 * v2 + u2 * v1 + e * v1 * v2,
        )

    __rmul__ = __mul__

    def conj(self) -> "OKElem":
        return OKElem(self.disc, self.u + self.disc.eps * self.v, -self.v)

    def norm(self) -> int:
        e, d = self.disc.eps, self.disc.delta
        return self.u * self.u + e * self.u * self.v + self.v * self.v * ((e - d) // 4)

    def trace(self) -> int:
        return 2 * self.u + self.disc.eps * self.v

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __bool__(self):
        return not self.is_zero()

    def _same(self, other: "OKElem"):
        if self.disc != other.disc:
            raise ValueError("mixed discriminants")

    def __repr__(self):
        return f"OK({self.u}{self.v:+}t|{self.disc.delta})"


def ok(disc: Disc, u: int, v: int = 0) -> OKElem:
    return OKElem(disc, u, v)


# ---------------------------------------------------------------------------
# The real quadratic field Q(sqrt|D|), home of curvatures n*sqrt|D| and the
# Minkowski-space coordinates.  For D = -4 the "field" collapses to Q and the
# constructor canonicalizes so equality stays honest.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtRat:
    """p + q*sqrt(d) with p, q rational, d = |delta| > 0 fixed per instance."""

    d: int
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        r = math.isqrt(self.d)
        if r * r == self.d and self.q != 0:
            object.__setattr__(self, "p", self.p + self.q * r)
            object.__setattr__(self, "q", Fraction(0))

    def _same(self, other: "ExtRat"):
        if self.d != other.d:
            raise ValueError("mixed radicands")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExtRat(self.d, self.p + other, self.q)
        self._same(other)
        return ExtRat(self.d, self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExtRat) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ExtRat(self.d, -self.p, -self.q)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExtRat(self.d, self.p * other, self.q * other)
        self._same(other)
        return ExtRat(
            self.d,
            self.p * other.p + self.q * other.q * self.d,
            self.p * other.q + self.q * other.p,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExtRat":
        den = self.p * self.p - self.q * self.q * self.d
        if den == 0:
            raise ZeroDivisionError("zero ExtRat")
        return ExtRat(self.d, self.p / den, -self.q / den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExtRat(self.d, self.p / other, self.q / other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def is_rational(self) -> bool:
        return self.q == 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.p

    def sign(self) -> int:
        """Exact sign of p + q*sqrt(d)."""
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        if self.p == 0:
            return 1 if self.q > 0 else -1
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # opposite signs: compare p^2 against q^2 d
        lhs, rhs = self.p * self.p, self.q * self.q * self.d
        big_is_p = lhs > rhs
        if lhs == rhs:
            return 0
        return (1 if self.p > 0 else -1) if big_is_p else (1 if self.q > 0 else -1)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __repr__(self):
        if self.q == 0:
            return f"{self.p}"
        return f"({self.p}+{self.q}r{self.d})"


def ext(d: int, p=0, q=0) -> ExtRat:
    return ExtRat(d, Fraction(p), Fraction(q))


def ext_sqrt(d: int) -> ExtRat:
    return ExtRat(d, Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Integer linear algebra: column-style Hermite reduction, used to solve the
# 2x4 system behind the Bezout equation alpha*delta - beta*gamma = 1.
# ---------------------------------------------------------------------------


def solve_integer_system(rows: Sequence[Sequence[int]], rhs: Sequence[int]):
    """Solve A x = rhs over the integers.

    Returns (particular solution, kernel basis) or None when unsolvable.
    The particular solution is canonicalized against the kernel lattice so
    repeated calls are deterministic.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(j, k, c):  # col_j += c * col_k
        for i in range(m):
            a[i][j] += c * a[i][k]
        for i in range(n):
            u[i][j] += c * u[i][k]

    def col_swap(j, k):
        for i in range(m):
            a[i][j], a[i][k] = a[i][k], a[i][j]
        for i in range(n):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    def col_neg(j):
        for i in range(m):
            a[i][j] = -a[i][j]
        for i in range(n):
            u[i][j] = -u[i][j]

    # column echelon form: process rows top-down, gcd-reducing to the left
    pivots = []
    c = 0
    for r in range(m):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if a[r][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(a[r][j]))
            if jmin != c:
                col_swap(c, jmin)
            if a[r][c] < 0:
                col_neg(c)
            done = True
            for j in range(c + 1, n):
                if a[r][j]:
                    col_op(j, c, -(a[r][j] // a[r][c]))
                    if a[r][j]:
                        done = False
            if done:
                break
        if a[r][c] != 0:
            pivots.append((r, c))
            c += 1
    # forward-substitute rhs through the echelon columns
    y = [0] * n
    res = list(rhs)
    for r, c in pivots:
        if res[r] % a[r][c] != 0:
            return None
        y[c] = res[r] // a[r][c]
        for i in range(m):
            res[i] -= y[c] * a[i][c]
    if any(x != 0 for x in res):
        return None
    x0 = [sum(u[i][j] * y[j] for j in range(n)) for i in range(n)]
    npiv = len(pivots)
    kernel = [[u[i][j] for i in range(n)] for j in range(npiv, n)
              if all(a[r][j] == 0 for r in range(m))]
    x0 = _reduce_by_lattice(x0, kernel)
    return x0, kernel


def _reduce_by_lattice(x: list, basis: list) -> list:
    """Canonical representative of x modulo the lattice spanned by basis rows."""
    if not basis:
        return x
    n = len(x)
    rows = [list(b) for b in basis]
    # row-style Hermite form with positive pivots
    h = []
    work = rows
    col = 0
    while work and col < n:
        nz = [r for r in work if r[col] != 0]
        if not nz:
            col += 1
            continue
        while True:
            nz = [r for r in work if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                c = r[col] // p[col]
                for i in range(n):
                    r[i] -= c * p[i]
        piv = next(r for r in work if r[col] != 0)
        if piv[col] < 0:
            piv = [-t for t in piv]
        h.append(piv)
        work = [r for r in work if r is not piv and any(r)]
        col += 1
    x = list(x)
    for piv in h:
        c = next(i for i in range(n) if piv[i] != 0)
        k = x[c] // piv[c]
        if k:
            for i in range(n):
                x[i] -= k * piv[i]
    return x


def _mul_matrix(z: OKElem):
    """Multiplication-by-z as a 2x2 integer matrix on (u, v) coordinates."""
    q, e = z.disc.tau_sq_const, z.disc.eps
    return [[z.u, q * z.v], [z.v, z.u + e * z.v]]


def coprime(alpha: OKElem, beta: OKElem) -> bool:
    """Whether the O_K-ideals (alpha) and (beta) are coprime.

    gcd(N(alpha), N(beta), Tr(alpha * conj(beta))) equals the norm of the ideal
    (alpha, beta); the cheap test below is cross-checked against the integer
    linear system in the test suite.
    """
    if alpha.is_zero() and beta.is_zero():
        return False
    t = (alpha * beta.conj()).trace()
    return math.gcd(alpha.norm(), beta.norm(), t) == 1


def bezout(alpha: OKElem, beta: OKElem) -> Optional[tuple[OKElem, OKElem]]:
    """A solution (gamma, delta) of alpha*delta - beta*gamma = 1, or None.

    Solvability is exactly coprimality of the ideals (alpha), (beta): the set
    of values alpha*delta - beta*gamma is the ideal (alpha, beta).  The system
    is solved in the four integer coordinates of (gamma, delta) by Hermite
    reduction; the returned solution is the canonical lattice-reduced one.
    """
    if alpha.is_zero() and beta.is_zero():
        raise ValueError("bezout(0, 0)")
    disc = alpha.disc
    ma, mb = _mul_matrix(alpha), _mul_matrix(beta)
    # unknowns x = (gamma_u, gamma_v, delta_u, delta_v); alpha*delta - beta*gamma = 1
    rows = [
        [-mb[0][0], -mb[0][1], ma[0][0], ma[0][1]],
        [-mb[1][0], -mb[1][1], ma[1][0], ma[1][1]],
    ]
    sol = solve_integer_system(rows, [1, 0])
    if sol is None:
        return None
    x0, _ = sol
    gamma = OKElem(disc, x0[0], x0[1])
    delta = OKElem(disc, x0[2], x0[3])
    assert (alpha * delta - beta * gamma) == OKElem(disc, 1, 0)
    return gamma, delta


@lru_cache(maxsize=None)
def disc_cache(delta: int) -> Disc:
    return Disc(delta)


def elements_of_norm_up_to(disc: Disc, bound: int) -> list[OKElem]:
    """All nonzero elements of O_K with norm <= bound."""
    out = []
    e, d = disc.eps, disc.abs_delta
    # N(u + v tau) = (2u + e v)^2/4 + v^2 d/4
    vmax = math.isqrt(4 * bound // d)
    for v in range(-vmax, vmax + 1):
        rem = 4 * bound - v * v * d
        if rem < 0:
            continue
        s = math.isqrt(rem)
        # 2u + e*v in [-s, s]
        lo = -((s + e * v) // 2)
        hi = (s - e * v) // 2
        for u in range(lo, hi + 1):
            el = OKElem(disc, u, v)
            if not el.is_zero() and el.norm() <= bound:
                out.append(el)
    return out
