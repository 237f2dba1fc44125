"""Cluster spaces: quadruples, cubes and tents of circles, with their swap moves.

A cluster is an ordered tuple of Minkowski vectors W (4 columns) satisfying
W^t G_M W = R for the flavor's Gram matrix R.  Swaps are right multiplications
by fixed integer matrices of O_R(Z), each of order two; the circles of a
cluster are integer linear combinations of the columns.

The Gram matrices, swap generators and base-cluster coordinates below are
ingested as literal tables keyed by discriminant, and validated exactly by the
test suite; the columns are stored doubled so every table entry is an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .circle import (
    MinkVec,
    MobiusMap,
    OrientedCircle,
    mobius,
    raw_circle,
    raw_product4,
    raw_translate,
)
from .qint import Disc, ExtRat, OKElem, disc_cache, ext, ext_sqrt

Matrix = tuple[tuple[Fraction, ...], ...]
IntMatrix = tuple[tuple[int, ...], ...]
RawCol = tuple[int, int, int, int]  # doubled (n, n', u, v) coordinates


def _fm(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _im(rows) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# Conversions between Minkowski vectors and doubled raw columns
# ---------------------------------------------------------------------------


def vec_to_col(disc: Disc, vec: MinkVec) -> RawCol:
    s = ext_sqrt(disc.abs_delta)
    bp, b, r, m = vec
    n2 = ((b / s) * 2).rational()
    np2 = ((bp / s) * 2).rational()
    v2 = ((r / s) * -4).rational()
    u2 = (m * 2 - ext(disc.abs_delta, Fraction(disc.eps) * v2 / 2)).rational()
    out = (n2, np2, u2, v2)
    if any(x.denominator != 1 for x in out):
        raise ValueError(f"vector has no half-integral circle coordinates: {vec}")
    return tuple(int(x) for x in out)  # type: ignore[return-value]


def col_to_vec(disc: Disc, col: RawCol) -> MinkVec:
    n2, np2, u2, v2 = col
    d = disc.abs_delta
    half = Fraction(1, 2)
    return (
        ext(d, 0, np2 * half),
        ext(d, 0, n2 * half),
        ext(d, 0, Fraction(-v2, 4)),
        ext(d, Fraction(u2, 2) + Fraction(disc.eps * v2, 4)),
    )


def gram_of_cols(disc: Disc, cols: Sequence[RawCol]) -> Matrix:
    d, e = disc.abs_delta, disc.eps
    return tuple(
        tuple(Fraction(raw_product4(d, e, a, b), 16) for b in cols) for a in cols)


# ---------------------------------------------------------------------------
# Printed data: Gram matrices, swap generators, base clusters, Moebius swaps
# ---------------------------------------------------------------------------

DESCARTES_R = _fm([
    [1, -1, -1, -1],
    [-1, 1, -1, -1],
    [-1, -1, 1, -1],
    [-1, -1, -1, 1],
])

GAUSSIAN_GENS = tuple(_im(m) for m in (
    [[-1, 0, 0, 0], [2, 1, 0, 0], [2, 0, 1, 0], [2, 0, 0, 1]],
    [[1, 2, 0, 0], [0, -1, 0, 0], [0, 2, 1, 0], [0, 2, 0, 1]],
    [[1, 0, 2, 0], [0, 1, 2, 0], [0, 0, -1, 0], [0, 0, 2, 1]],
    [[1, 0, 0, 2], [0, 1, 0, 2], [0, 0, 1, 2], [0, 0, 0, -1]],
))

# base quadruple, columns (b', b, r, m); two lines and two curvature-2 circles
_BASEQQI = (
    ((0, 0), (0, 0), (0, 0), (-1, 0)),
    ((0, 0), (2, 0), (0, 0), (1, 0)),
    ((2, 0), (0, 0), (0, 0), (1, 0)),
    ((2, 0), (2, 0), (2, 0), (1, 0)),
)

CUBICLE_R = _fm([
    [1, -3, -3, -3],
    [-3, 1, -3, -3],
    [-3, -3, 1, -3],
    [-3, -3, -3, 1],
])

CUBE_GRAM8 = _fm([
    [1, -1, -3, -1, -5, -3, -1, -3],
    [-1, 1, -1, -3, -3, -5, -3, -1],
    [-3, -1, 1, -1, -1, -3, -5, -3],
    [-1, -3, -1, 1, -3, -1, -3, -5],
    [-5, -3, -1, -3, 1, -1, -3, -1],
    [-3, -5, -3, -1, -1, 1, -1, -3],
    [-1, -3, -5, -3, -3, -1, 1, -1],
    [-3, -1, -3, -5, -1, -3, -1, 1],
])

CUBE_FACE_R = _fm([
    [1, -1, -3, -1],
    [-1, 1, -1, -3],
    [-3, -1, 1, -1],
    [-1, -3, -1, 1],
])

CUBE_GENS = tuple(_im(m) for m in (
    [[1, 0, 3, 3], [0, 1, 3, 3], [0, 0, 0, -1], [0, 0, -1, 0]],
    [[1, 3, 0, 3], [0, 0, 0, -1], [0, 3, 1, 3], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [3, 1, 0, 3], [3, 0, 1, 3], [-1, 0, 0, 0]],
    [[1, 3, 3, 0], [0, 0, -1, 0], [0, -1, 0, 0], [0, 3, 3, 1]],
    [[0, 0, -1, 0], [3, 1, 3, 0], [-1, 0, 0, 0], [3, 0, 3, 1]],
    [[0, -1, 0, 0], [-1, 0, 0, 0], [3, 3, 1, 0], [3, 3, 0, 1]],
))

# base cube, columns (b', b, r, m) with entries p + q*sqrt(8)
_BASECUBE = (
    ((0, 0), (0, 0), (0, 0), (-1, 0)),
    ((0, 0), (0, 1), (0, 0), (1, 0)),
    ((0, 1), (0, 2), (0, 1), (3, 0)),
    ((0, 1), (0, 1), (0, 1), (1, 0)),
    ((0, 2), (0, 2), (0, 1), (5, 0)),
    ((0, 2), (0, 1), (0, 1), (3, 0)),
    ((0, 1), (0, 0), (0, 0), (1, 0)),
    ((0, 1), (0, 1), (0, 0), (3, 0)),
)
CUBICLE_INDICES = (0, 2, 5, 7)  # columns v1, v3, v6, v8

# v1..v8 from the cubicle columns (v1, v3, v6, v8)
CUBE_CIRCLE_COEFFS = _fm([
    [1, 0, 0, 0],
    [Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2)],
    [0, 1, 0, 0],
    [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)],
    [Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)],
    [0, 0, 1, 0],
    [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2)],
    [0, 0, 0, 1],
])

TENT7_GRAM5 = _fm([
    [1, -1, Fraction(-5, 2), -1, Fraction(-5, 2)],
    [-1, 1, -1, Fraction(-5, 2), -1],
    [Fraction(-5, 2), -1, 1, -1, Fraction(-5, 2)],
    [-1, Fraction(-5, 2), -1, 1, -1],
    [Fraction(-5, 2), -1, Fraction(-5, 2), -1, 1],
])

TENT7_R = tuple(row[:4] for row in TENT7_GRAM5[:4])

TENT7_GENS = tuple(_im(m) for m in (
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    [[-2, 0, 0, -1], [3, 0, 1, 2], [0, 1, 0, -1], [3, 0, 0, 2]],
    [[0, -1, 0, 1], [0, 2, 3, 0], [0, -1, -2, 0], [1, 2, 3, 0]],
))

# base tent, columns (b', b, r, m) with entries p + q*sqrt(7)
_BASETENT7 = (
    ((0, 0), (0, 1), (0, 0), (1, 0)),
    ((0, 0), (0, 0), (0, 0), (-1, 0)),
    ((0, 1), (0, 1), (0, 1), (1, 0)),
    ((0, 1), (0, 1), (0, Fraction(1, 2)), (Fraction(5, 2), 0)),
    ((0, 1), (0, 0), (0, 0), (1, 0)),
)

# The belted generators act on the tentbase written as (v1, v4, v3, v2); in
# that order sigma of the Moebius swaps reproduces the printed matrices.
TENT7_BASE_ORDER = (0, 3, 2, 1)

# v1..v5 in figure order from the (v1, v4, v3, v2) tentbase;
# v5 = 2(v2 + v4) - v1 - v3
TENT7_CIRCLE_COEFFS = _fm([
    [1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 2, -1, 2],
])

TENT11_GRAM10 = _fm([
    [1, -1, Fraction(-9, 2), Fraction(-13, 2), Fraction(-9, 2), -1,
     Fraction(-9, 2), Fraction(-13, 2), Fraction(-13, 2), -1],
    [-1, 1, -1, Fraction(-9, 2), Fraction(-13, 2), Fraction(-9, 2),
     Fraction(-13, 2), Fraction(-9, 2), -10, Fraction(-9, 2)],
    [Fraction(-9, 2), -1, 1, -1, Fraction(-9, 2), Fraction(-13, 2),
     Fraction(-9, 2), -1, Fraction(-13, 2), Fraction(-13, 2)],
    [Fraction(-13, 2), Fraction(-9, 2), -1, 1, -1, Fraction(-9, 2),
     Fraction(-13, 2), Fraction(-9, 2), Fraction(-9, 2), -10],
    [Fraction(-9, 2), Fraction(-13, 2), Fraction(-9, 2), -1, 1, -1,
     Fraction(-9, 2), Fraction(-13, 2), -1, Fraction(-13, 2)],
    [-1, Fraction(-9, 2), Fraction(-13, 2), Fraction(-9, 2), -1, 1,
     Fraction(-13, 2), -10, Fraction(-9, 2), Fraction(-9, 2)],
    [Fraction(-9, 2), Fraction(-13, 2), Fraction(-9, 2), Fraction(-13, 2),
     Fraction(-9, 2), Fraction(-13, 2), 1, -1, -1, -1],
    [Fraction(-13, 2), Fraction(-9, 2), -1, Fraction(-9, 2), Fraction(-13, 2),
     -10, -1, 1, Fraction(-9, 2), Fraction(-9, 2)],
    [Fraction(-13, 2), -10, Fraction(-13, 2), Fraction(-9, 2), -1,
     Fraction(-9, 2), -1, Fraction(-9, 2), 1, Fraction(-9, 2)],
    [-1, Fraction(-9, 2), Fraction(-13, 2), -10, Fraction(-13, 2),
     Fraction(-9, 2), -1, Fraction(-9, 2), Fraction(-9, 2), 1],
])

TENT11_GENS = tuple(_im(m) for m in (
    [[1, 3, 3, 3], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
    [[-1, 0, 0, 0], [3, 1, 3, 3], [0, 0, -1, 0], [0, 0, 0, -1]],
    [[-1, 0, 0, 0], [0, -1, 0, 0], [3, 3, 1, 3], [0, 0, 0, -1]],
    [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [3, 3, 3, 1]],
))

# base tent, columns (b', b, r, m) with entries p + q*sqrt(11)
_BASETENT11 = (
    ((0, 0), (0, 0), (0, 0), (-1, 0)),
    ((0, 0), (0, 1), (0, 0), (1, 0)),
    ((0, 1), (0, 2), (0, Fraction(1, 2)), (Fraction(9, 2), 0)),
    ((0, 2), (0, 3), (0, Fraction(3, 2)), (Fraction(13, 2), 0)),
    ((0, 2), (0, 2), (0, Fraction(3, 2)), (Fraction(9, 2), 0)),
    ((0, 1), (0, 1), (0, 1), (1, 0)),
    ((0, 2), (0, 1), (0, Fraction(1, 2)), (Fraction(9, 2), 0)),
    ((0, 2), (0, 2), (0, Fraction(1, 2)), (Fraction(13, 2), 0)),
    ((0, 3), (0, 2), (0, Fraction(3, 2)), (Fraction(13, 2), 0)),
    ((0, 1), (0, 0), (0, 0), (1, 0)),
)

# the ten tent vectors in the basis (v1, v3, v5, v7), solved exactly from the
# printed base tent (the displayed recurrences carry the opposite sign)
TENT11_IN_BASIS = _fm([
    [1, 0, 0, 0],
    [Fraction(4, 5), Fraction(4, 5), Fraction(-1, 5), Fraction(-1, 5)],
    [0, 1, 0, 0],
    [Fraction(-1, 5), Fraction(4, 5), Fraction(4, 5), Fraction(-1, 5)],
    [0, 0, 1, 0],
    [Fraction(4, 5), Fraction(-1, 5), Fraction(4, 5), Fraction(-1, 5)],
    [0, 0, 0, 1],
    [Fraction(-1, 5), Fraction(4, 5), Fraction(-1, 5), Fraction(4, 5)],
    [Fraction(-1, 5), Fraction(-1, 5), Fraction(4, 5), Fraction(4, 5)],
    [Fraction(4, 5), Fraction(-1, 5), Fraction(-1, 5), Fraction(4, 5)],
])

# tent represented by the four belt vectors v1+v4, v1+v8, v1+v9, v3+v9
TENT11_REP_OF_TENT = _fm([
    [1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1, 0],
])


def _frac_mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a)))


def _frac_mat_inv(a):
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [x / f for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                g = aug[r][col]
                aug[r] = [x - g * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# rep columns in the (v1, v3, v5, v7) basis, and the circles of a rep matrix
_TENT11_REP_IN_BASIS = _frac_mat_mul(
    TENT11_REP_OF_TENT, TENT11_IN_BASIS)  # 4x4
TENT11_CIRCLE_COEFFS = _frac_mat_mul(
    TENT11_IN_BASIS, _frac_mat_inv(_TENT11_REP_IN_BASIS))  # 10x4


def general_r0(disc: Disc) -> Matrix:
    h = 1 + Fraction(disc.delta, 2)
    return _fm([
        [1, -1, -1, -1],
        [-1, 1, h, h],
        [-1, h, 1, h],
        [-1, h, h, 1],
    ])


def general_r1(disc: Disc) -> Matrix:
    dl = disc.delta
    a = Fraction(1 - dl, 4)
    b = Fraction(1 + dl, 4)
    h = Fraction(-1, 2)
    return _fm([
        [1, h, h, h],
        [h, a, b, b],
        [h, b, a, b],
        [h, b, b, a],
    ])


S_CHANGE = _im([[1, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0]])


@lru_cache(maxsize=None)
def general_gens(disc: Disc) -> tuple[IntMatrix, ...]:
    """Swap generators for the generic K-cluster space.

    The first three are the printed matrices (topograph moves fixing the
    central circle).  The fourth, which swaps the central circle for the one
    tangent at infinity, is recovered from its Moebius realization through the
    algebraic-geometric correspondence: the displayed fourth matrix is not an
    involution in the odd case, while the derived one satisfies g^2 = I and
    g^t R g = R for every discriminant.
    """
    if disc.eps == 0:
        printed = (
            [[1, 2, 0, 0], [0, -1, 0, 0], [0, 2, 0, 1], [0, 2, 1, 0]],
            [[1, 0, 2, 0], [0, 0, 2, 1], [0, 0, -1, 0], [0, 1, 2, 0]],
            [[1, 0, 0, 2], [0, 0, 1, 2], [0, 1, 0, 2], [0, 0, 0, -1]],
        )
    else:
        printed = (
            [[1, -1, 1, 1], [0, -1, 2, 2], [0, 0, 0, 1], [0, 0, 1, 0]],
            [[1, 1, -1, 1], [0, 0, 0, 1], [0, 2, -1, 2], [0, 1, 0, 0]],
            [[1, 1, 1, -1], [0, 0, 1, 0], [0, 1, 0, 0], [0, 2, 2, -1]],
        )
    g4 = _sigma_int(disc, _cols_from_entries(disc, _general_base_entries(disc)),
                    general_mobius_gens(disc)[3])
    return tuple(_im(m) for m in printed) + (g4,)


def _sigma_int(disc: Disc, cols: Sequence[RawCol], mob: MobiusMap) -> IntMatrix:
    """W^-1 rho(mob) W as an integer matrix, for W the column matrix of cols."""
    from .circle import ext_mat_inverse, ext_mat_mul, rho

    vecs = [col_to_vec(disc, c) for c in cols]
    w = tuple(tuple(vecs[j][i] for j in range(4)) for i in range(4))
    sig = ext_mat_mul(ext_mat_mul(ext_mat_inverse(w), rho(mob)), w)
    out = []
    for row in sig:
        ints = []
        for x in row:
            r = x.rational()
            if r.denominator != 1:
                raise ValueError(f"correspondence image is not integral: {x}")
            ints.append(int(r))
        out.append(tuple(ints))
    return tuple(out)


def _general_base_entries(disc: Disc):
    if disc.eps == 0:
        return (
            ((0, 0), (0, 0), (0, 0), (-1, 0)),
            ((0, 0), (0, 1), (0, 0), (1, 0)),
            ((0, 1), (0, 0), (0, 0), (1, 0)),
            ((0, 1), (0, 1), (0, 1), (1, 0)),
        )
    h = Fraction(1, 2)
    return (
        ((0, 0), (0, 0), (0, 0), (-1, 0)),
        ((0, 1), (0, 0), (0, h), (h, 0)),
        ((0, 0), (0, 1), (0, h), (h, 0)),
        ((0, 0), (0, 0), (0, -h), (h, 0)),
    )


GENERAL_CIRCLE_COEFFS_EVEN = _fm([[1, 0, 0, 0], [0, 1, 0, 0],
                                  [0, 0, 1, 0], [0, 0, 0, 1]])
# circles of the odd-discriminant representation are the S-combinations
GENERAL_CIRCLE_COEFFS_ODD = _fm([[1, 0, 0, 0], [0, 0, 1, 1],
                                 [0, 1, 0, 1], [0, 1, 1, 0]])


# ---------------------------------------------------------------------------
# Moebius swap generators, per flavor
# ---------------------------------------------------------------------------


def gaussian_mobius_gens(disc: Disc) -> tuple[MobiusMap, ...]:
    return (
        mobius(disc, (1, 2), -2, 2, (-1, 2), conj=True),
        mobius(disc, -1, 2, 0, 1, conj=True),
        mobius(disc, 1, 0, 2, -1, conj=True),
        mobius(disc, -1, 0, 0, 1, conj=True),
    )


def cube_mobius_gens(disc: Disc) -> tuple[MobiusMap, ...]:
    return (
        mobius(disc, 1, 0, 2, -1, conj=True),
        mobius(disc, -1, 2, 0, 1, conj=True),
        mobius(disc, (3, 2), -4, 4, (-3, 2), conj=True),
        mobius(disc, -1, 0, 0, 1, conj=True),
        mobius(disc, (1, 2), -2, 4, (-1, 2), conj=True),
        mobius(disc, (1, 2), -4, 2, (-1, 2), conj=True),
    )


def tent7_mobius_gens(disc: Disc) -> tuple[MobiusMap, ...]:
    return (
        mobius(disc, (0, 1), (1, -1), (1, 1), (0, -1)),
        mobius(disc, -1, (1, 1), 0, 1),
        mobius(disc, 1, 0, (1, -1), -1),
    )


def tent11_mobius_gens(disc: Disc) -> tuple[MobiusMap, ...]:
    return (
        mobius(disc, (1, 1), -2, 3, (-2, 1), conj=True),
        mobius(disc, (0, 1), -2, 2, (-1, 1), conj=True),
        mobius(disc, (1, 1), -3, 2, (-2, 1), conj=True),
        mobius(disc, (1, 2), -4, 4, (-3, 2), conj=True),
    )


def general_mobius_gens(disc: Disc) -> tuple[MobiusMap, ...]:
    return (
        mobius(disc, -1, 2, -1, 1),
        mobius(disc, 1, -1, 2, -1),
        mobius(disc, 0, 1, -1, 0),
        mobius(disc, 1, (1, -1), 0, -1),
    )


# ---------------------------------------------------------------------------
# Cluster space specs and the Cluster value type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterSpaceSpec:
    flavor: str
    n_circles: int
    r_matrix: Matrix
    generators: tuple[IntMatrix, ...]
    circle_coeffs: Matrix  # n_circles x 4, applied to the columns

    def __repr__(self):
        return f"ClusterSpaceSpec({self.flavor}, {self.n_circles} circles)"


@lru_cache(maxsize=None)
def cluster_spec(disc: Disc, flavor: Optional[str] = None) -> ClusterSpaceSpec:
    if flavor is None:
        flavor = default_flavor(disc)
    if flavor == "gaussian":
        if disc.delta != -4:
            raise ValueError("gaussian flavor requires discriminant -4")
        return ClusterSpaceSpec("gaussian", 4, DESCARTES_R, GAUSSIAN_GENS,
                                GENERAL_CIRCLE_COEFFS_EVEN)
    if flavor == "cube":
        if disc.delta != -8:
            raise ValueError("cube flavor requires discriminant -8")
        return ClusterSpaceSpec("cube", 8, CUBICLE_R, CUBE_GENS,
                                CUBE_CIRCLE_COEFFS)
    if flavor == "tent7":
        if disc.delta != -7:
            raise ValueError("tent7 flavor requires discriminant -7")
        return ClusterSpaceSpec("tent7", 5, TENT7_R, TENT7_GENS,
                                TENT7_CIRCLE_COEFFS)
    if flavor == "tent11":
        if disc.delta != -11:
            raise ValueError("tent11 flavor requires discriminant -11")
        return ClusterSpaceSpec("tent11", 10, tent11_rep_gram(), TENT11_GENS,
                                TENT11_CIRCLE_COEFFS)
    if flavor == "general":
        coeffs = (GENERAL_CIRCLE_COEFFS_EVEN if disc.eps == 0
                  else GENERAL_CIRCLE_COEFFS_ODD)
        r = general_r0(disc) if disc.eps == 0 else general_r1(disc)
        return ClusterSpaceSpec("general", 4, r, general_gens(disc), coeffs)
    raise ValueError(f"unknown cluster flavor {flavor!r}")


def default_flavor(disc: Disc) -> str:
    return {-4: "gaussian", -8: "cube", -7: "tent7", -11: "tent11"}.get(
        disc.delta, "general")


def mobius_gens(disc: Disc, flavor: Optional[str] = None) -> tuple[MobiusMap, ...]:
    flavor = flavor or default_flavor(disc)
    table: dict[str, Callable[[Disc], tuple[MobiusMap, ...]]] = {
        "gaussian": gaussian_mobius_gens,
        "cube": cube_mobius_gens,
        "tent7": tent7_mobius_gens,
        "tent11": tent11_mobius_gens,
        "general": general_mobius_gens,
    }
    return table[flavor](disc)


@dataclass(frozen=True)
class Cluster:
    disc: Disc
    flavor: str
    cols: tuple[RawCol, RawCol, RawCol, RawCol]

    @property
    def spec(self) -> ClusterSpaceSpec:
        return cluster_spec(self.disc, self.flavor)

    def gram(self) -> Matrix:
        return gram_of_cols(self.disc, self.cols)

    def is_valid(self) -> bool:
        return self.gram() == self.spec.r_matrix

    def raw_circles(self) -> tuple[RawCol, ...]:
        out = []
        for coeffs in self.spec.circle_coeffs:
            acc = [Fraction(0)] * 4
            for c, col in zip(coeffs, self.cols):
                if c:
                    for i in range(4):
                        acc[i] += c * col[i]
            raw = []
            for x in acc:
                y = x / 2
                if y.denominator != 1:
                    raise ValueError(f"cluster circle is not integral: {acc}")
                raw.append(int(y))
            out.append(tuple(raw))
        return tuple(out)

    def circles(self) -> tuple[OrientedCircle, ...]:
        return tuple(raw_circle(self.disc, t) for t in self.raw_circles())

    def circle_key_set(self) -> frozenset[RawCol]:
        return frozenset(self.raw_circles())

    def curvatures(self) -> tuple[int, ...]:
        return tuple(t[0] for t in self.raw_circles())

    def swap(self, index: int) -> "Cluster":
        """Right-multiply by generator `index` (0-based)."""
        g = self.spec.generators[index]
        new_cols = tuple(
            tuple(sum(self.cols[i][k] * g[i][j] for i in range(4))
                  for k in range(4))
            for j in range(4))
        return Cluster(self.disc, self.flavor, new_cols)

    def translated(self, m: int) -> "Cluster":
        e = self.disc.eps
        return Cluster(self.disc, self.flavor,
                       tuple(raw_translate(c, m, e) for c in self.cols))

    def translation_position(self) -> Optional[Fraction]:
        """Leftmost x-anchor over the circles, None if all translation invariant."""
        best = None
        d = self.disc.abs_delta
        for n, np_, u, v in self.raw_circles():
            if n != 0:
                pos = Fraction(-v, 2 * n)
            elif v != 0:
                pos = Fraction(-np_ * v * d, 4)
            else:
                continue
            if best is None or pos < best:
                best = pos
        return best

    def canonical_mod_translation(self) -> tuple["Cluster", int]:
        pos = self.translation_position()
        if pos is None:
            return self, 0
        m = pos.numerator // pos.denominator
        return self.translated(-m), -m

    def minkvecs(self) -> tuple[MinkVec, ...]:
        return tuple(col_to_vec(self.disc, c) for c in self.cols)

    def __repr__(self):
        return f"Cluster({self.flavor}|{self.disc.delta}, curv={self.curvatures()})"


def cluster_from_minkvecs(disc: Disc, flavor: str,
                          vecs: Sequence[MinkVec]) -> Cluster:
    return Cluster(disc, flavor, tuple(vec_to_col(disc, v) for v in vecs))


def transformed_cluster(m: MobiusMap, cluster: Cluster) -> Cluster:
    """The cluster of images: columns are pushed through rho(m)."""
    from .circle import ext_mat_vec, rho

    rm = rho(m)
    vecs = [ext_mat_vec(rm, v) for v in cluster.minkvecs()]
    return cluster_from_minkvecs(cluster.disc, cluster.flavor, vecs)


def _cols_from_entries(disc: Disc, entries) -> tuple[RawCol, ...]:
    d = disc.abs_delta
    cols = []
    for col in entries:
        vec = tuple(ext(d, p, q) for p, q in col)
        cols.append(vec_to_col(disc, vec))
    return tuple(cols)


def base_cluster(disc: Disc, flavor: Optional[str] = None) -> Cluster:
    flavor = flavor or default_flavor(disc)
    if flavor == "gaussian":
        cols = _cols_from_entries(disc, _BASEQQI)
    elif flavor == "cube":
        cols = tuple(_cols_from_entries(disc, _BASECUBE)[i]
                     for i in CUBICLE_INDICES)
    elif flavor == "tent7":
        five = _cols_from_entries(disc, _BASETENT7)
        cols = tuple(five[i] for i in TENT7_BASE_ORDER)
    elif flavor == "tent11":
        ten = _cols_from_entries(disc, _BASETENT11)
        cols = tuple(
            tuple(sum(int(c) * ten[i][k] for i, c in enumerate(row) if c)
                  for k in range(4))
            for row in TENT11_REP_OF_TENT)
    elif flavor == "general":
        cols = _cols_from_entries(disc, _general_base_entries(disc))
    else:
        raise ValueError(f"unknown cluster flavor {flavor!r}")
    return Cluster(disc, flavor, cols)


def base_tent11_columns(disc: Disc) -> tuple[RawCol, ...]:
    """All ten printed base-tent circles for Q(sqrt(-11))."""
    return _cols_from_entries(disc, _BASETENT11)


def base_cube_columns(disc: Disc) -> tuple[RawCol, ...]:
    """All eight printed base-cube circles for Q(sqrt(-2))."""
    return _cols_from_entries(disc, _BASECUBE)


def tent11_rep_gram() -> Matrix:
    """Gram matrix of the four-belt-vector representation, from the printed tent."""
    disc = disc_cache(-11)
    return gram_of_cols(disc, base_cluster(disc, "tent11").cols)


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------


def verify_cluster(disc: Disc, cols_or_cluster, r: Optional[Matrix] = None) -> bool:
    """Exact Gram check W^t G_M W = R."""
    if isinstance(cols_or_cluster, Cluster):
        return cols_or_cluster.is_valid()
    cols = tuple(cols_or_cluster)
    if cols and not isinstance(cols[0][0], int):
        cols = tuple(vec_to_col(disc, v) for v in cols)
    if r is None:
        raise ValueError("explicit columns need an explicit Gram matrix")
    return gram_of_cols(disc, cols) == _fm(r)


def descartes_check(a, b, c, d) -> bool:
    """(a+b+c+d)^2 = 2(a^2+b^2+c^2+d^2)."""
    return (a + b + c + d) ** 2 == 2 * (a * a + b * b + c * c + d * d)


def soddy_swap(a, b, c, d):
    """The other curvature completing a, b, c: d + d' = 2(a+b+c)."""
    return 2 * (a + b + c) - d


def k_descartes_check(disc: Disc, a, b, c, d) -> bool:
    """2(a^2+b^2+c^2+d^2) - (a+b+c+d)^2 - (delta+4) a^2 = 0, central curvature a.

    Homogeneous of degree two, so the same identity holds for reduced and for
    full curvatures.
    """
    vals = [x if isinstance(x, ExtRat) else ext(disc.abs_delta, Fraction(x))
            for x in (a, b, c, d)]
    a_, b_, c_, d_ = vals
    total = a_ + b_ + c_ + d_
    expr = ((a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_) * 2 - total * total
            - a_ * a_ * (disc.delta + 4))
    return expr.is_zero()


def cube_from_cubicle(disc: Disc, v1: MinkVec, v3: MinkVec, v6: MinkVec,
                      v8: MinkVec) -> tuple[MinkVec, ...]:
    """Complete a cubicle to its cube: 2 v2 = v1 + v3 - v6 + v8 and siblings."""
    cl = cluster_from_minkvecs(disc, "cube", (v1, v3, v6, v8))
    if not cl.is_valid():
        raise ValueError("columns do not satisfy the cubicle Gram matrix")
    return tuple(col_to_vec(disc, t2) for t2 in
                 (tuple(2 * x for x in t) for t in cl.raw_circles()))


def cube_swap(cube: Cluster, face_index: int) -> Cluster:
    """Swap across one of the six faces (1-based index)."""
    if cube.flavor != "cube":
        raise ValueError("cube_swap needs a cube cluster")
    if not 1 <= face_index <= 6:
        raise ValueError("face index must be 1..6")
    return cube.swap(face_index - 1)


def tent7_peaks(tent: Cluster) -> tuple[OrientedCircle, ...]:
    """The circles tangent to only two others: v1, v3, v5."""
    circ = tent.circles()
    return (circ[0], circ[2], circ[4])


def tent7_belt(tent: Cluster) -> tuple[OrientedCircle, ...]:
    """The four-cycle v1, v2, v3, v4 left after removing the swappable peak."""
    return tent.circles()[:4]


def tent_swap_7(tent: Cluster, peak_index: int) -> Cluster:
    """Swap out one of the three peaks (1-based: peaks v1, v3, v5)."""
    if tent.flavor != "tent7":
        raise ValueError("tent_swap_7 needs a tent7 cluster")
    if not 1 <= peak_index <= 3:
        raise ValueError("peak index must be 1..3")
    gen = {1: 1, 2: 2, 3: 0}[peak_index]
    return tent.swap(gen)


# belts in cycle order; belt i is the one preserved by generator i
TENT11_BELT_INDICES = (
    (0, 1, 2, 3, 4, 5),   # v1 v2 v3 v4 v5 v6, invariant sum v1 + v4
    (0, 1, 2, 7, 6, 9),   # v1 v2 v3 v8 v7 v10, invariant sum v1 + v8
    (0, 5, 4, 8, 6, 9),   # v1 v6 v5 v9 v7 v10, invariant sum v1 + v9
    (2, 3, 4, 8, 6, 7),   # v3 v4 v5 v9 v7 v8, invariant sum v3 + v9
)


def tent11_belts(tent: Cluster) -> tuple[tuple[OrientedCircle, ...], ...]:
    """The four six-circle belts of a ten-circle tent, in cycle order."""
    c = tent.circles()
    return tuple(tuple(c[i] for i in belt) for belt in TENT11_BELT_INDICES)


def tent_swap_11(tent: Cluster, belt_index: int) -> Cluster:
    """Swap across one of the four belts (1-based)."""
    if tent.flavor != "tent11":
        raise ValueError("tent_swap_11 needs a tent11 cluster")
    if not 1 <= belt_index <= 4:
        raise ValueError("belt index must be 1..4")
    return tent.swap(belt_index - 1)


def kcluster_swap(cluster: Cluster, gen_index: int) -> Cluster:
    """Apply one of the four generic swap generators (1-based)."""
    if cluster.flavor != "general":
        raise ValueError("kcluster_swap needs a general K-cluster")
    if not 1 <= gen_index <= 4:
        raise ValueError("generator index must be 1..4")
    return cluster.swap(gen_index - 1)
