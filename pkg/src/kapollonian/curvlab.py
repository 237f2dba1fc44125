"""Curvature census and residue-obstruction experiments.

Reduced curvatures of a packing miss certain residue classes; the observed
obstructions live entirely at the primes 2 and 3, with the relevant power of
2 determined by the discriminant class modulo 32 and the power of 3 by the
class modulo 12.  The tables below list the admissible residue sets per
class; a census at a finite bound is compared against them after a
saturation check.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arrangement import PackingResult, generate_packing
from .circle import OrientedCircle, pedoe_product4, tangency_point
from .clusters import base_cluster
from .qint import Disc, ok

SCHEMA_VERSION = 1


def valuation_2(disc: Disc) -> int:
    residue = disc.delta % 32
    if residue == 28:
        return 3
    if residue in (8, 12, 20, 24):
        return 2
    if residue in (0, 4, 16):
        return 1
    return 0


def valuation_3(disc: Disc) -> int:
    return 1 if disc.delta % 12 in (5, 8) else 0


def conjecture_modulus(disc: Disc) -> tuple[int, int, int]:
    """(M, v2, v3) with M = 2^v2 * 3^v3; always a divisor of 24."""
    v2, v3 = valuation_2(disc), valuation_3(disc)
    return 2 ** v2 * 3 ** v3, v2, v3


# admissible residue sets at the prime 2, keyed by delta mod 32
TABLE_PRIME2 = {
    (0, 4, 16): (2, ({0, 1}, {1})),
    (8, 24): (4, ({0, 2, 3}, {0, 1, 2})),
    (12,): (4, ({0, 1}, {1, 2}, {2, 3}, {0, 3})),
    (20,): (4, ({1}, {3}, {0, 1, 2, 3})),
    (28,): (8, ({0, 1, 4}, {2, 3, 6, 7}, {0, 4, 5})),
}

# admissible residue sets at the prime 3, keyed by delta mod 12
TABLE_PRIME3 = {
    (5, 8): ({0, 1}, {0, 2}),
}


def _table2_row(disc: Disc):
    r = disc.delta % 32
    for classes, row in TABLE_PRIME2.items():
        if r in classes:
            return row
    return None


def _table3_row(disc: Disc):
    r = disc.delta % 12
    for classes, row in TABLE_PRIME3.items():
        if r in classes:
            return row
    return None


@dataclass
class ResidueReport:
    disc: Disc
    packing_id: str
    modulus: int
    bound: int
    counts: dict[int, int]

    @property
    def residues(self) -> set[int]:
        return {r for r, c in self.counts.items() if c > 0}

    def as_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "disc": self.disc.delta,
            "packing": self.packing_id,
            "modulus": self.modulus,
            "bound": self.bound,
            "residues": sorted(self.residues),
            "counts": {str(r): self.counts[r] for r in sorted(self.counts)},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["residue", "count"])
        for r in sorted(self.counts):
            writer.writerow([r, self.counts[r]])
        return buf.getvalue()


def residue_census(circles: Iterable[OrientedCircle], modulus: int,
                   disc: Optional[Disc] = None, bound: int = 0,
                   packing_id: str = "") -> ResidueReport:
    """Residue histogram of the reduced curvatures of distinct circles."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    seen = set()
    counts: dict[int, int] = {}
    d = disc
    for c in circles:
        d = d or c.disc
        key = c.unoriented_key()
        if key in seen:
            continue
        seen.add(key)
        counts[c.n % modulus] = counts.get(c.n % modulus, 0) + 1
    if d is None:
        raise ValueError("empty census needs an explicit disc")
    return ResidueReport(d, packing_id, modulus, bound, counts)


def fundamental_census(disc: Disc, modulus: int, bound: int = 1000,
                       workers: int = 1) -> ResidueReport:
    """Census of the packing of the base cluster, searched modulo translation."""
    pk = generate_packing(disc, base_cluster(disc), bound, workers=workers)
    return residue_census(pk.circles, modulus, disc=disc, bound=bound,
                          packing_id=f"fundamental[{disc.delta}]")


def bounded_base_cluster(disc: Disc):
    """A base cluster generating a bounded packing.

    The map [[delta, gamma], [m, -tau]] with tau*(-delta) - m*gamma = ...
    pole at tau/m is applied to the strip base; m is the smallest integer
    putting the pole strictly inside the open unit-curvature disk of the
    packing, so no image circle passes through infinity.  For Q(sqrt(-2)),
    m = 3 and the outer circle has reduced curvature -1 as in the figures.
    """
    from .circle import mobius
    from .clusters import transformed_cluster
    from .qint import bezout

    d = disc.abs_delta
    e = disc.eps
    tau = ok(disc, 0, 1)
    for m in range(2, 4 * d):
        # pole tau/m strictly inside the disk of the circle (1, 0, 1, 0):
        # centre (0, 1/d), radius 1/sqrt(d) in (x, y/sqrt d) coordinates
        x = Fraction(e, 2 * m)
        yh = Fraction(1, 2 * m)
        if x * x + (yh - Fraction(1, d)) ** 2 * d >= Fraction(1, d):
            continue
        sol = bezout(-tau, ok(disc, m, 0))
        if sol is None:
            continue
        gamma, delta = sol
        mob = mobius(disc, delta, gamma, m, -tau)
        cluster = transformed_cluster(mob, base_cluster(disc))
        if all(t[0] != 0 for t in cluster.raw_circles()):
            return cluster
    raise AssertionError(f"no bounded model found for {disc}")


def bounded_census(disc: Disc, modulus: int, bound: int = 1000,
                   workers: int = 1) -> ResidueReport:
    pk = generate_packing(disc, bounded_base_cluster(disc), bound,
                          quotient=False, workers=workers)
    return residue_census(pk.circles, modulus, disc=disc, bound=bound,
                          packing_id=f"bounded[{disc.delta}]")


def table_membership(disc: Disc, observed: set[int], modulus: int) -> bool:
    """Whether the observed residue set matches the admissible tables.

    The set mod M is projected to the prime-power moduli of the tables; a
    discriminant class with no table row imposes no constraint at that prime.
    """
    row2 = _table2_row(disc)
    if row2 is not None:
        m2, alternatives = row2
        if modulus % m2 != 0:
            raise ValueError(f"modulus {modulus} does not see the prime-2 table")
        proj = {x % m2 for x in observed}
        if proj not in list(alternatives):
            return False
    row3 = _table3_row(disc)
    if row3 is not None:
        if modulus % 3 != 0:
            raise ValueError(f"modulus {modulus} does not see the prime-3 table")
        proj = {x % 3 for x in observed}
        if proj not in list(row3):
            return False
    return True


def census_saturated(disc: Disc, modulus: int, bound: int,
                     workers: int = 1) -> tuple[bool, ResidueReport, ResidueReport]:
    """Same residue set at the bound and at twice the bound."""
    small = fundamental_census(disc, modulus, bound, workers=workers)
    big = fundamental_census(disc, modulus, 2 * bound, workers=workers)
    return small.residues == big.residues, small, big


def primitivity(circles: Sequence[OrientedCircle],
                identity_samples: int = 6) -> int:
    """gcd of the reduced curvatures of a packing.

    As a side check, on externally tangent sample pairs the curvature sum is
    verified to equal the norm of the reduced denominator of the tangency
    point.
    """
    circles = list(circles)
    if len(circles) < 2:
        raise ValueError("primitivity needs at least two circles")
    g = 0
    for c in circles:
        g = math.gcd(g, c.n)
    checked = 0
    for i, c1 in enumerate(circles):
        if checked >= identity_samples:
            break
        for c2 in circles[i + 1:]:
            if pedoe_product4(c1, c2) == -4 and \
                    c1.unoriented_key() != c2.unoriented_key():
                assert _tangency_sum_identity(c1, c2), (c1, c2)
                checked += 1
                break
    return g


def _tangency_sum_identity(c1: OrientedCircle, c2: OrientedCircle) -> bool:
    """curv(C1) + curv(C2) = N(denominator of the tangency point), reduced."""
    z = tangency_point(c1, c2)
    disc = c1.disc
    if z.infinite:
        return c1.n + c2.n == 0
    den = z.p.denominator
    den *= z.q.denominator // math.gcd(den, z.q.denominator)
    w0 = ok(disc, int(z.p * den), int(z.q * den))
    if w0.is_zero():
        norm_beta = 1
    else:
        content = math.gcd(w0.norm(), math.gcd(den * den, den * w0.trace()))
        norm_beta = den * den // content
    return c1.n + c2.n == norm_beta


def small_prime_classes_all_hit(disc: Disc, primes=(5, 7, 11),
                                bound: int = 1000) -> bool:
    """Every residue class modulo 5, 7 and 11 is attained by the bound."""
    pk = generate_packing(disc, base_cluster(disc), bound)
    ns = {c.n for c in pk.circles}
    for p in primes:
        if {n % p for n in ns} != set(range(p)):
            return False
    return True
