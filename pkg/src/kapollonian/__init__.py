"""Exact Schmidt arrangements and K-Apollonian circle packings.

Arbitrary-precision arithmetic over imaginary quadratic integer rings,
oriented circles in Minkowski coordinates, swap groups on quadruples, cubes
and tents, curvature residue censuses, and an SVG-rendering CLI.
"""

from .qint import Disc, DiscError, ExtRat, OKElem, bezout, coprime, disc_cache, ok
from .circle import (
    INF,
    KPoint,
    MobiusMap,
    OrientedCircle,
    apply_mobius,
    circle_from_matrix,
    interior_sign,
    mobius,
    pedoe_embed,
    pedoe_product,
    rhat,
    rho,
    tangency_point,
)
from .clusters import (
    Cluster,
    base_cluster,
    cluster_spec,
    cube_from_cubicle,
    cube_swap,
    descartes_check,
    k_descartes_check,
    kcluster_swap,
    soddy_swap,
    tent_swap_7,
    tent_swap_11,
    verify_cluster,
)
from .arrangement import (
    ArrangementQuery,
    Window,
    build_graph,
    cycle_check,
    enumerate_arrangement,
    fundamental_window,
    generate_packing,
    ghost_chain,
    immediate_tangent,
    straddles,
    tangent_family,
)
from .groups import (
    Superbasis,
    registry,
    sufficiency_audit,
    topograph_bfs,
    topograph_generators,
    topograph_walk,
)
from .curvlab import (
    conjecture_modulus,
    fundamental_census,
    primitivity,
    residue_census,
    table_membership,
)

__version__ = "0.1.0"
