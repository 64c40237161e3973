"""boxext: extend precolored distance-3 matchings to proper edge colorings
of Cartesian products of Class 1 graphs, with an independent brute-force
oracle and verifier."""

from .engine import (
    ColorPairing,
    ExtensionResult,
    HypothesisReport,
    Precoloring,
    ProductExtender,
    check_hypotheses,
    extend,
    pair_colors,
    select_bricks,
    step1,
    step2,
)
from .errors import BoxextError, HypothesisViolation, InternalInvariantError
from .factors import (
    Factor,
    RegularizedFactor,
    bipartite_factor,
    color_bipartite,
    color_even_cycle,
    distance_preservation_check,
    even_cycle_factor,
    regularize,
    validate_factor,
)
from .fuzz import RECIPES, FuzzCase, fuzz
from .graphs import (
    INF,
    EdgeColoring,
    SimpleGraph,
    complete_bipartite,
    cycle,
    edge_distance,
    is_distance_k_matching,
    k2,
    path,
    star,
    structure_report,
    vertex_distance,
)
from .oracle import (
    OracleResult,
    VerificationReport,
    brute_force_extend,
    oracle_on_product,
    verify,
)
from .product import (
    BrickNeighborhood,
    MaterializedProduct,
    ProductEdge,
    ProductSpace,
    SparseColoring,
    Square,
    build_space,
    canonical_color,
    enumerate_bricks,
    local_properness_check,
    make_edge,
    rotate,
)
from .special import (
    ListAssignment,
    TorusInstance,
    extend_bipartite_k2,
    extend_k2_power,
    extend_odd_cycle_k2,
    extend_odd_odd,
    galvin_list_color,
)

__version__ = "0.1.0"
