"""Convex-layer construction for the symmetric TSP, with baselines and exact oracles."""

from .geometry import (
    Layer,
    LayerDecomposition,
    LayerKind,
    Orientation,
    Point,
    convex_hull,
    convex_layers,
    orientation,
    polygon_signed_area,
    segments_properly_intersect,
)
from .heuristics import (
    MergePolicy,
    SolveReport,
    brute_force_optimal,
    farthest_insertion_tour,
    greedy_edge_tour,
    held_karp_optimal,
    merge_layers,
    nearest_neighbor_tour,
    onion_solve,
)
from .instance import (
    MetricKind,
    TspInstance,
    load_dantzig42,
    load_dantzig42_opt_tour,
    parse_opt_tour,
    parse_tsplib,
    random_convex_instance,
    random_uniform_instance,
    read_tsplib,
)
from .tour import (
    DetourFlag,
    Tour,
    detour_flags,
    find_crossings,
    improve_tour,
    or_opt_improve,
    tour_area,
    tour_length,
    two_opt_improve,
)

__version__ = "0.1.0"
