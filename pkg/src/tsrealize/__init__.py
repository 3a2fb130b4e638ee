"""tsrealize: low-total-length graph realizations of finite metric
spaces, found by locally exploring the 1-skeleton of the tight span.

Exact rational arithmetic throughout; see the README for the CLI and
file formats.
"""

from .errors import RealizationError
from .metric import (
    FiniteMetric,
    RealizationGraph,
    TightPoint,
    kuratowski,
    linf_dist,
    validate_metric,
    verify_realization,
)
from .splits import (
    PointSet2D,
    Split,
    WeightedSplitSystem,
    compatible,
    induced_metric,
    is_two_compatible,
    l1_decompose,
    l1_two_trees,
    split_metric,
)
from .tightspan import (
    adjacent_vertices,
    face_dim,
    in_tight_span,
    is_vertex,
    tight_graph,
)
from .realizer import find_path, pair_schedule, realize, simplex_step, stats
from .instances import (
    gen_double_tree_metric,
    gen_l1_points,
    gen_random_metric,
    gen_tree_metric,
    gen_two_compatible_system,
    hanan_grid,
)
from .mip import build_subrealization_mip, check_assignment, parse_lp, write_lp
from .oracle import (
    enumerate_vertices,
    min_manhattan_length,
    min_subrealization,
    oracle_adjacent,
    skeleton_graph,
)

__version__ = "0.1.0"

__all__ = [
    "FiniteMetric",
    "PointSet2D",
    "RealizationError",
    "RealizationGraph",
    "Split",
    "TightPoint",
    "WeightedSplitSystem",
    "adjacent_vertices",
    "build_subrealization_mip",
    "check_assignment",
    "compatible",
    "enumerate_vertices",
    "face_dim",
    "find_path",
    "gen_double_tree_metric",
    "gen_l1_points",
    "gen_random_metric",
    "gen_tree_metric",
    "gen_two_compatible_system",
    "hanan_grid",
    "in_tight_span",
    "induced_metric",
    "is_two_compatible",
    "is_vertex",
    "kuratowski",
    "l1_decompose",
    "l1_two_trees",
    "linf_dist",
    "min_manhattan_length",
    "min_subrealization",
    "oracle_adjacent",
    "pair_schedule",
    "parse_lp",
    "realize",
    "simplex_step",
    "skeleton_graph",
    "split_metric",
    "stats",
    "tight_graph",
    "validate_metric",
    "verify_realization",
    "write_lp",
]
