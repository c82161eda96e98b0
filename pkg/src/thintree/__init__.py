"""Thin tree positions of weighted graphs and the pinch clusters they expose."""

from .graph_core import (
    GraphError, Partition, QuotientGraph, WeightedGraph, boundary, build_graph, cut_weight,
    make_partition, pair_weight, quotient_graph, set_weight,
)
from .tree_position import (
    EPS, TreeError, TreePosition, WidthProfile, adjacency_weight, caterpillar_position, cut,
    enumerate_positions, random_position, slope, validate, width, width_profile,
)
from .shift_engine import (
    BranchShift, IterationCapExceeded, ThinConfig, ThinResult, apply_branch_shift, certify,
    is_weakly_reducible_exhaustive, reduction_scan, run_thin, thin,
)
from .tilo import induced_quotient, tilo_reducible, tilo_shift, tilo_widths
from .clustering import (
    ClusterError, PinchClusterPair, extract_all_clusters, local_minima, verify_pinch_cluster,
)
from .generators import barbell, gen_planted
from .formats import (
    ParseError, export_dot, load_edge_list, load_matrix_market, save_edge_list,
)

__version__ = "0.1.0"
