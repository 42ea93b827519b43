"""Exact feasibility checks and constructions for packings of rooted forests,
hyperforests and branchings with root-count bounds."""

from .core import (
    CapExceeded,
    Digraph,
    Dypergraph,
    ForestpackError,
    Graph,
    HyperforestMember,
    Hypergraph,
    Infeasible,
    InvalidInstance,
    PackingSpec,
    RootedForest,
    RootedForestPacking,
    RootedHyperforestPacking,
    TheoremContradiction,
    capped_sum,
    ell_p,
    validate_spec,
    verify_regular_forest_packing,
)
from .directed import (
    BipartiteRealizationInstance,
    HyperbranchingMember,
    HyperbranchingPacking,
    check_bfbg_conditions,
    check_subpartition_conditions,
    pack_branchings_bounded_desk,
    pack_hyperbranchings_exhaustive,
    realize_bipartite,
    reduce_partition_instance,
    verify_hyperbranching_packing,
)
from .forest_packing import (
    brute_force_regular_packing,
    check_condition_25,
    check_condition_25_matroid,
    check_conditions_27,
    check_conditions_28,
    pack_regular_forests,
    pack_regular_forests_bounded,
    pack_spanning_forests,
)
from .hyper_packing import (
    check_conditions_33,
    find_hyperforest_witness,
    pack_hyperforests,
    trim_to_graph,
    verify_hyperforest_packing,
)
from .matroids import GraphicMatroid, SumMatroid, TruncatedMatroid, matroid_partition, sum_rank_bruteforce
from .partitions import (
    Partition,
    Subpartition,
    crosses,
    entering_count,
    enumerate_partitions,
    enumerate_subpartitions,
    meet_join,
)

__version__ = "0.1.0"
