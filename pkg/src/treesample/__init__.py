"""Samplers for single-root dependency-tree distributions.

Exact inference (partitions, marginals) via the single-root Matrix-Tree
route, with-replacement samplers (random-walk and ancestral), sampling
without replacement (incremental trie and stochastic beam search), and a
brute-force enumeration oracle for verification.
"""

from .colbourn import ColbournState, colbourn_sample, initial_state, transit_state, transition_probs
from .errors import DegenerateDistributionError, RejectionBudgetError, StuckWalkError
from .graph import (
    ROOT,
    GraphFormatError,
    WeightDistributionSpec,
    WeightedGraph,
    complete_unit_graph,
    random_graph,
    read_graph,
    validate,
    with_root_weights,
    write_graph,
)
from .mtt import (
    laplacian_single_root,
    laplacian_spanning,
    log_partition_dependency,
    log_partition_spanning,
    marginals,
    partition_dependency,
    partition_spanning,
    root_marginals,
)
from .oracle import (
    ExactDistribution,
    RatioSummary,
    RejectionRatioSummary,
    enumerate_trees,
    exact_marginals,
    expected_rejection_ratio,
    ratio_simulation,
)
from .swor import BeamItem, SworItem, SworResult, sbs_swor, trie_swor
from .tree import (
    is_dependency_tree,
    is_spanning_tree,
    log_tree_weight,
    read_tree,
    tree_record,
    tree_weight,
    write_tree,
)
from .wilson import (
    SamplerReport,
    WilsonSampler,
    bias_demo_graph,
    wilson_marginal,
    wilson_rc,
    wilson_reject,
    wilson_spanning,
)

__version__ = "0.1.0"

__all__ = [
    "ROOT",
    "BeamItem",
    "ColbournState",
    "DegenerateDistributionError",
    "ExactDistribution",
    "GraphFormatError",
    "RatioSummary",
    "RejectionBudgetError",
    "RejectionRatioSummary",
    "SamplerReport",
    "StuckWalkError",
    "SworItem",
    "SworResult",
    "WeightDistributionSpec",
    "WeightedGraph",
    "WilsonSampler",
    "bias_demo_graph",
    "colbourn_sample",
    "complete_unit_graph",
    "enumerate_trees",
    "exact_marginals",
    "expected_rejection_ratio",
    "initial_state",
    "is_dependency_tree",
    "is_spanning_tree",
    "laplacian_single_root",
    "laplacian_spanning",
    "log_partition_dependency",
    "log_partition_spanning",
    "log_tree_weight",
    "marginals",
    "partition_dependency",
    "partition_spanning",
    "random_graph",
    "ratio_simulation",
    "read_graph",
    "read_tree",
    "root_marginals",
    "sbs_swor",
    "transit_state",
    "transition_probs",
    "tree_record",
    "tree_weight",
    "trie_swor",
    "validate",
    "wilson_marginal",
    "wilson_rc",
    "wilson_reject",
    "wilson_spanning",
    "with_root_weights",
    "write_graph",
    "write_tree",
]
