"""Event-tree generation, reduction, partitioning and probabilistic analysis."""

from .errors import EventTreeError
from .prob import (
    ProbabilityModel,
    exp_cdf,
    prob_branch,
    prob_generate,
    prob_list,
    prob_node,
    prob_path,
    prob_tree,
    prod,
    sum_prob,
    sum_prob_2d,
    two_state,
)
from .sample_space import (
    OutcomeSpace,
    WorldModel,
    inter_product,
    n_product,
    oracle_prob,
    product,
    validate_space,
)
from .transform import PartitionSpec, ReductionSpec, partition, path_event, reduce, reduce_many
from .tree import (
    Atomic,
    AtomicEvent,
    Branch,
    Node,
    Path,
    branch_product,
    down,
    fold_paths,
    generate,
    paths,
    semantics,
    tree_paths,
    up,
    wrap_atomic,
)

__version__ = "0.1.0"
