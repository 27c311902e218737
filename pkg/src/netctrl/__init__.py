"""Functional target controllability of linear structured networks.

Decide from graph structure alone whether designated target variables can be
steered along arbitrary smooth trajectories, find a minimum set of steering
nodes within an available set, classify available nodes by their importance,
and cross-validate every structural verdict numerically on random
instantiations.
"""

from .controllability import (
    FunctionalVerdict,
    MtcpSolution,
    NodeClassification,
    NodeLabel,
    StructuralReport,
    Unsolvable,
    UnsolvableError,
    classify_nodes,
    generic_rank,
    is_functional_output_controllable,
    is_functional_target_controllable,
    is_structurally_controllable,
    solve_mtcp,
)
from .flow import (
    AuxiliaryGraph,
    Flow,
    Linking,
    PreconditionError,
    build_auxiliary_graph,
    extract_linking,
    max_flow,
    max_linking_size,
    maximum_linking,
    min_cut_source_set,
    minimal_left_separator,
    preprocess_direct,
)
from .numeric import (
    NumericInstance,
    SingularSampleError,
    TrajectoryTask,
    TrialReport,
    cross_validate,
    default_reference,
    instantiate,
    numeric_rank,
    pointwise_output_ctrb_rank,
    state_ctrb_rank,
    track_trajectory,
    trajectory_to_csv,
    transfer_rank,
)
from .system import (
    ParseError,
    StructuredSystem,
    SystemGraph,
    ValidationError,
    build_graph,
    parse_system,
    serialize_dot,
    serialize_system,
    system_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AuxiliaryGraph",
    "Flow",
    "FunctionalVerdict",
    "Linking",
    "MtcpSolution",
    "NodeClassification",
    "NodeLabel",
    "NumericInstance",
    "ParseError",
    "PreconditionError",
    "SingularSampleError",
    "StructuralReport",
    "StructuredSystem",
    "SystemGraph",
    "TrajectoryTask",
    "TrialReport",
    "Unsolvable",
    "UnsolvableError",
    "ValidationError",
    "build_auxiliary_graph",
    "build_graph",
    "classify_nodes",
    "cross_validate",
    "default_reference",
    "extract_linking",
    "generic_rank",
    "instantiate",
    "is_functional_output_controllable",
    "is_functional_target_controllable",
    "is_structurally_controllable",
    "max_flow",
    "max_linking_size",
    "maximum_linking",
    "min_cut_source_set",
    "minimal_left_separator",
    "numeric_rank",
    "parse_system",
    "pointwise_output_ctrb_rank",
    "preprocess_direct",
    "serialize_dot",
    "serialize_system",
    "solve_mtcp",
    "state_ctrb_rank",
    "system_to_json",
    "track_trajectory",
    "trajectory_to_csv",
    "transfer_rank",
    "__version__",
]
