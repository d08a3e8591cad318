"""recolorlab: dynamic graph recoloring heuristics and their test bench.

Maintain a proper vertex coloring while edges arrive in batches, using
randomized local search with a fixed palette or iterated local search
with Kempe-chain / color-elimination moves on an open-ended palette.
Ships worst-case dynamic instances, exact Markov-chain oracles, and an
experiment harness that measures reoptimization times.
"""

from .bounded import (
    BOUNDED_ALGORITHMS,
    BoundedState,
    ea_step,
    rls_step,
    run_bounded,
    targeted_ea_step,
    targeted_rls_step,
)
from .common import RunResult, StopRule
from .graph import (
    Coloring,
    ColorOccurrenceVector,
    ConflictSet,
    DuplicateEdgeError,
    EmptyConflictSetError,
    Graph,
    GraphError,
    IncompatibleSizeError,
    SelfLoopError,
    VertexRangeError,
    build_graph,
    compare,
    count_conflicts,
    read_edge_list,
    read_instance,
    write_edge_list,
    write_instance,
)
from .instances import (
    ConfigInvalidError,
    GenerationFailedError,
    InstanceSpec,
    generate,
    greedy_coloring,
    grid_edges,
    star_layout,
)
from .oracles import (
    NotTreeInstanceError,
    SingularSystemError,
    TooLargeError,
    check_complete_binary_tree,
    classify_tree_conflict,
    ehrenfest_conditioned_return,
    ehrenfest_first_passage,
    ehrenfest_return_time,
    grundy_number_bruteforce,
    is_bipartite,
    is_grundy,
    recount_all,
)
from .scenarios import (
    SCENARIO_TARGETS,
    InsufficientComponentsError,
    PreparedScenario,
    ScenarioSpec,
    apply_batch,
    apply_scenario,
    build_bipartite_conflict_batch,
    prepare_scenario,
)
from .unbounded import (
    UNBOUNDED_ALGORITHMS,
    NoMaxColorVertexError,
    UnboundedState,
    color_elimination,
    grundy_local_search,
    ils_step,
    kempe_chain,
    max_color_after_insertions_bound,
    run_unbounded,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDED_ALGORITHMS",
    "BoundedState",
    "Coloring",
    "ColorOccurrenceVector",
    "ConfigInvalidError",
    "ConflictSet",
    "DuplicateEdgeError",
    "EmptyConflictSetError",
    "GenerationFailedError",
    "Graph",
    "GraphError",
    "IncompatibleSizeError",
    "InstanceSpec",
    "InsufficientComponentsError",
    "NoMaxColorVertexError",
    "NotTreeInstanceError",
    "PreparedScenario",
    "RunResult",
    "SCENARIO_TARGETS",
    "ScenarioSpec",
    "SelfLoopError",
    "SingularSystemError",
    "StopRule",
    "TooLargeError",
    "UNBOUNDED_ALGORITHMS",
    "UnboundedState",
    "VertexRangeError",
    "apply_batch",
    "apply_scenario",
    "build_bipartite_conflict_batch",
    "build_graph",
    "check_complete_binary_tree",
    "classify_tree_conflict",
    "color_elimination",
    "compare",
    "count_conflicts",
    "ea_step",
    "ehrenfest_conditioned_return",
    "ehrenfest_first_passage",
    "ehrenfest_return_time",
    "generate",
    "greedy_coloring",
    "grid_edges",
    "grundy_local_search",
    "grundy_number_bruteforce",
    "ils_step",
    "is_bipartite",
    "is_grundy",
    "kempe_chain",
    "max_color_after_insertions_bound",
    "read_edge_list",
    "read_instance",
    "recount_all",
    "rls_step",
    "run_bounded",
    "run_unbounded",
    "star_layout",
    "targeted_ea_step",
    "targeted_rls_step",
    "write_edge_list",
    "write_instance",
]
