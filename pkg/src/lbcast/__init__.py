"""Byzantine consensus under identical-broadcast communication.

When every transmission is overheard reliably and identically by all of a
node's neighbors, a faulty node cannot tell different stories to different
neighbors, and consensus becomes possible on far sparser graphs than under
point-to-point channels. This package provides the graph-condition
checkers (which graphs tolerate f faults), the consensus protocol itself,
and a simulator with adversarial strategies and fuzzing to exercise both.
"""

from .conditions import (
    BRUTEFORCE_FAULT_CAP,
    BRUTEFORCE_NODE_CAP,
    CLASS_ACHIEVABLE,
    CLASS_IMPOSSIBLE,
    CLASS_OPEN_GAP,
    ConditionReport,
    FPartition,
    check_necessary,
    check_sufficient,
    classify,
    connects_k,
    is_f_good_bruteforce,
    is_f_good_characterized,
    min_vertex_cut_set,
)
from .graphs import (
    BRUTE_FORCE_NODE_LIMIT,
    Graph,
    GraphFormatError,
    InsufficientPathsError,
    brute_force_min_vertex_cut,
    canonical_disjoint_paths,
    circulant_graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    format_graph,
    gamma,
    gnp_graph,
    is_connected,
    local_connectivity,
    min_degree,
    parse_graph,
    path_graph,
    petersen_graph,
    vertex_connectivity,
)
from .protocol import (
    Bundle,
    NodeState,
    PathTable,
    ReliableValue,
    ReportPayload,
    RoutedMessage,
    believed_transmission,
    build_reports,
    decide,
    identify_faults,
    majority,
    reliable_receive,
    relay_step,
)
from .simnet import (
    ADVERSARIES,
    AdversaryView,
    FuzzSummary,
    Outcome,
    Scenario,
    ScenarioError,
    Strategy,
    Transcript,
    adversary_act,
    decode_actions,
    encode_actions,
    export_transcript,
    fuzz,
    graph_connectivity,
    make_scenario,
    make_strategy,
    outcome_of,
    run_scenario,
    scenario_from_text,
    scenario_to_text,
    search_worst_case,
    structured_families,
    validate_scenario,
    verify_outcome,
)

__version__ = "0.1.0"

__all__ = [
    "ADVERSARIES",
    "AdversaryView",
    "BRUTEFORCE_FAULT_CAP",
    "BRUTEFORCE_NODE_CAP",
    "BRUTE_FORCE_NODE_LIMIT",
    "Bundle",
    "CLASS_ACHIEVABLE",
    "CLASS_IMPOSSIBLE",
    "CLASS_OPEN_GAP",
    "ConditionReport",
    "FPartition",
    "FuzzSummary",
    "Graph",
    "GraphFormatError",
    "InsufficientPathsError",
    "NodeState",
    "Outcome",
    "PathTable",
    "ReliableValue",
    "ReportPayload",
    "RoutedMessage",
    "Scenario",
    "ScenarioError",
    "Strategy",
    "Transcript",
    "adversary_act",
    "believed_transmission",
    "brute_force_min_vertex_cut",
    "build_reports",
    "canonical_disjoint_paths",
    "check_necessary",
    "check_sufficient",
    "circulant_graph",
    "classify",
    "complete_bipartite_graph",
    "complete_graph",
    "connects_k",
    "cycle_graph",
    "decide",
    "decode_actions",
    "encode_actions",
    "export_transcript",
    "format_graph",
    "fuzz",
    "gamma",
    "gnp_graph",
    "graph_connectivity",
    "identify_faults",
    "is_connected",
    "is_f_good_bruteforce",
    "is_f_good_characterized",
    "local_connectivity",
    "majority",
    "make_scenario",
    "make_strategy",
    "min_degree",
    "min_vertex_cut_set",
    "outcome_of",
    "parse_graph",
    "path_graph",
    "petersen_graph",
    "relay_step",
    "reliable_receive",
    "run_scenario",
    "scenario_from_text",
    "scenario_to_text",
    "search_worst_case",
    "structured_families",
    "validate_scenario",
    "verify_outcome",
    "vertex_connectivity",
]
