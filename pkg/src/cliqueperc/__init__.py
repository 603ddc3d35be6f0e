"""Clique percolation on random graphs.

Simulation of overlap components of k-cliques (and oriented / edge-joined /
small-motif variants) in G(n,p), together with the branching-process theory
that predicts the percolation threshold and giant-component fraction.
"""

from .errors import (
    InvalidParameterError,
    NoCrossingError,
    ParseError,
    ResourceGuardError,
    UnsupportedParameterError,
)
from .graphs import (
    DirectedGraph,
    RNG_ALGORITHM,
    UndirectedGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    gen_directed_gnp,
    gen_gnp,
    load_edge_list,
    split_seed,
)
from .cliques import (
    OrientationSpec,
    OrientedCopy,
    SubgraphCopy,
    build_orientation_k4_mixed,
    build_orientation_k_transitive,
    degeneracy_order,
    enumerate_k_cliques,
    enumerate_oriented_copies,
    enumerate_subgraph_copies,
)
from .components import (
    ComponentSummary,
    ExplorationRecord,
    components_by_cross_edges,
    components_by_shared_vertices,
    components_oriented,
    explore_component,
    format_components,
)
from .theory import (
    BranchingParams,
    MultiTypeModel,
    SurvivalEstimate,
    ThresholdReport,
    branching_mc,
    critical_p,
    expected_motif_copies,
    extension_scale,
    heuristic_threshold_c4,
    heuristic_threshold_krr,
    heuristic_threshold_krs,
    mu,
    mu_directed,
    mu_prime,
    nu,
    nu_oriented,
    orientation_type_matrix,
    spectral_radius,
    survival_rho,
    survival_sigma,
    survival_sigma0,
    survival_sigma_multitype,
)
from .experiments import (
    ExperimentConfig,
    GridPoint,
    PointResult,
    SweepResult,
    TOOL_VERSION,
    TrialResult,
    emit,
    estimate_threshold,
    resolve_point,
    run_simulate,
    run_sweep,
    run_trial,
    theory_report,
)

__version__ = TOOL_VERSION

__all__ = [
    "BranchingParams",
    "ComponentSummary",
    "DirectedGraph",
    "ExperimentConfig",
    "ExplorationRecord",
    "GridPoint",
    "InvalidParameterError",
    "MultiTypeModel",
    "NoCrossingError",
    "OrientationSpec",
    "OrientedCopy",
    "ParseError",
    "PointResult",
    "ResourceGuardError",
    "RNG_ALGORITHM",
    "SubgraphCopy",
    "SurvivalEstimate",
    "SweepResult",
    "ThresholdReport",
    "TOOL_VERSION",
    "TrialResult",
    "UndirectedGraph",
    "UnsupportedParameterError",
    "branching_mc",
    "build_orientation_k4_mixed",
    "build_orientation_k_transitive",
    "complete_bipartite_graph",
    "complete_graph",
    "components_by_cross_edges",
    "components_by_shared_vertices",
    "components_oriented",
    "critical_p",
    "cycle_graph",
    "degeneracy_order",
    "emit",
    "enumerate_k_cliques",
    "enumerate_oriented_copies",
    "enumerate_subgraph_copies",
    "estimate_threshold",
    "expected_motif_copies",
    "explore_component",
    "extension_scale",
    "format_components",
    "gen_directed_gnp",
    "gen_gnp",
    "heuristic_threshold_c4",
    "heuristic_threshold_krr",
    "heuristic_threshold_krs",
    "load_edge_list",
    "mu",
    "mu_directed",
    "mu_prime",
    "nu",
    "nu_oriented",
    "orientation_type_matrix",
    "resolve_point",
    "run_simulate",
    "run_sweep",
    "run_trial",
    "spectral_radius",
    "split_seed",
    "survival_rho",
    "survival_sigma",
    "survival_sigma0",
    "survival_sigma_multitype",
    "theory_report",
]
