"""Forcing numbers, bounds, and structure of bipartite circulant graphs."""

from .circulant import (
    AffineMap,
    BipartiteGraph,
    CirculantSpec,
    CycleDecomposition,
    InvalidSpecError,
    affine_orbit,
    affine_transform,
    build_graph,
    canonical_form,
    complement_spec,
    cycle_decomposition,
    format_spec,
    is_connected_bfs,
    is_connected_gcd,
    normalize,
    parse_spec,
)
from .families import (
    FamilyDescriptor,
    FamilyKind,
    FamilyParameterError,
    classify,
    classify_detailed,
    expand_family,
    mr_lower_bound,
    predict_z,
    verify_prime_uniqueness,
)
from .forcing import ForcingTrace, closure, is_forcing_set
from .isomorphism import (
    IsoCertificate,
    ScanFinding,
    bipartite_isomorphic,
    compare_specs,
    conjecture_scan,
    enumerate_cubic_bipartite,
    verify_cubic_uniqueness,
)
from .linalg import IntMatrix, graph_from_matrix, rank, rank_invariance_check, to_matrix
from .solver import (
    BoundReport,
    Budget,
    BudgetExceededError,
    DisconnectedGraphError,
    SolveResult,
    WitnessError,
    bounds_report,
    lower_bounds,
    solve_exact,
    solve_graph,
    upper_bound_cycle,
    upper_bound_span,
)

__version__ = "0.1.0"
