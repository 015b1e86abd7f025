"""Spectral robustness analysis for Laplacians of directed signed graphs."""

from .errors import GraphFormatError, NumericsError, PremiseError
from .graph import (
    EdgePerturbation,
    SignedDigraph,
    induced_subgraph,
    laplacian,
    matrix_scale,
    parse_edge_list,
    split_signs,
    superpose,
)
from .perturb import (
    PairClassification,
    ThetaMatrix,
    classify_pair,
    first_order_zero_eigenvalues,
    sensitive_pairs,
    theta_matrix,
    verify_sensitivity,
)
from .reach import (
    ReachDecomposition,
    canonical_permutation,
    is_strongly_connected,
    permutation_matrix,
    reach_decomposition,
    reachable_set,
)
from .robustness import (
    DeltaStarResult,
    EffectiveResistance,
    FrequencyGrid,
    TransferSample,
    check_spectrum_condition,
    delta_star,
    effective_resistance_directed,
    effective_resistance_undirected,
    nyquist_sweep,
    r_value,
    rank_one_spectrum_check,
    solve_lyapunov,
)
from .simulate import SimulationTrace, consensus_reached, simulate
from .spectral import (
    NullBasis,
    eigenvalues,
    helmert_basis,
    householder_basis,
    null_basis,
    null_left_vectors,
    null_right_vectors,
    reduced_laplacian,
    zero_multiplicity,
)

__version__ = "0.1.0"
