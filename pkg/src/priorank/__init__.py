"""Priority derivation from pairwise comparisons, with incoherence priced
as arbitrage: weights by eigenvector or logarithmic least squares,
Hilbert projective distances between rate matrices, O(n) coin-based
elicitation, and a Monte Carlo consistency census.
"""

from .core import (
    ComparisonMatrix,
    DeviationMatrix,
    EPS_NORM,
    EPS_STRUCT,
    FillMode,
    Normalization,
    ParseError,
    PriorityVector,
    ValidationError,
    build_matrix,
    from_weights,
    parse_csv,
    parse_json,
    parse_matrix,
    to_csv,
    to_json,
)
from .elicitation import (
    CoinVector,
    PanelWeights,
    RevisionHint,
    aggregate_panel,
    coin_to_matrix,
    revision_hint,
    synthesize_hierarchy,
)
from .marketrate import (
    NonDiagonalizableError,
    RateDecomposition,
    complex_eigenbasis,
    decompose_rate,
)
from .metricspace import (
    IntegralDistanceEstimate,
    MaxDistanceEstimate,
    PortfolioPoint,
    SamplingPlan,
    hilbert_distance,
    induced_integral_distance,
    induced_max_distance,
)
from .montecarlo import (
    CensusResult,
    MonteCarloRI,
    RiEstimate,
    SAATY_RI,
    SAATY_SCALE,
    census_matrices,
    census_to_csv,
    consistency_census,
    default_ri_source,
    estimate_ri,
    random_reciprocal,
)
from .priority import (
    ConsistencyReport,
    ConvergenceError,
    EigenResult,
    consistency_report,
    deviation_matrix,
    eigen_weights,
    intransitivity,
    llsm_weights,
    nearest_transitive,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonMatrix",
    "PriorityVector",
    "DeviationMatrix",
    "Normalization",
    "FillMode",
    "ValidationError",
    "ParseError",
    "EPS_STRUCT",
    "EPS_NORM",
    "build_matrix",
    "from_weights",
    "parse_csv",
    "parse_json",
    "parse_matrix",
    "to_csv",
    "to_json",
    "EigenResult",
    "ConsistencyReport",
    "ConvergenceError",
    "eigen_weights",
    "llsm_weights",
    "intransitivity",
    "deviation_matrix",
    "nearest_transitive",
    "consistency_report",
    "PortfolioPoint",
    "SamplingPlan",
    "MaxDistanceEstimate",
    "IntegralDistanceEstimate",
    "hilbert_distance",
    "induced_max_distance",
    "induced_integral_distance",
    "CoinVector",
    "PanelWeights",
    "RevisionHint",
    "coin_to_matrix",
    "aggregate_panel",
    "synthesize_hierarchy",
    "revision_hint",
    "RateDecomposition",
    "NonDiagonalizableError",
    "decompose_rate",
    "complex_eigenbasis",
    "CensusResult",
    "RiEstimate",
    "MonteCarloRI",
    "SAATY_SCALE",
    "SAATY_RI",
    "random_reciprocal",
    "estimate_ri",
    "consistency_census",
    "census_matrices",
    "census_to_csv",
    "default_ri_source",
]
