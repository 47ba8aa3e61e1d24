"""Numerical tools for graded polynomial bases on compact sets:
point-configuration determinants, equilibrium-size estimates, moment
matrices, and normalized Hankel sequences, plus a config-driven
experiment runner.
"""

from .domains import (
    Box,
    Circle,
    CompactFamily,
    CompactSet,
    Disk,
    FiniteSet,
    Interval,
    ProductSet,
    constant_family,
    interval_family,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    RunResult,
    build_compact,
    build_family,
    build_germ,
    build_measure,
    run_experiment,
)
from .functionals import (
    GermCoefficients,
    HankelSequenceReport,
    PolyaTerm,
    coeffs_from_contour,
    coeffs_from_measure,
    coeffs_from_table,
    hankel_logdet,
    hankel_matrix,
    iterated_functional_oracle,
    polya_quantity,
    polya_sequence,
    polya_term,
)
from .linalg import LogDet, exact_logdet, logdet, pairwise_difference_logdet
from .measures import (
    ArcsineMeasure,
    BILINEAR,
    CircleUniform,
    DiscreteMeasure,
    DiskUniform,
    GramMatrix,
    HERMITIAN,
    Measure,
    MonteCarloEstimate,
    ProductMeasure,
    ScaledMeasure,
    UniformSegment,
    bernstein_markov_ratio,
    gram,
    orthonormal_coefficients,
    z_s_gram,
    z_s_montecarlo,
)
from .multiindex import (
    DegreeCounts,
    GradedEnumeration,
    count_at_most,
    count_exact,
    degree,
    degree_counts,
    enumerate_indices,
    enumeration_for,
    monomial,
    monomial_matrix,
)
from .reporting import ReportRow, parse_csv_text, rows_to_csv_text
from .vandermonde import (
    DiameterEstimate,
    FeketeResult,
    SearchStrategy,
    basis_matrix,
    fekete_search,
    transfinite_diameter_estimate,
    vdm_logdet,
    vdm_value,
)

__version__ = "0.1.0"

__all__ = [
    "ArcsineMeasure",
    "BILINEAR",
    "Box",
    "Circle",
    "CircleUniform",
    "CompactFamily",
    "CompactSet",
    "ConfigError",
    "DegreeCounts",
    "DiameterEstimate",
    "DiscreteMeasure",
    "Disk",
    "DiskUniform",
    "ExperimentConfig",
    "FeketeResult",
    "FiniteSet",
    "GermCoefficients",
    "GradedEnumeration",
    "GramMatrix",
    "HERMITIAN",
    "HankelSequenceReport",
    "Interval",
    "LogDet",
    "Measure",
    "MonteCarloEstimate",
    "PolyaTerm",
    "ProductMeasure",
    "ProductSet",
    "ReportRow",
    "RunResult",
    "ScaledMeasure",
    "SearchStrategy",
    "UniformSegment",
    "basis_matrix",
    "bernstein_markov_ratio",
    "build_compact",
    "build_family",
    "build_germ",
    "build_measure",
    "coeffs_from_contour",
    "coeffs_from_measure",
    "coeffs_from_table",
    "constant_family",
    "count_at_most",
    "count_exact",
    "degree",
    "degree_counts",
    "enumerate_indices",
    "enumeration_for",
    "exact_logdet",
    "fekete_search",
    "gram",
    "hankel_logdet",
    "hankel_matrix",
    "interval_family",
    "iterated_functional_oracle",
    "logdet",
    "monomial",
    "monomial_matrix",
    "orthonormal_coefficients",
    "pairwise_difference_logdet",
    "parse_csv_text",
    "polya_quantity",
    "polya_sequence",
    "polya_term",
    "rows_to_csv_text",
    "run_experiment",
    "transfinite_diameter_estimate",
    "vdm_logdet",
    "vdm_value",
    "z_s_gram",
    "z_s_montecarlo",
]
