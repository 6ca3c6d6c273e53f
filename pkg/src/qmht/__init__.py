"""Numerical laboratory for multiple quantum hypothesis testing.

Detector constructions (greedy Gram-Schmidt PVM, Holevo-Helstrom, pretty good
measurement, commuting Bayes, embedded POVM), binary and multiple quantum
Chernoff bounds, and n-copy tensor-power experiments with implicit product
eigenstructure.
"""

from .chernoff import (
    ChernoffResult,
    MultipleChernoffResult,
    binary_qcb,
    multiple_qcb,
    q_overlap,
)
from .detectors import (
    BayesConditionReport,
    Detector,
    ErrorReport,
    GsDiagnostics,
    bayes_commuting,
    classical_ml,
    common_eigenbasis,
    epsilon_detector,
    evaluate_errors,
    gs_detector,
    gs_error_bound,
    holevo_helstrom,
    pgm,
    verify_bayes_conditions,
)
from .errors import DimensionLimitError, NumericalConsistencyError, ScenarioError
from .linalg import (
    DensityMatrix,
    HermitianMatrix,
    PowerEigenpair,
    SpectralDecomposition,
    dense_limit,
    fractional_power,
    gram_min_eigenvalue,
    iter_power_eigenpairs,
    kron_power_eigenpairs,
    positive_part_and_support,
    power_eigenvector,
    spectral_decompose,
)
from .tensorlab import (
    ExperimentReport,
    ExperimentRow,
    LiPairResult,
    LiReport,
    PowerHypothesisSet,
    epsilon_schedule,
    gram_convergence_check,
    pairwise_li_check,
    run_power_experiment,
)

__all__ = [
    "BayesConditionReport",
    "ChernoffResult",
    "DensityMatrix",
    "Detector",
    "DimensionLimitError",
    "ErrorReport",
    "ExperimentReport",
    "ExperimentRow",
    "GsDiagnostics",
    "HermitianMatrix",
    "LiPairResult",
    "LiReport",
    "MultipleChernoffResult",
    "NumericalConsistencyError",
    "PowerEigenpair",
    "PowerHypothesisSet",
    "ScenarioError",
    "SpectralDecomposition",
    "bayes_commuting",
    "binary_qcb",
    "classical_ml",
    "common_eigenbasis",
    "dense_limit",
    "epsilon_detector",
    "epsilon_schedule",
    "evaluate_errors",
    "fractional_power",
    "gram_convergence_check",
    "gram_min_eigenvalue",
    "gs_detector",
    "gs_error_bound",
    "holevo_helstrom",
    "iter_power_eigenpairs",
    "kron_power_eigenpairs",
    "multiple_qcb",
    "pairwise_li_check",
    "pgm",
    "positive_part_and_support",
    "power_eigenvector",
    "q_overlap",
    "run_power_experiment",
    "spectral_decompose",
    "verify_bayes_conditions",
]
