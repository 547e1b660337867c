"""Regression with even-power losses and the machinery to decide when to use them."""

from .data import (
    EstimateReport,
    FitQuality,
    MomentVector,
    RegressionData,
    validate_data,
)
from .criterion import (
    ComparisonRatio,
    CriterionResult,
    FamilySpec,
    adjacent_comparison_ratio,
    boundary_root,
    criterion_by_quadrature,
    efficiency_ratio,
    family_criterion,
    mixture_separation_margin,
    ols_comparison_ratio,
    parameter_sweep,
)
from .decision import (
    DecisionStatistics,
    decide,
    decision_from_residuals,
    influence_covariance,
    influence_weights,
    moment_ratio,
)
from .errors import DataValidationError, NumericalError, TableParseError
from .estimator import (
    SolverConfig,
    fit,
    fit_l2k,
    fit_ols,
    l2k_objective,
    l2k_score,
    sandwich_covariance,
    score_covariance_cross_terms,
)
from .moments import linearization_remainder, sample_central_moments
from .quality import fit_quality, pseudo_r2
from .simulate import (
    EfficiencyStudy,
    NoiseSpec,
    RiskCell,
    RiskTable,
    RoundingSummary,
    population_moment_ratio,
    population_moments,
    run_efficiency_study,
    run_risk_study,
    run_rounding_experiment,
    sample_noise,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonRatio",
    "CriterionResult",
    "DataValidationError",
    "DecisionStatistics",
    "EfficiencyStudy",
    "EstimateReport",
    "FamilySpec",
    "FitQuality",
    "MomentVector",
    "NoiseSpec",
    "NumericalError",
    "RegressionData",
    "RiskCell",
    "RiskTable",
    "RoundingSummary",
    "SolverConfig",
    "TableParseError",
    "adjacent_comparison_ratio",
    "boundary_root",
    "criterion_by_quadrature",
    "decide",
    "decision_from_residuals",
    "efficiency_ratio",
    "family_criterion",
    "fit",
    "fit_l2k",
    "fit_ols",
    "fit_quality",
    "influence_covariance",
    "influence_weights",
    "l2k_objective",
    "l2k_score",
    "linearization_remainder",
    "mixture_separation_margin",
    "moment_ratio",
    "ols_comparison_ratio",
    "parameter_sweep",
    "population_moment_ratio",
    "population_moments",
    "pseudo_r2",
    "run_efficiency_study",
    "run_risk_study",
    "run_rounding_experiment",
    "sample_central_moments",
    "sample_noise",
    "sandwich_covariance",
    "score_covariance_cross_terms",
    "validate_data",
]
