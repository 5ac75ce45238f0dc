"""
带符号三元组动态分析包
三元组普查、马尔可夫链、时变估计、预测评估与统计检验
"""

__version__ = "1.0.0"

from .forecast import (
    METHODS,
    ForecastReport,
    evaluate_methods,
    forecast_one_step,
    rmse,
    tune_hyperparams,
)
from .markov import (
    QuadrantSummary,
    TransitionMatrix,
    average_transition,
    frobenius_diff_series,
    normalize_rows,
    quadrant_summary,
    stationary,
)
from .stats import GrangerResult, align_series, granger, pearson, stability_vs_exogenous
from .triads import (
    CensusVector,
    TransitionCounts,
    TriadTypeTable,
    balanced_share,
    build_type_table,
    canonicalize,
    census,
    classify_balance,
    decode,
    encode,
    transition_counts,
    verify_type_table,
)
from .tvsolver import SolveResult, SolverConfig, estimate, objective, project_row_simplex

__all__ = [
    "__version__",
    "METHODS",
    "ForecastReport",
    "evaluate_methods",
    "forecast_one_step",
    "rmse",
    "tune_hyperparams",
    "QuadrantSummary",
    "TransitionMatrix",
    "average_transition",
    "frobenius_diff_series",
    "normalize_rows",
    "quadrant_summary",
    "stationary",
    "GrangerResult",
    "align_series",
    "granger",
    "pearson",
    "stability_vs_exogenous",
    "CensusVector",
    "TransitionCounts",
    "TriadTypeTable",
    "balanced_share",
    "build_type_table",
    "canonicalize",
    "census",
    "classify_balance",
    "decode",
    "encode",
    "transition_counts",
    "verify_type_table",
    "SolveResult",
    "SolverConfig",
    "estimate",
    "objective",
    "project_row_simplex",
]
