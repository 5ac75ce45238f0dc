"""
验证和异常处理模块
"""

from .error_handling import (
    EXIT_ANALYSIS_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    describe_error,
    exit_code_for,
    handle_cli_errors,
)
from .exceptions import (
    AnalysisError,
    ConfigError,
    ConvergenceError,
    DataValidationError,
    DuplicateLabelError,
    EmptyInputError,
    InputError,
    InsufficientDataError,
    MalformedInputError,
    RankDeficiencyError,
    TriadAnalysisError,
    UnknownNodeError,
    ZeroVarianceError,
)
from .validators import (
    BALANCE_MODELS,
    PENALTY_MODES,
    ZERO_ROW_POLICIES,
    require_valid,
    validate_balance_model,
    validate_file_path,
    validate_lambda,
    validate_model_arg,
    validate_penalty_mode,
    validate_period_days,
    validate_probability_vector,
    validate_row_stochastic,
)

__all__ = [
    # error handling
    "EXIT_ANALYSIS_FAILURE",
    "EXIT_INPUT_ERROR",
    "EXIT_OK",
    "describe_error",
    "exit_code_for",
    "handle_cli_errors",
    # exceptions
    "AnalysisError",
    "ConfigError",
    "ConvergenceError",
    "DataValidationError",
    "DuplicateLabelError",
    "EmptyInputError",
    "InputError",
    "InsufficientDataError",
    "MalformedInputError",
    "RankDeficiencyError",
    "TriadAnalysisError",
    "UnknownNodeError",
    "ZeroVarianceError",
    # validators
    "BALANCE_MODELS",
    "PENALTY_MODES",
    "ZERO_ROW_POLICIES",
    "require_valid",
    "validate_balance_model",
    "validate_file_path",
    "validate_lambda",
    "validate_model_arg",
    "validate_penalty_mode",
    "validate_period_days",
    "validate_probability_vector",
    "validate_row_stochastic",
]
