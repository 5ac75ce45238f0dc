"""
通用工具函数模块
"""

from .calculations import (
    calculate_distribution,
    calculate_percentage,
    calculate_percentage_bar,
    count_triples,
    five_number_summary,
    format_percentage_display,
    mean_and_std,
)
from .path_utils import (
    check_output_dir,
    ensure_output_dir,
)

__all__ = [
    # calculations
    "calculate_distribution",
    "calculate_percentage",
    "calculate_percentage_bar",
    "count_triples",
    "five_number_summary",
    "format_percentage_display",
    "mean_and_std",
    # path_utils
    "check_output_dir",
    "ensure_output_dir",
]
