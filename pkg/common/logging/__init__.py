"""
日志处理模块
"""

from .logger import (
    PROJECT_LOGGER_NAME,
    get_logger,
    get_module_logger,
    set_project_level,
    setup_logger,
)

__all__ = [
    "PROJECT_LOGGER_NAME",
    "get_logger",
    "get_module_logger",
    "set_project_level",
    "setup_logger",
]
