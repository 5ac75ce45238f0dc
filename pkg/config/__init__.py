"""
配置管理包
"""

from .settings import (
    DEFAULT_GRID,
    Config,
    SolverConfig,
    get_config,
    load_config,
)

__all__ = ["DEFAULT_GRID", "Config", "SolverConfig", "get_config", "load_config"]
