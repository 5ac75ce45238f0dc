"""
路径管理工具
提供输出目录的检查与创建
"""

from pathlib import Path
from typing import Union

from common.validation.exceptions import ConfigError

PathLike = Union[str, Path]


def check_output_dir(path: PathLike) -> Path:
    """
    检查输出目录是否可创建（不实际创建）

    Args:
        path: 输出目录

    Returns:
        规范化后的 Path

    Raises:
        ConfigError: 路径被普通文件占用或最近的已存在祖先不是目录
    """
    out = Path(path)
    if out.exists() and not out.is_dir():
        raise ConfigError(f"输出路径不是目录: {out}")

    for parent in out.resolve().parents:
        if parent.exists():
            if not parent.is_dir():
                raise ConfigError(f"无法创建输出目录: {out}")
            break
    return out


def ensure_output_dir(path: PathLike) -> Path:
    """
    创建输出目录（包含父目录）

    Args:
        path: 输出目录

    Returns:
        创建后的 Path
    """
    out = check_output_dir(path)
    out.mkdir(parents=True, exist_ok=True)
    return out
