"""
输入验证模块
提供配置项和数值数据的验证功能
"""

import math
from functools import wraps
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import DataValidationError

BALANCE_MODELS = ("classical", "clustering", "transitivity")
PENALTY_MODES = ("matrix", "row-groups")
ZERO_ROW_POLICIES = ("identity", "uniform")


def validate_period_days(days) -> Tuple[bool, Optional[str]]:
    """
    验证周期长度（天）

    Args:
        days: 周期长度

    Returns:
        (是否有效, 错误信息)
    """
    if isinstance(days, bool) or not isinstance(days, int):
        return False, "周期长度必须是整数"

    if days < 1:
        return False, "周期长度必须大于 0"

    return True, None


def validate_balance_model(model: str) -> Tuple[bool, Optional[str]]:
    """
    验证平衡模型名称

    Args:
        model: classical / clustering / transitivity

    Returns:
        (是否有效, 错误信息)
    """
    if model not in BALANCE_MODELS:
        return False, f"未知的平衡模型: {model}（可选: {', '.join(BALANCE_MODELS)}）"
    return True, None


def validate_penalty_mode(mode: str) -> Tuple[bool, Optional[str]]:
    """验证求解器惩罚模式"""
    if mode not in PENALTY_MODES:
        return False, f"未知的惩罚模式: {mode}（可选: {', '.join(PENALTY_MODES)}）"
    return True, None


def validate_lambda(value, name: str = "lambda") -> Tuple[bool, Optional[str]]:
    """
    验证正则化权重

    Args:
        value: 权重值
        name: 参数名（用于错误信息）

    Returns:
        (是否有效, 错误信息)
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False, f"{name} 必须是数值"

    if not math.isfinite(value):
        return False, f"{name} 必须是有限值"

    if value < 0:
        return False, f"{name} 不能为负数"

    return True, None


def validate_file_path(path: str, must_exist: bool = False) -> Tuple[bool, Optional[str]]:
    """
    验证文件路径

    Args:
        path: 文件路径
        must_exist: 文件是否必须存在

    Returns:
        (是否有效, 错误信息)
    """
    if not path:
        return False, "文件路径不能为空"

    if "\x00" in str(path):
        return False, "文件路径包含非法字符"

    if must_exist and not Path(path).is_file():
        return False, f"文件不存在: {path}"

    return True, None


def validate_probability_vector(
    vector: Sequence[float], atol: float = 1e-9
) -> Tuple[bool, Optional[str]]:
    """
    验证概率向量（非负且和为 1）

    Args:
        vector: 待验证向量
        atol: 求和容差

    Returns:
        (是否有效, 错误信息)
    """
    arr = np.asarray(vector, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        return False, "概率向量必须是非空一维数组"

    if not np.all(np.isfinite(arr)):
        return False, "概率向量包含非有限值"

    if np.any(arr < -atol):
        return False, "概率向量包含负值"

    if abs(arr.sum() - 1.0) > atol:
        return False, f"概率向量之和为 {arr.sum():.12g}，应为 1"

    return True, None


def validate_row_stochastic(matrix, atol: float = 1e-9) -> Tuple[bool, Optional[str]]:
    """
    验证行随机矩阵

    Args:
        matrix: 方阵
        atol: 行和容差

    Returns:
        (是否有效, 错误信息)
    """
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False, f"转移矩阵必须是方阵，实际形状 {arr.shape}"

    if not np.all(np.isfinite(arr)):
        return False, "转移矩阵包含非有限值"

    if np.any(arr < -atol):
        return False, "转移矩阵包含负值"

    row_error = np.abs(arr.sum(axis=1) - 1.0)
    if np.any(row_error > atol):
        worst = int(np.argmax(row_error))
        return False, f"第 {worst} 行之和偏离 1（误差 {row_error[worst]:.3g}）"

    return True, None


# 装饰器：自动验证函数参数
def validate_model_arg(func):
    """装饰器：验证名为 model 的平衡模型参数"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        model = kwargs.get("model", args[-1] if args else None)
        valid, error = validate_balance_model(model)
        if not valid:
            raise DataValidationError(f"平衡模型验证失败: {error}")
        return func(*args, **kwargs)

    return wrapper


def require_valid(result: Tuple[bool, Optional[str]], prefix: str = "") -> None:
    """将 (是否有效, 错误信息) 转换为异常"""
    valid, error = result
    if not valid:
        raise DataValidationError(f"{prefix}{error}" if prefix else error)
