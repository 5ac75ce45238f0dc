"""
通用计算工具函数
避免代码重复的计算逻辑
"""

from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

Number = Union[int, float]


def calculate_percentage(
    value: Number,
    total: Number,
    decimal_places: int = 1,
    min_value: float = 0.0,
    max_value: float = 100.0,
) -> float:
    """
    计算百分比

    Args:
        value: 当前值
        total: 总值
        decimal_places: 小数位数
        min_value: 最小值限制
        max_value: 最大值限制

    Returns:
        百分比值
    """
    if total <= 0:
        return 0.0

    percentage = (value / total) * 100
    percentage = max(min_value, min(percentage, max_value))

    return round(percentage, decimal_places)


def calculate_percentage_bar(
    percentage: float, bar_length: int = 20, fill_char: str = "█", empty_char: str = "░"
) -> str:
    """
    生成百分比进度条

    Args:
        percentage: 百分比（0-100）
        bar_length: 进度条长度
        fill_char: 填充字符
        empty_char: 空白字符

    Returns:
        进度条字符串
    """
    filled = int(percentage * bar_length / 100)
    filled = max(0, min(filled, bar_length))

    return fill_char * filled + empty_char * (bar_length - filled)


def format_percentage_display(
    percentage: float, include_bar: bool = True, bar_length: int = 10, include_number: bool = True
) -> str:
    """
    格式化百分比显示

    Args:
        percentage: 百分比值
        include_bar: 是否包含进度条
        bar_length: 进度条长度
        include_number: 是否包含数字

    Returns:
        格式化的字符串
    """
    parts = []

    if include_number:
        parts.append(f"{percentage:5.1f}%")

    if include_bar:
        parts.append(calculate_percentage_bar(percentage, bar_length))

    return " ".join(parts)


def count_triples(n: int) -> int:
    """n 个节点的无序三元组数量 C(n, 3)"""
    if n < 3:
        return 0
    return comb(n, 3)


def five_number_summary(values: Iterable[Number]) -> Dict[str, float]:
    """
    计算五数概括（最小值、四分位数、中位数、最大值）

    Args:
        values: 数值序列

    Returns:
        {"count", "min", "q1", "median", "q3", "max"}；空序列时统计量为 None
    """
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        return {"count": 0, "min": None, "q1": None, "median": None, "q3": None, "max": None}

    q1, median, q3 = np.percentile(arr, [25, 50, 75])
    return {
        "count": int(arr.size),
        "min": float(arr.min()),
        "q1": float(q1),
        "median": float(median),
        "q3": float(q3),
        "max": float(arr.max()),
    }


def mean_and_std(rows: Sequence[Sequence[Number]]) -> Tuple[np.ndarray, np.ndarray]:
    """
    按列计算均值和总体标准差

    Args:
        rows: 二维数据（行为观测）

    Returns:
        (均值向量, 标准差向量)
    """
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("mean_and_std 需要非空二维数据")
    return arr.mean(axis=0), arr.std(axis=0)


def calculate_distribution(
    values: Sequence[Number], labels: Sequence, top_k: int = None
) -> List[Tuple[object, float, float]]:
    """
    计算分布统计：按值降序排列并给出累计占比

    Args:
        values: 各项数值（非负）
        labels: 各项标签
        top_k: 仅返回前 k 项

    Returns:
        [(标签, 占比, 累计占比)] 列表
    """
    arr = np.asarray(values, dtype=float)
    total = arr.sum()
    if arr.size == 0 or total <= 0:
        return []

    # 稳定排序保证并列时按原顺序
    order = np.argsort(-arr, kind="stable")
    if top_k is not None:
        order = order[:top_k]

    results = []
    cumulative = 0.0
    for idx in order:
        share = float(arr[idx] / total)
        cumulative += share
        results.append((labels[idx], share, cumulative))
    return results
