"""
表格与 JSON 输出工具
所有产物使用固定的浮点格式和键顺序，保证重复运行逐字节一致
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

# 12 位有效数字，与区域设置无关
FLOAT_FORMAT = "%.12g"

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """按统一格式输出浮点数"""
    return FLOAT_FORMAT % value


def to_jsonable(obj: Any) -> Any:
    """
    递归转换为可 JSON 序列化的对象，浮点数统一截断为 12 位有效数字

    Args:
        obj: 任意嵌套的 dict/list/tuple/numpy 对象

    Returns:
        仅包含 dict/list/str/int/float/bool/None 的对象
    """
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            # JSON 没有 inf/nan，用字符串显式标记
            return str(value)
        return float(format_float(value))
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps_json(obj: Any) -> str:
    """序列化为确定性的 JSON 文本"""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(obj: Any, path: PathLike) -> Path:
    """
    写出 JSON 文件

    Args:
        obj: 待写出的对象
        path: 目标路径

    Returns:
        写出的路径
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(obj), encoding="utf-8")
    return path


def write_csv(
    rows: Union[pd.DataFrame, Iterable[Sequence[Any]]],
    path: PathLike,
    columns: Optional[Sequence[str]] = None,
) -> Path:
    """
    写出 CSV 文件

    Args:
        rows: DataFrame 或行序列
        path: 目标路径
        columns: 列名（rows 不是 DataFrame 时必需）

    Returns:
        写出的路径
    """
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=columns)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path
