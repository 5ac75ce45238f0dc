"""
三元组类型的马尔可夫链分析
转移计数归一化、平稳分布、相邻转移矩阵差异以及平衡/不平衡象限汇总
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from common.logging.logger import get_module_logger
from common.utils.calculations import five_number_summary
from common.validation.exceptions import (
    ConvergenceError,
    DataValidationError,
    InsufficientDataError,
)
from common.validation.validators import (
    ZERO_ROW_POLICIES,
    validate_probability_vector,
    validate_row_stochastic,
)
from extractor.ingest import ScalarSeries

from .triads import TransitionCounts, TriadTypeTable, build_type_table

logger = get_module_logger("triad_analyzer.markov")

ROW_SUM_ATOL = 1e-9
QUADRANTS = ("B->B", "B->U", "U->B", "U->U")

MatrixLike = Union["TransitionMatrix", np.ndarray]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """行随机矩阵；from_period 为转移起始期"""
    P: np.ndarray
    from_period: int = 0

    def __post_init__(self):
        P = np.array(self.P, dtype=float)
        valid, error = validate_row_stochastic(P, atol=ROW_SUM_ATOL)
        if not valid:
            raise DataValidationError(f"非行随机矩阵: {error}")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @property
    def n_states(self) -> int:
        return int(self.P.shape[0])


def as_array(matrix: MatrixLike) -> np.ndarray:
    return matrix.P if isinstance(matrix, TransitionMatrix) else np.asarray(matrix, dtype=float)


def normalize_rows(
    counts: Union[TransitionCounts, np.ndarray], zero_row_policy: str = "identity"
) -> TransitionMatrix:
    """
    将转移计数按行归一化

    Args:
        counts: 转移计数
        zero_row_policy: 全零行的处理方式，"identity"（自转移概率 1）或 "uniform"

    Returns:
        TransitionMatrix
    """
    if zero_row_policy not in ZERO_ROW_POLICIES:
        raise DataValidationError(f"未知的零行策略: {zero_row_policy}")

    from_period = counts.from_period if isinstance(counts, TransitionCounts) else 0
    C = np.asarray(counts.counts if isinstance(counts, TransitionCounts) else counts, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DataValidationError(f"转移计数必须是方阵，实际形状 {C.shape}")
    if np.any(C < 0):
        raise DataValidationError("转移计数不能为负")

    n = C.shape[0]
    row_sums = C.sum(axis=1)
    nonzero = row_sums > 0
    P = np.zeros_like(C)
    P[nonzero] = C[nonzero] / row_sums[nonzero, None]
    empty = np.flatnonzero(~nonzero)
    if zero_row_policy == "identity":
        P[empty, empty] = 1.0
    else:
        P[empty] = 1.0 / n
    return TransitionMatrix(P=P, from_period=from_period)


def average_transition(mats: Sequence[MatrixLike]) -> TransitionMatrix:
    """逐元素平均若干转移矩阵"""
    if not mats:
        raise DataValidationError("转移矩阵序列为空")
    arrays = [as_array(m) for m in mats]
    if len({a.shape for a in arrays}) != 1:
        raise DataValidationError("转移矩阵形状不一致")
    first = mats[0]
    return TransitionMatrix(
        P=np.mean(arrays, axis=0),
        from_period=first.from_period if isinstance(first, TransitionMatrix) else 0,
    )


def stationary(
    matrix: MatrixLike,
    tol: float = 1e-12,
    smoothing_epsilon: float = 1e-8,
    max_iters: int = 100_000,
    start: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    平滑链 P' = (1-ε)P + ε/n 的平稳分布（幂迭代）

    迭代过程中定期对推进矩阵平方，以加快慢混合链的收敛；
    收敛判据始终是 ‖πP' - π‖₁ < tol。

    Args:
        matrix: 行随机矩阵
        tol: L1 收敛阈值
        smoothing_epsilon: 平滑系数 ε
        max_iters: 最大迭代次数
        start: 初始分布（默认均匀分布）

    Returns:
        平稳分布向量

    Raises:
        ConvergenceError: 达到最大迭代次数仍未收敛
    """
    P = as_array(matrix)
    n = P.shape[0]
    smoothed = (1.0 - smoothing_epsilon) * P + smoothing_epsilon / n

    if start is None:
        pi = np.full(n, 1.0 / n)
    else:
        pi = np.asarray(start, dtype=float)
        valid, error = validate_probability_vector(pi, atol=1e-9)
        if not valid or pi.shape[0] != n:
            raise DataValidationError(f"初始分布无效: {error or '维度不符'}")
        pi = pi / pi.sum()

    advance = smoothed
    residual = float("inf")
    for iteration in range(1, max_iters + 1):
        residual = float(np.abs(pi @ smoothed - pi).sum())
        if residual < tol:
            logger.debug(f"平稳分布收敛: {iteration} 次迭代, 残差 {residual:.3e}")
            return pi
        pi = pi @ advance
        pi = pi / pi.sum()
        if iteration % 25 == 0:
            advance = advance @ advance
            advance = advance / advance.sum(axis=1, keepdims=True)

    raise ConvergenceError(
        f"stationary distribution did not converge in {max_iters} iterations",
        residual=residual,
        iterations=max_iters,
    )


def frobenius_diff_series(
    mats: Sequence[MatrixLike], labels: Optional[Sequence[str]] = None
) -> ScalarSeries:
    """
    相邻转移矩阵之差的 Frobenius 范数序列

    Args:
        mats: 至少两个转移矩阵
        labels: 各差值的标签（默认取后一矩阵的起始期序号）

    Returns:
        长度为 len(mats) - 1 的 ScalarSeries
    """
    if len(mats) < 2:
        raise InsufficientDataError("Frobenius 差异序列至少需要 2 个转移矩阵")
    arrays = np.stack([as_array(m) for m in mats])
    values = np.sqrt((np.diff(arrays, axis=0) ** 2).sum(axis=(1, 2)))
    if labels is None:
        labels = [
            str(m.from_period if isinstance(m, TransitionMatrix) else k)
            for k, m in enumerate(mats[1:], start=1)
        ]
    if len(labels) != values.shape[0]:
        raise DataValidationError("标签数与差值数不一致")
    return ScalarSeries(labels=tuple(labels), values=values)


@dataclass(frozen=True)
class QuadrantSummary:
    """按 (起始类型, 平衡/不平衡) 汇总的转移概率"""
    model: str
    values: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def summaries(self) -> Dict[str, Dict]:
        return {name: five_number_summary(self.values[name]) for name in QUADRANTS}

    def to_dict(self) -> Dict:
        return {"model": self.model, "quadrants": self.summaries}


def quadrant_summary(
    mats: Sequence[MatrixLike],
    table: Optional[TriadTypeTable] = None,
    model: str = "classical",
) -> QuadrantSummary:
    """
    汇总从平衡（B）/不平衡（U）类型转移到 B/U 类型的概率

    每个 (矩阵, 起始类型) 贡献一个取值：该行落在目标类别上的概率之和。

    Args:
        mats: 转移矩阵序列
        table: 类型表
        model: 平衡模型

    Returns:
        QuadrantSummary
    """
    table = table or build_type_table()
    mask = table.balanced_mask(model)
    pooled: Dict[str, List[np.ndarray]] = {name: [] for name in QUADRANTS}
    for matrix in mats:
        P = as_array(matrix)
        if P.shape != (table.n_types, table.n_types):
            raise DataValidationError(f"转移矩阵必须是 {table.n_types} 阶")
        to_balanced = P[:, mask].sum(axis=1)
        to_unbalanced = P[:, ~mask].sum(axis=1)
        pooled["B->B"].append(to_balanced[mask])
        pooled["B->U"].append(to_unbalanced[mask])
        pooled["U->B"].append(to_balanced[~mask])
        pooled["U->U"].append(to_unbalanced[~mask])

    values = {
        name: np.concatenate(parts) if parts else np.empty(0) for name, parts in pooled.items()
    }
    return QuadrantSummary(model=model, values=values)


def stationary_balanced_mass(
    pi: np.ndarray, table: Optional[TriadTypeTable] = None, model: str = "classical"
) -> float:
    """平稳分布落在平衡类型上的总质量"""
    table = table or build_type_table()
    return float(np.asarray(pi)[table.balanced_mask(model)].sum())
