"""
稳定性序列与外生序列之间的统计检验
序列对齐、Pearson 相关、Granger 因果检验
"""

from dataclasses import dataclass
from datetime import datetime
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from dateutil import parser as date_parser
from scipy import linalg, special, stats

from common.logging.logger import get_module_logger
from common.validation.exceptions import (
    AnalysisError,
    DataValidationError,
    InsufficientDataError,
    RankDeficiencyError,
    ZeroVarianceError,
)
from extractor.ingest import ScalarSeries

from .markov import MatrixLike, as_array

logger = get_module_logger("triad_analyzer.stats")

ALIGNMENT_MODES = ("annualize", "interpolate", "exact")
RANK_TOLERANCE = 1e-10
MIN_PAIRS = 3

_DEFAULT_DAY = datetime(1900, 1, 1)


@dataclass(frozen=True, eq=False)
class AlignedPairs:
    """对齐后的配对样本：x 来自第一个序列，y 来自第二个序列"""
    labels: Tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    mode: str

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p_value: float
    n: int

    def to_dict(self) -> Dict:
        return {"r": self.r, "p_value": self.p_value, "n": self.n}


@dataclass(frozen=True)
class GrangerResult:
    """x 是否 Granger 导致 y 的 F 检验与卡方检验"""
    F: float
    p_F: float
    chi2: float
    p_chi2: float
    lags: int
    n_obs: int
    rss_restricted: float
    rss_unrestricted: float
    direction: str = "x->y"

    def to_dict(self) -> Dict:
        return {
            "direction": self.direction,
            "lags": self.lags,
            "n_obs": self.n_obs,
            "F": self.F,
            "p_F": self.p_F,
            "chi2": self.chi2,
            "p_chi2": self.p_chi2,
            "rss_restricted": self.rss_restricted,
            "rss_unrestricted": self.rss_unrestricted,
        }


def label_date(label: str) -> datetime:
    """将标签解析为日期（仅有年份时取该年 1 月 1 日）"""
    try:
        return date_parser.parse(str(label), default=_DEFAULT_DAY)
    except (ValueError, OverflowError) as e:
        raise DataValidationError(f"无法将标签解析为日期: {label!r}") from e


def _annual_means(series: ScalarSeries) -> pd.Series:
    years = [label_date(label).year for label in series.labels]
    frame = pd.DataFrame({"year": years, "value": series.values})
    return frame.dropna().groupby("year")["value"].mean()


def _align_annualize(a: ScalarSeries, b: ScalarSeries) -> Tuple[list, np.ndarray, np.ndarray]:
    joined = pd.concat([_annual_means(a), _annual_means(b)], axis=1, join="inner").sort_index()
    labels = [str(year) for year in joined.index]
    return labels, joined.iloc[:, 0].to_numpy(), joined.iloc[:, 1].to_numpy()


def _align_interpolate(a: ScalarSeries, b: ScalarSeries) -> Tuple[list, np.ndarray, np.ndarray]:
    observed = ~b.missing
    b_days = np.array([label_date(label).toordinal() for label in b.labels], dtype=float)[observed]
    b_values = b.values[observed]
    if b_days.size == 0:
        return [], np.empty(0), np.empty(0)
    order = np.argsort(b_days, kind="stable")
    b_days, b_values = b_days[order], b_values[order]

    a_days = np.array([label_date(label).toordinal() for label in a.labels], dtype=float)
    inside = (a_days >= b_days[0]) & (a_days <= b_days[-1])
    y = np.full(a_days.shape, np.nan)
    y[inside] = np.interp(a_days[inside], b_days, b_values)
    return list(a.labels), a.values.copy(), y


def _align_exact(a: ScalarSeries, b: ScalarSeries) -> Tuple[list, np.ndarray, np.ndarray]:
    b_lookup = dict(zip(b.labels, b.values))
    labels = [label for label in a.labels if label in b_lookup]
    a_lookup = dict(zip(a.labels, a.values))
    return (
        labels,
        np.array([a_lookup[label] for label in labels], dtype=float),
        np.array([b_lookup[label] for label in labels], dtype=float),
    )


def align_series(
    a: ScalarSeries, b: ScalarSeries, mode: str = "annualize", invert: Optional[str] = None
) -> AlignedPairs:
    """
    对齐两个序列

    Args:
        a: 第一个序列（通常为稳定性序列）
        b: 第二个序列（通常为外生序列）
        mode: "annualize"（按年平均后取共同年份）、
              "interpolate"（将 b 线性插值到 a 的日期，超出范围的丢弃）、
              "exact"（标签完全相同）
        invert: 对齐后取倒数的一侧："a"、"b" 或 None

    Returns:
        AlignedPairs（缺失和非有限值被剔除）

    Raises:
        InsufficientDataError: 对齐后少于 3 对
    """
    if mode == "annualize":
        labels, x, y = _align_annualize(a, b)
    elif mode == "interpolate":
        labels, x, y = _align_interpolate(a, b)
    elif mode == "exact":
        labels, x, y = _align_exact(a, b)
    else:
        raise DataValidationError(f"未知的对齐方式: {mode}")

    if invert not in (None, "a", "b"):
        raise DataValidationError(f"invert 必须是 'a'、'b' 或 None: {invert}")
    with np.errstate(divide="ignore", invalid="ignore"):
        if invert == "a":
            x = 1.0 / x
        elif invert == "b":
            y = 1.0 / y

    keep = np.isfinite(x) & np.isfinite(y)
    labels = tuple(label for label, k in zip(labels, keep) if k)
    if len(labels) < MIN_PAIRS:
        raise InsufficientDataError(f"对齐后仅有 {len(labels)} 对样本，至少需要 {MIN_PAIRS} 对")

    logger.debug(f"序列对齐 ({mode}): {len(labels)} 对")
    return AlignedPairs(labels=labels, x=x[keep], y=y[keep], mode=mode)


def pearson(
    x: Union[AlignedPairs, Sequence[float]], y: Optional[Sequence[float]] = None
) -> PearsonResult:
    """
    Pearson 相关系数及双侧 p 值（n-2 自由度的 t 分布）

    Raises:
        InsufficientDataError: 少于 3 对
        ZeroVarianceError: 任一序列方差为零
    """
    if isinstance(x, AlignedPairs):
        x, y = x.x, x.y
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataValidationError("x 与 y 必须是等长一维序列")
    n = x.shape[0]
    if n < MIN_PAIRS:
        raise InsufficientDataError(f"相关分析至少需要 {MIN_PAIRS} 对，当前 {n} 对")

    xc, yc = x - x.mean(), y - y.mean()
    ss_x, ss_y = float(xc @ xc), float(yc @ yc)
    if ss_x == 0 or ss_y == 0:
        raise ZeroVarianceError("zero variance")

    r = float(np.clip((xc @ yc) / np.sqrt(ss_x * ss_y), -1.0, 1.0))
    df = n - 2
    if abs(r) >= 1.0:
        p_value = 0.0
    else:
        t_squared = r * r * df / (1.0 - r * r)
        p_value = float(special.betainc(df / 2.0, 0.5, df / (df + t_squared)))
    return PearsonResult(r=r, p_value=p_value, n=n)


def _ols_rss(Y: np.ndarray, X: np.ndarray) -> float:
    """列主元 QR 求解最小二乘，返回残差平方和"""
    Q, R, pivots = linalg.qr(X, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(R))
    rank = int((diagonal > RANK_TOLERANCE * diagonal[0]).sum()) if diagonal[0] > 0 else 0
    if rank < X.shape[1]:
        raise RankDeficiencyError(f"设计矩阵秩不足: rank {rank} < {X.shape[1]}")
    beta = linalg.solve_triangular(R, Q.T @ Y)
    residual = Y - X[:, pivots] @ beta
    return float(residual @ residual)


def _lag_matrix(series: np.ndarray, lags: int) -> np.ndarray:
    n = series.shape[0]
    return np.column_stack([series[lags - lag: n - lag] for lag in range(1, lags + 1)])


def granger(
    x: Sequence[float], y: Sequence[float], lags: int = 1, direction: str = "x->y"
) -> GrangerResult:
    """
    检验 x 是否 Granger 导致 y

    受限模型: y_t ~ 1 + y_{t-1..t-lags}
    非受限模型: y_t ~ 1 + y_{t-1..t-lags} + x_{t-1..t-lags}

    Args:
        x: 原因序列
        y: 结果序列
        lags: 滞后阶数
        direction: 结果中记录的方向标签

    Returns:
        GrangerResult

    Raises:
        InsufficientDataError: 序列长度不超过 3·lags + 3
        RankDeficiencyError: 设计矩阵秩不足
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataValidationError("x 与 y 必须是等长一维序列")
    if isinstance(lags, bool) or not isinstance(lags, (int, np.integer)) or lags < 1:
        raise DataValidationError("lags 必须为正整数")
    if x.shape[0] <= 3 * lags + 3:
        raise InsufficientDataError(
            f"Granger 检验需要长度大于 {3 * lags + 3}，当前 {x.shape[0]}"
        )

    target = y[lags:]
    n_obs = target.shape[0]
    intercept = np.ones((n_obs, 1))
    restricted = np.hstack([intercept, _lag_matrix(y, lags)])
    unrestricted = np.hstack([restricted, _lag_matrix(x, lags)])

    rss_r = _ols_rss(target, restricted)
    rss_u = _ols_rss(target, unrestricted)
    if rss_u > rss_r * (1.0 + 1e-9) + 1e-12:
        raise AnalysisError(f"非受限模型残差 {rss_u} 大于受限模型 {rss_r}")

    df_denominator = n_obs - 2 * lags - 1
    if rss_u <= 1e-14 * max(rss_r, 1e-300):
        F = float("inf")
        p_F = p_chi2 = 0.0
        chi2 = float("inf")
    else:
        F = (max(rss_r - rss_u, 0.0) / lags) / (rss_u / df_denominator)
        chi2 = lags * F
        p_F = float(stats.f.sf(F, lags, df_denominator))
        p_chi2 = float(stats.chi2.sf(chi2, lags))

    return GrangerResult(
        F=float(F),
        p_F=p_F,
        chi2=float(chi2),
        p_chi2=p_chi2,
        lags=lags,
        n_obs=n_obs,
        rss_restricted=rss_r,
        rss_unrestricted=rss_u,
        direction=direction,
    )


def stability_vs_exogenous(
    stability: ScalarSeries,
    exogenous: ScalarSeries,
    mode: str = "annualize",
    invert: Optional[str] = "exogenous",
    lags: int = 1,
) -> Dict:
    """
    稳定性序列与外生序列的相关与双向 Granger 检验

    Args:
        stability: 稳定性序列（如 Frobenius 差异）
        exogenous: 外生序列
        mode: 对齐方式
        invert: 取倒数的一侧："exogenous"、"stability" 或 None
        lags: Granger 滞后阶数

    Returns:
        报告字典
    """
    side = {"exogenous": "b", "stability": "a", None: None}
    if invert not in side:
        raise DataValidationError(f"invert 必须是 exogenous、stability 或 None: {invert}")

    pairs = align_series(stability, exogenous, mode=mode, invert=side[invert])
    correlation = pearson(pairs)
    exo_to_stability = granger(pairs.y, pairs.x, lags, direction="exogenous->stability")
    stability_to_exo = granger(pairs.x, pairs.y, lags, direction="stability->exogenous")

    logger.info(
        f"对齐 {mode}: n={len(pairs)}, r={correlation.r:.4f}, p={correlation.p_value:.4g}"
    )
    return {
        "alignment": mode,
        "inverted": invert,
        "n_pairs": len(pairs),
        "labels": list(pairs.labels),
        "pearson": correlation.to_dict(),
        "granger_xy": exo_to_stability.to_dict(),
        "granger_yx": stability_to_exo.to_dict(),
    }


def matrix_correlation(a: MatrixLike, b: MatrixLike) -> PearsonResult:
    """两个同形状矩阵逐元素展开后的 Pearson 相关"""
    A, B = as_array(a), as_array(b)
    if A.shape != B.shape:
        raise DataValidationError(f"矩阵形状不一致: {A.shape} vs {B.shape}")
    return pearson(A.ravel(), B.ravel())
