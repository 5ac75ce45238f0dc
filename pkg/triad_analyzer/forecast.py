"""
一步预测评估与超参数调优

每个留出期 s 只使用 s 之前的数据进行预测：
  - time-varying: 用 P̂_0..P̂_{s-2} 估计时变链，取最后一个估计矩阵推进 prop[s-1]
  - individual-markov: 用 P̂_{s-2} 推进 prop[s-1]
  - last-proportion: prop[s-1]
  - average-proportion: prop[0..s-1] 的平均
"""

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.logging.logger import get_module_logger
from common.validation.exceptions import DataValidationError, InsufficientDataError
from config.settings import SolverConfig

from .markov import MatrixLike, as_array
from .tvsolver import estimate

logger = get_module_logger("triad_analyzer.forecast")

METHODS = ("time-varying", "individual-markov", "last-proportion", "average-proportion")


def forecast_one_step(prop_prev: np.ndarray, P: MatrixLike) -> np.ndarray:
    """用转移矩阵将比例向量推进一步（行向量左乘）"""
    prop_prev = np.asarray(prop_prev, dtype=float)
    M = as_array(P)
    if prop_prev.shape != (M.shape[0],):
        raise DataValidationError(f"比例向量维度 {prop_prev.shape} 与矩阵 {M.shape} 不符")
    return prop_prev @ M


def rmse(pred: np.ndarray, truth: np.ndarray) -> float:
    """均方根误差"""
    pred, truth = np.asarray(pred, dtype=float), np.asarray(truth, dtype=float)
    if pred.shape != truth.shape:
        raise DataValidationError(f"形状不一致: {pred.shape} vs {truth.shape}")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


@dataclass(frozen=True)
class ForecastReport:
    """各方法在每个留出期上的 RMSE"""
    steps: Tuple[int, ...]
    rmse: Dict[str, np.ndarray]
    unconverged: int = 0

    def mean(self, method: str) -> float:
        return float(np.mean(self.rmse[method]))

    def summary(self) -> Dict[str, Dict[str, float]]:
        return {
            method: {
                "mean": float(np.mean(values)),
                "median": float(np.median(values)),
            }
            for method, values in self.rmse.items()
        }

    def to_rows(self) -> List[Tuple[int, str, float]]:
        return [
            (step, method, float(values[i]))
            for i, step in enumerate(self.steps)
            for method, values in self.rmse.items()
        ]


def _check_sequences(props: np.ndarray, phats: np.ndarray) -> None:
    if props.ndim != 2:
        raise DataValidationError("比例序列必须是二维数组")
    if props.shape[0] < 3:
        raise InsufficientDataError(f"预测评估至少需要 3 期，当前 {props.shape[0]} 期")
    if phats.shape[0] != props.shape[0] - 1:
        raise DataValidationError(
            f"转移矩阵数 {phats.shape[0]} 应为比例向量数减一（{props.shape[0] - 1}）"
        )
    if phats.shape[1:] != (props.shape[1], props.shape[1]):
        raise DataValidationError("转移矩阵维度与比例向量不符")


def _stack_phats(Phat_seq: Sequence[MatrixLike]) -> np.ndarray:
    if len(Phat_seq) == 0:
        return np.empty((0, 0, 0))
    return np.stack([as_array(m) for m in Phat_seq])


def _predict(
    method: str, props: np.ndarray, phats: np.ndarray, step: int, config: SolverConfig
) -> Tuple[np.ndarray, bool]:
    """返回 (预测, 求解是否收敛)"""
    if method == "last-proportion":
        return props[step - 1], True
    if method == "average-proportion":
        return props[:step].mean(axis=0), True
    if method == "individual-markov":
        return forecast_one_step(props[step - 1], phats[step - 2]), True
    if method == "time-varying":
        result = estimate(phats[: step - 1], config)
        return forecast_one_step(props[step - 1], result.matrices[-1]), result.converged
    raise DataValidationError(f"未知的预测方法: {method}")


def _score_steps(
    props: np.ndarray,
    phats: np.ndarray,
    steps: Sequence[int],
    config: SolverConfig,
    types: Optional[Sequence[int]],
    methods: Sequence[str],
) -> Tuple[Dict[str, np.ndarray], int]:
    columns = slice(None) if types is None else np.asarray(sorted(types), dtype=np.int64)
    scores = {method: np.empty(len(steps)) for method in methods}
    unconverged = 0
    for i, step in enumerate(steps):
        for method in methods:
            pred, converged = _predict(method, props, phats, step, config)
            unconverged += int(not converged)
            scores[method][i] = rmse(pred[columns], props[step][columns])
    return scores, unconverged


def evaluate_methods(
    prop_seq: Sequence[np.ndarray],
    Phat_seq: Sequence[MatrixLike],
    config: Optional[SolverConfig] = None,
    holdout_steps: int = 5,
    types: Optional[Sequence[int]] = None,
    methods: Sequence[str] = METHODS,
) -> ForecastReport:
    """
    在最后 holdout_steps 期上比较各预测方法

    Args:
        prop_seq: 比例向量序列（N 期）
        Phat_seq: 经验转移矩阵序列（N-1 个，第 k 个对应 k→k+1）
        config: 时变估计器配置
        holdout_steps: 留出期数，需满足 1 ≤ h ≤ N-2
        types: 计算 RMSE 时限定的类型编号（默认全部类型）
        methods: 参与比较的方法

    Returns:
        ForecastReport
    """
    props = np.asarray(prop_seq, dtype=float)
    phats = _stack_phats(Phat_seq)
    _check_sequences(props, phats)

    N = props.shape[0]
    if holdout_steps < 1 or holdout_steps > N - 2:
        raise DataValidationError(
            f"holdout exceeding available periods: holdout_steps={holdout_steps}, 共 {N} 期"
        )

    config = config or SolverConfig()
    steps = tuple(range(N - holdout_steps, N))
    scores, unconverged = _score_steps(props, phats, steps, config, types, methods)
    if unconverged:
        logger.warning(f"留出评估中有 {unconverged} 次时变估计未收敛")

    report = ForecastReport(steps=steps, rmse=scores, unconverged=unconverged)
    for method, stats in report.summary().items():
        logger.info(f"{method}: 平均 RMSE {stats['mean']:.6g}, 中位数 {stats['median']:.6g}")
    return report


def score_grid(
    prop_seq: Sequence[np.ndarray],
    Phat_seq: Sequence[MatrixLike],
    grid: Sequence[Tuple[float, float]],
    validation_steps: int = 5,
    base_config: Optional[SolverConfig] = None,
    n_folds: int = 5,
    types: Optional[Sequence[int]] = None,
) -> List[Tuple[Tuple[float, float], float]]:
    """
    对网格上每个 (λ1, λ2) 计算前向验证得分

    验证期被划分为至多 n_folds 个连续折；得分为各折平均 RMSE 的平均值。

    Returns:
        [((λ1, λ2), 得分)] 列表，顺序同 grid
    """
    if not grid:
        raise DataValidationError("超参数网格为空")

    props = np.asarray(prop_seq, dtype=float)
    phats = _stack_phats(Phat_seq)
    _check_sequences(props, phats)
    N = props.shape[0]
    if validation_steps < 1 or validation_steps > N - 2:
        raise DataValidationError(
            f"validation_steps={validation_steps} 超出可用期数（共 {N} 期）"
        )

    base_config = base_config or SolverConfig()
    steps = np.arange(N - validation_steps, N)
    folds = np.array_split(steps, min(n_folds, len(steps)))

    results = []
    for lambda1, lambda2 in grid:
        config = replace(base_config, lambda1=float(lambda1), lambda2=float(lambda2))
        fold_means = []
        for fold in folds:
            scores, _ = _score_steps(
                props, phats, fold.tolist(), config, types, ("time-varying",)
            )
            fold_means.append(float(np.mean(scores["time-varying"])))
        score = float(np.mean(fold_means))
        logger.debug(f"网格点 ({lambda1}, {lambda2}): 得分 {score:.9g}")
        results.append(((float(lambda1), float(lambda2)), score))
    return results


def select_best(scored: Sequence[Tuple[Tuple[float, float], float]]) -> Tuple[float, float]:
    """得分最低者胜出；并列（12 位有效数字）时取较大的 λ1，再取较大的 λ2"""
    if not scored:
        raise DataValidationError("没有可选的网格点")
    best = min(scored, key=lambda item: (float(f"{item[1]:.12g}"), -item[0][0], -item[0][1]))
    return best[0]


def tune_hyperparams(
    prop_seq: Sequence[np.ndarray],
    Phat_seq: Sequence[MatrixLike],
    grid: Sequence[Tuple[float, float]],
    validation_steps: int = 5,
    base_config: Optional[SolverConfig] = None,
    n_folds: int = 5,
    types: Optional[Sequence[int]] = None,
) -> Tuple[float, float]:
    """
    前向交叉验证选择 (λ1, λ2)

    Returns:
        最优 (λ1, λ2)
    """
    scored = score_grid(prop_seq, Phat_seq, grid, validation_steps, base_config, n_folds, types)
    best = select_best(scored)
    logger.info(f"调参结果: lambda1={best[0]}, lambda2={best[1]}")
    return best
