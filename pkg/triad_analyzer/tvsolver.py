"""
时变马尔可夫链估计器

对经验转移矩阵序列 P̂_1..P̂_T 求解

    min  (1/2T) Σ_t ‖P̂_t − P_t‖_F²
         + λ1 Σ_t ‖P_{t+1} − P_t‖_1 + λ2 Σ_t ‖P_{t+1} − P_t‖_F
    s.t. 每个 P_t 行随机且元素 ≥ ε

使用 ADMM：X 为自由变量，Z = DX 承载相邻差分的惩罚，W = X 承载约束集投影。
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from common.logging.logger import get_module_logger
from common.validation.exceptions import DataValidationError, InsufficientDataError
from common.validation.validators import validate_penalty_mode, validate_row_stochastic
from config.settings import SolverConfig

from .markov import MatrixLike, TransitionMatrix, as_array

logger = get_module_logger("triad_analyzer.tvsolver")

INPUT_ROW_ATOL = 1e-6


@dataclass(frozen=True, eq=False)
class SolveResult:
    """估计结果与诊断信息"""
    matrices: Tuple[TransitionMatrix, ...]
    objective_trace: np.ndarray
    final_objective: float
    converged: bool
    iterations: int
    primal_residual: float

    def stacked(self) -> np.ndarray:
        return np.stack([m.P for m in self.matrices])

    def diagnostics(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_objective": self.final_objective,
            "primal_residual": self.primal_residual,
        }


def _stack(seq: Sequence[MatrixLike]) -> np.ndarray:
    if isinstance(seq, np.ndarray):
        arr = np.asarray(seq, dtype=float)
    else:
        if len(seq) == 0:
            raise DataValidationError("转移矩阵序列为空")
        arr = np.stack([as_array(m) for m in seq]).astype(float)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DataValidationError(f"转移矩阵序列形状无效: {arr.shape}")
    return arr


def _group_norms(diffs: np.ndarray, penalty_mode: str) -> np.ndarray:
    if penalty_mode == "row-groups":
        return np.sqrt((diffs**2).sum(axis=2))
    return np.sqrt((diffs**2).sum(axis=(1, 2)))


def _objective(
    P: np.ndarray, Phat: np.ndarray, lambda1: float, lambda2: float, penalty_mode: str
) -> float:
    T = P.shape[0]
    fidelity = ((Phat - P) ** 2).sum() / (2.0 * T)
    diffs = np.diff(P, axis=0)
    penalty = lambda1 * np.abs(diffs).sum() + lambda2 * _group_norms(diffs, penalty_mode).sum()
    return float(fidelity + penalty)


def objective(
    P_seq: Sequence[MatrixLike],
    Phat_seq: Sequence[MatrixLike],
    lambda1: float,
    lambda2: float,
    penalty_mode: str = "matrix",
) -> float:
    """
    估计目标函数值

    Args:
        P_seq: 候选矩阵序列
        Phat_seq: 经验矩阵序列
        lambda1: 逐元素 L1 差分权重
        lambda2: 分组 L2 差分权重
        penalty_mode: "matrix"（整矩阵一组）或 "row-groups"（每行一组）

    Returns:
        目标函数值
    """
    P = _stack(P_seq)
    Phat = _stack(Phat_seq)
    if P.shape != Phat.shape:
        raise DataValidationError(f"序列形状不一致: {P.shape} vs {Phat.shape}")
    valid, error = validate_penalty_mode(penalty_mode)
    if not valid:
        raise DataValidationError(error)
    return _objective(P, Phat, lambda1, lambda2, penalty_mode)


def project_row_simplex(v: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """
    将最后一维的每个向量投影到 {x : Σx = 1, x ≥ floor}

    先平移 floor，再用排序法投影到半径 1 - n·floor 的单纯形上。

    Args:
        v: 任意形状的数组
        floor: 元素下界，需满足 n·floor < 1

    Returns:
        与 v 同形状的投影结果
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[-1]
    if floor < 0 or n * floor >= 1:
        raise DataValidationError(f"下界 {floor} 无效（需 0 ≤ floor < 1/{n}）")

    radius = 1.0 - n * floor
    shifted = v - floor
    ordered = -np.sort(-shifted, axis=-1)
    excess = np.cumsum(ordered, axis=-1) - radius
    ranks = np.arange(1, n + 1)
    support = (ordered - excess / ranks > 0).sum(axis=-1, keepdims=True)
    theta = np.take_along_axis(excess, support - 1, axis=-1) / support
    return np.maximum(shifted - theta, 0.0) + floor


def _prox_penalty(
    Y: np.ndarray, threshold1: float, threshold2: float, penalty_mode: str
) -> np.ndarray:
    """λ1‖·‖_1 + λ2 Σ‖·‖_F 的近端算子：先软阈值再分组收缩"""
    S = np.sign(Y) * np.maximum(np.abs(Y) - threshold1, 0.0)
    if threshold2 > 0:
        if penalty_mode == "row-groups":
            norms = np.sqrt((S**2).sum(axis=2, keepdims=True))
        else:
            norms = np.sqrt((S**2).sum(axis=(1, 2), keepdims=True))
        scale = np.maximum(1.0 - threshold2 / np.maximum(norms, np.finfo(float).tiny), 0.0)
        S = S * scale
    return S


def _difference_adjoint(Y: np.ndarray) -> np.ndarray:
    """Dᵀ：差分算子的伴随"""
    out = np.zeros((Y.shape[0] + 1,) + Y.shape[1:])
    out[:-1] -= Y
    out[1:] += Y
    return out


def _to_result(
    W: np.ndarray,
    trace: Sequence[float],
    converged: bool,
    iterations: int,
    primal_residual: float,
) -> SolveResult:
    trace = np.asarray(trace, dtype=float)
    return SolveResult(
        matrices=tuple(TransitionMatrix(P=W[t], from_period=t) for t in range(W.shape[0])),
        objective_trace=trace,
        final_objective=float(trace[-1]),
        converged=converged,
        iterations=iterations,
        primal_residual=float(primal_residual),
    )


def estimate(
    Phat_seq: Sequence[MatrixLike], config: Optional[SolverConfig] = None
) -> SolveResult:
    """
    估计平滑的时变转移矩阵序列

    Args:
        Phat_seq: 经验转移矩阵序列（T ≥ 1，行随机）
        config: 求解器配置

    Returns:
        SolveResult；objective_trace 为迄今最优可行点的目标值（单调不增），
        返回的矩阵即该最优可行点。未收敛时 converged=False。

    Raises:
        DataValidationError: 输入形状、行和或配置无效
    """
    config = config or SolverConfig()
    Phat = _stack(Phat_seq)
    T, n, _ = Phat.shape

    errors = config.validate(n_states=n)
    if errors:
        raise DataValidationError("求解器配置无效: " + "; ".join(errors))
    for t in range(T):
        valid, error = validate_row_stochastic(Phat[t], atol=INPUT_ROW_ATOL)
        if not valid:
            raise DataValidationError(f"第 {t} 个经验矩阵无效: {error}")

    lambda1, lambda2 = float(config.lambda1), float(config.lambda2)
    mode = config.penalty_mode
    floor = config.epsilon_floor

    W = project_row_simplex(Phat, floor)
    if T == 1 or (lambda1 == 0 and lambda2 == 0):
        value = _objective(W, Phat, lambda1, lambda2, mode)
        return _to_result(W, [value], converged=True, iterations=0, primal_residual=0.0)

    rho = config.rho if config.rho is not None else 1.0 / T
    second_difference = np.diag(np.r_[1.0, np.full(T - 2, 2.0), 1.0])
    second_difference -= np.eye(T, k=1) + np.eye(T, k=-1)
    system = cho_factor((1.0 / T + rho) * np.eye(T) + rho * second_difference)

    X = W.copy()
    Z = np.diff(X, axis=0)
    U = np.zeros_like(Z)
    V = np.zeros_like(X)

    best_value = _objective(W, Phat, lambda1, lambda2, mode)
    best_W = W
    trace = []
    primal = 0.0
    converged = False
    iteration = 0

    for iteration in range(1, config.max_iters + 1):
        rhs = Phat / T + rho * _difference_adjoint(Z - U) + rho * (W - V)
        X = cho_solve(system, rhs.reshape(T, -1)).reshape(T, n, n)
        DX = np.diff(X, axis=0)
        Z = _prox_penalty(DX + U, lambda1 / rho, lambda2 / rho, mode)
        W = project_row_simplex(X + V, floor)
        U += DX - Z
        V += X - W

        value = _objective(W, Phat, lambda1, lambda2, mode)
        if value < best_value:
            best_value, best_W = value, W
        trace.append(best_value)

        primal = float(np.sqrt(((DX - Z) ** 2).sum() + ((X - W) ** 2).sum()))
        if iteration > config.window and primal <= config.feasibility_tol:
            previous = trace[-1 - config.window]
            if (previous - best_value) / max(abs(best_value), 1e-12) < config.tol:
                converged = True
                break

        if iteration % 1000 == 0:
            logger.debug(f"ADMM 第 {iteration} 次迭代: 目标 {best_value:.9g}, 原始残差 {primal:.3e}")

    if converged:
        logger.info(f"求解器收敛: {iteration} 次迭代, 目标 {best_value:.9g}")
    else:
        logger.warning(
            f"求解器未在 {config.max_iters} 次迭代内收敛: 目标 {best_value:.9g}, 原始残差 {primal:.3e}"
        )
    return _to_result(best_W, trace, converged, iteration, primal)


def total_variation(P_seq: Sequence[MatrixLike]) -> float:
    """估计序列的总变差 Σ‖P_{t+1} − P_t‖_1（逐元素绝对值之和）"""
    P = _stack(P_seq)
    if P.shape[0] < 2:
        raise InsufficientDataError("总变差至少需要 2 个矩阵")
    return float(np.abs(np.diff(P, axis=0)).sum())
