"""
可复现的合成数据生成器
随机带符号网络、嵌入式转移矩阵以及按真实链抽样的三元组计数
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from common.validation.exceptions import DataValidationError
from extractor.netbuild import SignedNetwork

from .markov import TransitionMatrix, normalize_rows
from .triads import (
    N_TYPES,
    TransitionCounts,
    TriadTypeTable,
    build_type_table,
    census,
    transition_counts,
)


def random_signed_network(
    n: int,
    rng: np.random.Generator,
    p_positive: float = 0.3,
    p_negative: float = 0.2,
    period_index: int = 0,
    node_ids: Optional[Sequence[str]] = None,
) -> SignedNetwork:
    """每个有序对独立地取 +1 / -1 / 0"""
    if p_positive < 0 or p_negative < 0 or p_positive + p_negative > 1:
        raise DataValidationError("边概率无效")
    draws = rng.random((n, n))
    adjacency = np.where(draws < p_positive, 1, np.where(draws < p_positive + p_negative, -1, 0))
    np.fill_diagonal(adjacency, 0)
    names = tuple(node_ids) if node_ids is not None else tuple(f"n{i}" for i in range(n))
    return SignedNetwork(period_index=period_index, adjacency=adjacency, node_ids=names)


def perturb_network(
    net: SignedNetwork, rng: np.random.Generator, flip_share: float = 0.1
) -> SignedNetwork:
    """随机重抽部分有序对的符号，得到下一期网络"""
    adjacency = net.adjacency.astype(np.int64)
    mask = rng.random(adjacency.shape) < flip_share
    adjacency[mask] = rng.integers(-1, 2, size=int(mask.sum()))
    np.fill_diagonal(adjacency, 0)
    return SignedNetwork(
        period_index=net.period_index + 1, adjacency=adjacency, node_ids=net.node_ids
    )


def random_stochastic_matrix(
    k: int, rng: np.random.Generator, concentration: float = 1.0, self_weight: float = 0.0
) -> np.ndarray:
    """Dirichlet 行构成的 k×k 行随机矩阵；self_weight 将对角线质量加大"""
    rows = rng.dirichlet(np.full(k, concentration), size=k)
    mixed = (1.0 - self_weight) * rows + self_weight * np.eye(k)
    return mixed / mixed.sum(axis=1, keepdims=True)


def embed_block(
    block: np.ndarray, states: Optional[Sequence[int]] = None, n_states: int = N_TYPES
) -> np.ndarray:
    """将小矩阵嵌入 n_states 阶单位阵的指定状态上"""
    block = np.asarray(block, dtype=float)
    states = np.arange(block.shape[0]) if states is None else np.asarray(states)
    full = np.eye(n_states)
    full[np.ix_(states, states)] = block
    return full


def piecewise_constant_truth(
    regimes: Sequence[np.ndarray], steps_per_regime: int
) -> List[np.ndarray]:
    """每个体制重复 steps_per_regime 步"""
    return [np.asarray(P, dtype=float) for P in regimes for _ in range(steps_per_regime)]


def drifting_truth(start: np.ndarray, end: np.ndarray, steps: int) -> List[np.ndarray]:
    """从 start 线性漂移到 end 的转移矩阵序列"""
    if steps < 2:
        raise DataValidationError("漂移序列至少需要 2 步")
    weights = np.linspace(0.0, 1.0, steps)
    return [(1.0 - w) * np.asarray(start) + w * np.asarray(end) for w in weights]


@dataclass(frozen=True)
class SyntheticChain:
    """按真实转移矩阵抽样得到的比例序列与经验矩阵"""
    proportions: np.ndarray
    counts: Tuple[np.ndarray, ...]
    empirical: Tuple[TransitionMatrix, ...]
    truth: Tuple[np.ndarray, ...]


def sample_transition_counts(
    from_counts: np.ndarray, P: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """每个起始类型的计数按对应行多项抽样"""
    n = P.shape[0]
    counts = np.zeros((n, n), dtype=np.int64)
    for i in np.flatnonzero(from_counts):
        row = P[i] / P[i].sum()
        counts[i] = rng.multinomial(int(from_counts[i]), row)
    return counts


def simulate_chain(
    truth: Sequence[np.ndarray],
    initial: np.ndarray,
    n_triads: int,
    rng: np.random.Generator,
    zero_row_policy: str = "identity",
) -> SyntheticChain:
    """
    模拟三元组类型的马尔可夫演化

    Args:
        truth: 真实转移矩阵序列（长度 T）
        initial: 初始类型分布
        n_triads: 三元组总数
        rng: 随机数生成器
        zero_row_policy: 经验矩阵的零行策略

    Returns:
        SyntheticChain：T+1 个比例向量与 T 个经验矩阵
    """
    initial = np.asarray(initial, dtype=float)
    counts = rng.multinomial(n_triads, initial / initial.sum())
    proportions = [counts / n_triads]
    transitions, empirical = [], []
    for t, P in enumerate(truth):
        C = sample_transition_counts(counts, np.asarray(P, dtype=float), rng)
        transitions.append(C)
        counted = TransitionCounts(counts=C, from_period=t, to_period=t + 1)
        empirical.append(normalize_rows(counted, zero_row_policy))
        counts = C.sum(axis=0)
        proportions.append(counts / n_triads)
    return SyntheticChain(
        proportions=np.array(proportions),
        counts=tuple(transitions),
        empirical=tuple(empirical),
        truth=tuple(np.asarray(P, dtype=float) for P in truth),
    )


def census_consistency_failures(
    rng: np.random.Generator, table: Optional[TriadTypeTable] = None, n_nodes: int = 12
) -> List[str]:
    """
    在随机网络上核对普查与转移计数

    向量化普查与逐个三元组分类的结果比较；转移计数的行和、列和与两期普查比较。

    Returns:
        失败描述列表；为空表示全部一致
    """
    table = table or build_type_table()
    first = random_signed_network(n_nodes, rng)
    second = perturb_network(first, rng)

    failures = []
    expected = np.zeros(table.n_types, dtype=np.int64)
    a = first.adjacency
    for i, j, k in itertools.combinations(range(n_nodes), 3):
        signs = (a[i, j], a[j, i], a[i, k], a[k, i], a[j, k], a[k, j])
        expected[table.type_of_signs(signs)] += 1
    before = census(first, table=table).counts
    if not np.array_equal(before, expected):
        mismatched = int(np.count_nonzero(before != expected))
        failures.append(f"普查与逐个分类不一致: {mismatched} 个类型计数不同")

    moved = transition_counts(first, second, table=table).counts
    if not np.array_equal(moved.sum(axis=1), before):
        failures.append("转移计数行和与起始期普查不一致")
    if not np.array_equal(moved.sum(axis=0), census(second, table=table).counts):
        failures.append("转移计数列和与目标期普查不一致")
    return failures
