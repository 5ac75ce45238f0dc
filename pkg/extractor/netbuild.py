"""
带符号有向网络构建
每期的事件聚合为 {-1, 0, +1} 邻接矩阵，并提取正边强连通核心
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from common.logging.logger import get_module_logger
from common.validation.exceptions import DataValidationError, UnknownNodeError

from .ingest import BinnedPeriods, Event, EventLog

logger = get_module_logger("extractor.netbuild")

# 权重和在该小数位数上取整后再取符号，精确抵消的评价得到 0
SUM_DECIMALS = 9

CORE_MODES = ("union-of-cores", "fixed-list")


@dataclass(frozen=True, eq=False)
class SignedNetwork:
    """
    一期的带符号有向网络

    adjacency[i, j] 为 i 对 j 全部评价权重之和的符号；对角线为 0。
    """
    period_index: int
    adjacency: np.ndarray
    node_ids: Tuple[str, ...]

    def __post_init__(self):
        adjacency = np.array(self.adjacency, dtype=np.int8)
        n = len(self.node_ids)
        if adjacency.shape != (n, n):
            raise DataValidationError(
                f"邻接矩阵形状 {adjacency.shape} 与节点数 {n} 不一致"
            )
        if np.any(np.diagonal(adjacency) != 0):
            raise DataValidationError("邻接矩阵对角线必须为 0")
        if np.any(np.abs(adjacency) > 1):
            raise DataValidationError("邻接矩阵元素必须属于 {-1, 0, +1}")
        adjacency.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "node_ids", tuple(self.node_ids))

    @property
    def n(self) -> int:
        return len(self.node_ids)

    def edge_counts(self) -> Dict[str, int]:
        return {
            "positive": int((self.adjacency > 0).sum()),
            "negative": int((self.adjacency < 0).sum()),
        }


@dataclass(frozen=True)
class CoreResult:
    """正边最大强连通分量（核心）及指向核心的外围节点"""
    core: FrozenSet[int]
    periphery: FrozenSet[int]

    def __post_init__(self):
        if self.core & self.periphery:
            raise DataValidationError("核心与外围不能相交")


def sign_of_sums(
    source_idx: np.ndarray, target_idx: np.ndarray, weights: np.ndarray, n: int
) -> np.ndarray:
    """
    计算每个有序对的权重和的符号

    Args:
        source_idx: 来源节点下标
        target_idx: 目标节点下标
        weights: 权重
        n: 节点数

    Returns:
        n×n 的 int8 矩阵
    """
    sums = np.zeros((n, n), dtype=float)
    off_diagonal = source_idx != target_idx
    np.add.at(sums, (source_idx[off_diagonal], target_idx[off_diagonal]), weights[off_diagonal])
    return np.sign(np.round(sums, SUM_DECIMALS)).astype(np.int8)


def build_network(
    bucket: Iterable[Event], registry: Sequence[str], period_index: int = 0
) -> SignedNetwork:
    """
    由一期事件构建网络

    Args:
        bucket: 该期事件
        registry: 全局节点注册表
        period_index: 期序号

    Returns:
        SignedNetwork（节点集为完整注册表）

    Raises:
        UnknownNodeError: 事件中出现注册表外的节点
    """
    index = {name: i for i, name in enumerate(registry)}
    events = list(bucket)
    unknown = sorted({name for e in events for name in (e.source, e.target) if name not in index})
    if unknown:
        raise UnknownNodeError(f"节点不在注册表中: {unknown[:5]}", nodes=unknown)

    src = np.array([index[e.source] for e in events], dtype=np.int64)
    tgt = np.array([index[e.target] for e in events], dtype=np.int64)
    weights = np.array([e.weight for e in events], dtype=float)
    return SignedNetwork(
        period_index=period_index,
        adjacency=sign_of_sums(src, tgt, weights, len(registry)),
        node_ids=tuple(registry),
    )


def build_networks(log: EventLog, binned: BinnedPeriods) -> List[SignedNetwork]:
    """
    按分期结果构建全部网络（所有网络共享同一注册表）

    Args:
        log: 事件日志
        binned: 分期结果

    Returns:
        每期一个 SignedNetwork
    """
    n = len(log.actors)
    networks = []
    for k, bucket in enumerate(binned.buckets):
        adjacency = sign_of_sums(
            log.source_idx[bucket], log.target_idx[bucket], log.weights[bucket], n
        )
        networks.append(SignedNetwork(period_index=k, adjacency=adjacency, node_ids=log.actors))
        logger.debug(f"第 {k} 期: {len(bucket)} 条事件, 边 {networks[-1].edge_counts()}")

    logger.info(f"构建网络 {len(networks)} 期, 节点 {n} 个")
    return networks


def positive_scc(net: SignedNetwork) -> CoreResult:
    """
    计算正边子图的最大强连通分量

    规模并列时取最小节点下标更小的分量；外围为不在核心内、
    且至少有一条正边指向核心的节点。

    Args:
        net: 网络

    Returns:
        CoreResult（核心节点为 net 内部下标）
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(net.n))
    sources, targets = np.nonzero(net.adjacency > 0)
    graph.add_edges_from(zip(sources.tolist(), targets.tolist()))

    components = list(nx.strongly_connected_components(graph))
    if not components:
        return CoreResult(core=frozenset(), periphery=frozenset())

    core = min(components, key=lambda c: (-len(c), min(c)))
    core_mask = np.zeros(net.n, dtype=bool)
    core_mask[list(core)] = True

    points_in = (net.adjacency[:, core_mask] > 0).any(axis=1) & ~core_mask
    periphery = frozenset(np.flatnonzero(points_in).tolist())
    return CoreResult(core=frozenset(core), periphery=periphery)


def stable_core(
    nets: Sequence[SignedNetwork],
    mode: str = "union-of-cores",
    fixed_nodes: Optional[Sequence[str]] = None,
) -> Tuple[int, ...]:
    """
    确定整段时间内分析所用的节点集

    Args:
        nets: 网络序列
        mode: "union-of-cores"（各期核心的并集，限定于所有期共有的节点）
              或 "fixed-list"（使用给定节点名）
        fixed_nodes: fixed-list 模式下的节点名

    Returns:
        升序排列的节点下标

    Raises:
        UnknownNodeError: 固定列表中的节点不在注册表中
    """
    if not nets:
        raise DataValidationError("网络序列为空")
    if mode not in CORE_MODES:
        raise DataValidationError(f"未知的核心模式: {mode}")

    registry = nets[0].node_ids
    if mode == "fixed-list":
        if not fixed_nodes:
            raise DataValidationError("fixed-list 模式需要节点列表")
        index = {name: i for i, name in enumerate(registry)}
        unknown = [name for name in fixed_nodes if name not in index]
        if unknown:
            raise UnknownNodeError(f"unknown nodes in fixed list: {unknown[:5]}", nodes=unknown)
        return tuple(sorted({index[name] for name in fixed_nodes}))

    shared = set(registry)
    for net in nets[1:]:
        shared &= set(net.node_ids)

    union = set()
    for net in nets:
        names = net.node_ids
        union |= {names[i] for i in positive_scc(net).core if names[i] in shared}

    index = {name: i for i, name in enumerate(registry)}
    nodes = tuple(sorted(index[name] for name in union))
    logger.info(f"稳定核心: {len(nodes)} 个节点（共 {len(registry)} 个）")
    return nodes


def restrict(net: SignedNetwork, nodes: Iterable[int]) -> SignedNetwork:
    """
    限定网络到给定节点子集（按下标升序）

    Args:
        net: 网络
        nodes: 节点下标

    Returns:
        子网络
    """
    selected = sorted(set(int(i) for i in nodes))
    if not selected:
        raise DataValidationError("节点子集为空")
    if selected[0] < 0 or selected[-1] >= net.n:
        raise DataValidationError("节点下标越界")

    idx = np.array(selected)
    return SignedNetwork(
        period_index=net.period_index,
        adjacency=net.adjacency[np.ix_(idx, idx)],
        node_ids=tuple(net.node_ids[i] for i in selected),
    )


def dyad_fractions(net: SignedNetwork) -> Tuple[float, float]:
    """
    有序节点对中正边与负边所占比例

    Returns:
        (正边比例, 负边比例)；少于 2 个节点时为 (0, 0)
    """
    pairs = net.n * (net.n - 1)
    if pairs == 0:
        return 0.0, 0.0
    counts = net.edge_counts()
    return counts["positive"] / pairs, counts["negative"] / pairs


def read_node_list(path) -> List[str]:
    """读取固定节点列表文件（每行一个节点名，忽略空行和 # 注释）"""
    with open(path, encoding="utf-8") as f:
        names = [line.strip() for line in f]
    return [name for name in names if name and not name.startswith("#")]
