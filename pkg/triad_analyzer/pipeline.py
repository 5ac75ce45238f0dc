"""
分析流水线
各子命令共享的步骤：读取事件 → 分期 → 建网 → 核心 → 普查 → 转移矩阵
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from common.logging.logger import get_module_logger
from common.utils.calculations import count_triples
from config.settings import Config
from extractor.ingest import (
    BinnedPeriods,
    EventLog,
    PeriodSpec,
    ScalarSeries,
    bin_periods,
    parse_events,
    parse_series,
    parse_start_date,
)
from extractor.netbuild import (
    CoreResult,
    SignedNetwork,
    build_networks,
    positive_scc,
    read_node_list,
    restrict,
    stable_core,
)

from .markov import TransitionMatrix, normalize_rows
from .triads import (
    CensusVector,
    TransitionCounts,
    TriadTypeTable,
    build_type_table,
    census_from_types,
    proportion,
    transitions_from_types,
    triple_types,
)

logger = get_module_logger("triad_analyzer.pipeline")


@dataclass
class NetworkSeries:
    """分期网络及分析节点集"""
    log: EventLog
    binned: BinnedPeriods
    networks: List[SignedNetwork]
    cores: List[CoreResult]
    nodes: Tuple[int, ...]

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.binned.labels

    @property
    def node_names(self) -> Tuple[str, ...]:
        return tuple(self.log.actors[i] for i in self.nodes)

    def analysed(self, k: int) -> SignedNetwork:
        """第 k 期网络限定到分析节点集"""
        return restrict(self.networks[k], self.nodes)


@dataclass
class TriadSeries:
    """各期普查、比例以及相邻期的转移"""
    censuses: List[CensusVector]
    proportions: np.ndarray
    transitions: List[TransitionCounts]
    empirical: List[TransitionMatrix]


def period_spec(config: Config, period_days: Optional[int] = None) -> PeriodSpec:
    return PeriodSpec(
        start_date=parse_start_date(config.period.start_date),
        period_length_days=period_days or config.period.period_days,
        period_count=config.period.period_count,
        keep_tail=config.period.keep_tail,
    )


def load_events(config: Config) -> EventLog:
    """按配置读取事件文件"""
    path = Path(config.inputs.events)
    logger.info(f"读取事件文件: {path}")
    return parse_events(
        path,
        columns=config.inputs.columns,
        delimiter=config.inputs.delimiter,
        date_format=config.inputs.date_format,
    )


def load_series(path: str, config: Config) -> ScalarSeries:
    logger.info(f"读取序列文件: {path}")
    return parse_series(Path(path), delimiter=config.inputs.delimiter)


def build_network_series(
    config: Config, log: Optional[EventLog] = None, period_days: Optional[int] = None
) -> NetworkSeries:
    """
    分期、建网并确定分析节点集

    Args:
        config: 运行配置
        log: 已读取的事件日志（为空时按配置读取）
        period_days: 覆盖配置中的周期长度

    Returns:
        NetworkSeries
    """
    log = log if log is not None else load_events(config)
    binned = bin_periods(log, period_spec(config, period_days))
    networks = build_networks(log, binned)
    cores = [positive_scc(net) for net in networks]

    if config.core.mode == "fixed":
        names = read_node_list(config.core.fixed_list)
        nodes = stable_core(networks, mode="fixed-list", fixed_nodes=names)
    else:
        nodes = stable_core(networks, mode="union-of-cores")

    return NetworkSeries(log=log, binned=binned, networks=networks, cores=cores, nodes=nodes)


def compute_triad_series(
    series: NetworkSeries,
    table: Optional[TriadTypeTable] = None,
    zero_row_policy: str = "identity",
    with_transitions: bool = True,
) -> TriadSeries:
    """
    逐期普查；相邻期复用同一三元组序列的类型数组计算转移

    Args:
        series: 分期网络
        table: 类型表
        zero_row_policy: 转移矩阵零行策略
        with_transitions: 是否计算转移

    Returns:
        TriadSeries
    """
    table = table or build_type_table()
    censuses, transitions, empirical = [], [], []
    previous = None
    n_nodes = len(series.nodes)
    for k, net in enumerate(series.networks):
        types = triple_types(net, series.nodes, table)
        censuses.append(census_from_types(types, net.period_index, n_nodes, table))
        if with_transitions and previous is not None:
            counts = transitions_from_types(previous, types, k - 1, k, table)
            transitions.append(counts)
            empirical.append(normalize_rows(counts, zero_row_policy))
        previous = types

    proportions = np.array([proportion(c) for c in censuses])
    logger.info(f"普查完成: {len(censuses)} 期, 每期 {count_triples(n_nodes)} 个三元组")
    return TriadSeries(
        censuses=censuses,
        proportions=proportions,
        transitions=transitions,
        empirical=empirical,
    )
