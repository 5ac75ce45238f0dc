"""
带符号网络构建与核心提取的单元测试
"""

from datetime import date

import numpy as np
import pytest

from common.exceptions import DataValidationError, UnknownNodeError
from extractor.ingest import Event, PeriodSpec, bin_periods, events_from_records
from extractor.netbuild import (
    CoreResult,
    SignedNetwork,
    build_network,
    build_networks,
    dyad_fractions,
    positive_scc,
    read_node_list,
    restrict,
    sign_of_sums,
    stable_core,
)

DAY = date(2000, 1, 1)


def _net(adjacency, names=None, period_index=0):
    adjacency = np.asarray(adjacency)
    names = names or tuple(f"N{i}" for i in range(adjacency.shape[0]))
    return SignedNetwork(period_index=period_index, adjacency=adjacency, node_ids=tuple(names))


def _cycle(n, nodes):
    """nodes 上的正向环"""
    adjacency = np.zeros((n, n), dtype=int)
    for a, b in zip(nodes, nodes[1:] + nodes[:1]):
        adjacency[a, b] = 1
    return adjacency


class TestSignOfSums:
    """权重求和取符号测试"""

    def test_signs(self):
        """测试正、负、抵消"""
        src = np.array([0, 0, 1, 1, 2])
        tgt = np.array([1, 1, 0, 0, 0])
        w = np.array([2.0, -1.0, 1.0, -3.0, 0.0])
        signs = sign_of_sums(src, tgt, w, 3)
        assert signs[0, 1] == 1
        assert signs[1, 0] == -1
        assert signs[2, 0] == 0
        assert signs.dtype == np.int8

    def test_exact_cancellation(self):
        """测试浮点误差下的精确抵消"""
        src = np.array([0, 0, 0])
        tgt = np.array([1, 1, 1])
        w = np.array([0.1, 0.2, -0.3])
        assert sign_of_sums(src, tgt, w, 2)[0, 1] == 0

    def test_self_loops_ignored(self):
        """测试对角线恒为 0"""
        signs = sign_of_sums(np.array([0]), np.array([0]), np.array([5.0]), 2)
        assert signs[0, 0] == 0


class TestSignedNetwork:
    """网络数据结构测试"""

    def test_invariants(self):
        """测试结构约束"""
        with pytest.raises(DataValidationError):
            _net([[1, 0], [0, 0]])
        with pytest.raises(DataValidationError):
            _net([[0, 2], [0, 0]])
        with pytest.raises(DataValidationError):
            _net([[0, 1], [0, 0]], names=("A",))

    def test_read_only(self):
        """测试邻接矩阵只读"""
        net = _net([[0, 1], [-1, 0]])
        with pytest.raises(ValueError):
            net.adjacency[0, 1] = 0

    def test_edge_counts(self):
        """测试边计数与二元组比例"""
        net = _net([[0, 1, -1], [1, 0, 0], [0, 0, 0]])
        assert net.edge_counts() == {"positive": 2, "negative": 1}
        positive, negative = dyad_fractions(net)
        assert positive == pytest.approx(2 / 6)
        assert negative == pytest.approx(1 / 6)
        assert dyad_fractions(_net([[0]])) == (0.0, 0.0)


class TestBuildNetwork:
    """网络构建测试"""

    def test_build_from_events(self):
        """测试由事件构建"""
        events = [
            Event(DAY, "A", "B", 2.0),
            Event(DAY, "A", "B", -1.0),
            Event(DAY, "B", "C", -4.0),
            Event(DAY, "C", "A", 3.0),
            Event(DAY, "C", "A", -3.0),
        ]
        net = build_network(events, ("A", "B", "C", "D"), period_index=5)
        assert net.period_index == 5
        assert net.n == 4
        assert net.adjacency[0, 1] == 1
        assert net.adjacency[1, 2] == -1
        assert net.adjacency[2, 0] == 0
        assert not net.adjacency[3].any()

    def test_unknown_node(self):
        """测试未知节点"""
        with pytest.raises(UnknownNodeError) as excinfo:
            build_network([Event(DAY, "A", "Z", 1.0)], ("A", "B"))
        assert excinfo.value.nodes == ["Z"]

    def test_build_networks_share_registry(self):
        """测试各期网络共享注册表"""
        log = events_from_records(
            [
                Event(date(2000, 1, 1), "A", "B", 1.0),
                Event(date(2000, 1, 12), "B", "C", -1.0),
            ]
        )
        binned = bin_periods(log, PeriodSpec(period_length_days=10, keep_tail=True))
        nets = build_networks(log, binned)
        assert len(nets) == 2
        assert nets[0].node_ids == nets[1].node_ids == ("A", "B", "C")
        assert nets[0].adjacency[0, 1] == 1
        assert nets[1].adjacency[1, 2] == -1
        assert nets[1].period_index == 1


class TestPositiveScc:
    """正边强连通核心测试"""

    def test_largest_component(self):
        """测试取最大分量，负边不计入"""
        adjacency = _cycle(6, [0, 1, 2]) + _cycle(6, [3, 4])
        adjacency[2, 3] = -1
        result = positive_scc(_net(adjacency))
        assert result.core == frozenset({0, 1, 2})

    def test_tie_break(self):
        """测试规模并列时取最小下标更小的分量"""
        adjacency = _cycle(5, [3, 4]) + _cycle(5, [1, 2])
        assert positive_scc(_net(adjacency)).core == frozenset({1, 2})

    def test_periphery(self):
        """测试外围：有正边指向核心的非核心节点"""
        adjacency = _cycle(5, [0, 1, 2])
        adjacency[3, 0] = 1
        adjacency[4, 1] = -1
        result = positive_scc(_net(adjacency))
        assert result.periphery == frozenset({3})

    def test_no_edges(self):
        """测试无正边时核心为单个节点"""
        result = positive_scc(_net(np.zeros((3, 3), dtype=int)))
        assert result.core == frozenset({0})

    def test_core_result_disjoint(self):
        """测试核心与外围不相交"""
        with pytest.raises(DataValidationError):
            CoreResult(core=frozenset({1}), periphery=frozenset({1}))


class TestStableCore:
    """稳定核心测试"""

    def test_union_of_cores(self):
        """测试各期核心的并集"""
        names = ("A", "B", "C", "D", "E")
        nets = [
            _net(_cycle(5, [0, 1, 2]), names, 0),
            _net(_cycle(5, [2, 3, 4]), names, 1),
        ]
        assert stable_core(nets) == (0, 1, 2, 3, 4)

    def test_fixed_list(self):
        """测试固定节点列表"""
        nets = [_net(np.zeros((4, 4), dtype=int), ("A", "B", "C", "D"))]
        assert stable_core(nets, mode="fixed-list", fixed_nodes=["D", "A", "B"]) == (0, 1, 3)

    def test_fixed_list_unknown(self):
        """测试固定列表中的未知节点"""
        nets = [_net(np.zeros((2, 2), dtype=int), ("A", "B"))]
        with pytest.raises(UnknownNodeError):
            stable_core(nets, mode="fixed-list", fixed_nodes=["A", "X"])

    def test_invalid_arguments(self):
        """测试无效参数"""
        nets = [_net(np.zeros((2, 2), dtype=int))]
        with pytest.raises(DataValidationError):
            stable_core([])
        with pytest.raises(DataValidationError):
            stable_core(nets, mode="intersection")
        with pytest.raises(DataValidationError):
            stable_core(nets, mode="fixed-list")


class TestRestrict:
    """节点子集测试"""

    def test_restrict(self):
        """测试限定到子集"""
        net = _net(_cycle(4, [0, 1, 2, 3]), ("A", "B", "C", "D"))
        sub = restrict(net, [2, 1])
        assert sub.node_ids == ("B", "C")
        assert sub.adjacency.tolist() == [[0, 1], [0, 0]]

    def test_restrict_invalid(self):
        """测试无效子集"""
        net = _net(np.zeros((2, 2), dtype=int))
        with pytest.raises(DataValidationError):
            restrict(net, [])
        with pytest.raises(DataValidationError):
            restrict(net, [0, 5])


class TestReadNodeList:
    """节点列表文件测试"""

    def test_read(self, tmp_path):
        """测试读取，忽略注释与空行"""
        path = tmp_path / "core.txt"
        path.write_text("# core\nUSA\n\n CAN \n", encoding="utf-8")
        assert read_node_list(path) == ["USA", "CAN"]
