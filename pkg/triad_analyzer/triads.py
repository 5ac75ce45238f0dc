"""
带符号有向三元组的类型表、平衡分类与普查

三元组 (i, j, k) 的六条有向边按 (e_ij, e_ji, e_ik, e_ki, e_jk, e_kj) 排列，
符号 -1/0/+1 映射为数字 0/1/2，e_ij 为三进制最高位，得到 0..728 的编码。
编码在节点置换下的轨道代表（最小编码）即同构类；类型编号按代表升序分配。
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from common.logging.logger import get_module_logger
from common.utils.calculations import calculate_distribution, mean_and_std
from common.validation.exceptions import DataValidationError
from common.validation.validators import BALANCE_MODELS, validate_model_arg
from extractor.netbuild import SignedNetwork

logger = get_module_logger("triad_analyzer.triads")

N_CODES = 729
N_TYPES = 138
EDGE_SLOTS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))
SLOT_NAMES = ("e_ij", "e_ji", "e_ik", "e_ki", "e_jk", "e_kj")
PLACE_VALUES = (243, 81, 27, 9, 3, 1)
NODE_PERMUTATIONS: Tuple[Tuple[int, int, int], ...] = tuple(itertools.permutations(range(3)))

ALL_NULL_CODE = 364
ALL_POSITIVE_CODE = 728

# 已知的结构常数，用于自检
EXPECTED_COMPLETE_TYPES = 16
EXPECTED_BALANCED = {"classical": 24, "clustering": 44, "transitivity": 93}


def _check_code(code: int) -> int:
    if isinstance(code, bool) or not isinstance(code, (int, np.integer)):
        raise DataValidationError(f"三元组编码必须是整数: {code!r}")
    if not 0 <= code < N_CODES:
        raise DataValidationError(f"三元组编码越界: {code}")
    return int(code)


def encode(signs: Sequence[int]) -> int:
    """
    将六条边的符号编码为 0..728

    Args:
        signs: (e_ij, e_ji, e_ik, e_ki, e_jk, e_kj)，取值 -1/0/+1

    Returns:
        三进制编码
    """
    signs = tuple(signs)
    if len(signs) != 6 or any(s not in (-1, 0, 1) for s in signs):
        raise DataValidationError(f"需要 6 个取值为 -1/0/+1 的符号: {signs}")
    return sum((int(s) + 1) * place for s, place in zip(signs, PLACE_VALUES))


def decode(code: int) -> Tuple[int, ...]:
    """encode 的逆运算"""
    remainder = _check_code(code)
    signs = []
    for place in PLACE_VALUES:
        digit, remainder = divmod(remainder, place)
        signs.append(digit - 1)
    return tuple(signs)


def permute_signs(signs: Sequence[int], perm: Sequence[int]) -> Tuple[int, ...]:
    """节点按 perm 重标号后的六元组：原边 (a, b) 移到 (perm[a], perm[b])"""
    moved = {(perm[a], perm[b]): s for (a, b), s in zip(EDGE_SLOTS, signs)}
    return tuple(moved[slot] for slot in EDGE_SLOTS)


def canonicalize(code: int) -> int:
    """同构类代表：六种节点置换下的最小编码"""
    signs = decode(code)
    return min(encode(permute_signs(signs, perm)) for perm in NODE_PERMUTATIONS)


@validate_model_arg
def classify_balance(code: int, model: str) -> bool:
    """
    判断三元组在给定平衡模型下是否平衡

    对每个有序节点三元 (i, k, j) 检查路径 i→k→j 与边 i→j：
      - classical: 路径两边均非零时要求 e_ij = e_ik · e_kj
      - clustering: 同上，但两边都为负的路径不约束
      - transitivity: 仅当两边都为正时约束

    Args:
        code: 三元组编码
        model: classical / clustering / transitivity

    Returns:
        是否平衡（对置换不变）
    """
    edges = dict(zip(EDGE_SLOTS, decode(code)))
    for i, k, j in NODE_PERMUTATIONS:
        ik, kj, ij = edges[(i, k)], edges[(k, j)], edges[(i, j)]
        if model == "transitivity":
            constrained = ik > 0 and kj > 0
        elif model == "clustering":
            constrained = ik != 0 and kj != 0 and (ik > 0 or kj > 0)
        else:
            constrained = ik != 0 and kj != 0
        if constrained and ij != ik * kj:
            return False
    return True


@dataclass(frozen=True, eq=False)
class TriadTypeTable:
    """编码与类型编号之间的双向映射及各平衡模型的标记"""
    canonical_codes: np.ndarray
    type_of: np.ndarray
    orbit_sizes: np.ndarray
    balance_flags: Mapping[str, np.ndarray]

    @property
    def n_types(self) -> int:
        return int(self.canonical_codes.shape[0])

    def balanced_mask(self, model: str) -> np.ndarray:
        if model not in self.balance_flags:
            raise DataValidationError(f"未知的平衡模型: {model}")
        return self.balance_flags[model]

    def type_of_code(self, code: int) -> int:
        return int(self.type_of[_check_code(code)])

    def type_of_signs(self, signs: Sequence[int]) -> int:
        return int(self.type_of[encode(signs)])

    def signs_of(self, type_id: int) -> Tuple[int, ...]:
        return decode(int(self.canonical_codes[type_id]))

    def edge_multiset(self, type_id: int) -> Dict[str, int]:
        """类型的边符号多重集（正、负、空边数）"""
        signs = self.signs_of(type_id)
        return {
            "positive": sum(1 for s in signs if s > 0),
            "negative": sum(1 for s in signs if s < 0),
            "null": sum(1 for s in signs if s == 0),
        }

    def to_frame(self) -> pd.DataFrame:
        """类型表导出为 DataFrame"""
        rows = []
        for t in range(self.n_types):
            row = {"type_id": t, "canonical_code": int(self.canonical_codes[t])}
            row.update(dict(zip(SLOT_NAMES, self.signs_of(t))))
            row["orbit_size"] = int(self.orbit_sizes[t])
            for model in BALANCE_MODELS:
                row[model] = bool(self.balance_flags[model][t])
            rows.append(row)
        return pd.DataFrame(rows)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def build_type_table() -> TriadTypeTable:
    """构建（并缓存）138 类三元组类型表"""
    canonical = np.array([canonicalize(code) for code in range(N_CODES)], dtype=np.int64)
    representatives, orbit_sizes = np.unique(canonical, return_counts=True)
    type_of = np.searchsorted(representatives, canonical)
    flags = {
        model: _frozen(
            np.array([classify_balance(int(c), model) for c in representatives], dtype=bool)
        )
        for model in BALANCE_MODELS
    }
    logger.debug(f"三元组类型表: {representatives.size} 类")
    return TriadTypeTable(
        canonical_codes=_frozen(representatives),
        type_of=_frozen(type_of.astype(np.int64)),
        orbit_sizes=_frozen(orbit_sizes.astype(np.int64)),
        balance_flags=flags,
    )


def verify_type_table(table: Optional[TriadTypeTable] = None) -> List[str]:
    """
    校验类型表的结构常数

    Args:
        table: 待校验的类型表（默认使用内置表）

    Returns:
        失败项说明列表（空列表表示全部通过）
    """
    table = table or build_type_table()
    failures = []

    if table.n_types != N_TYPES:
        failures.append(f"类型数为 {table.n_types}，应为 {N_TYPES}")

    # Burnside 计数：各置换不动编码数的平均值
    fixed = [
        sum(1 for code in range(N_CODES) if encode(permute_signs(decode(code), perm)) == code)
        for perm in NODE_PERMUTATIONS
    ]
    if sum(fixed) != 6 * table.n_types:
        failures.append(f"Burnside 计数 {sum(fixed)}/6 与类型数 {table.n_types} 不符")

    if int(table.orbit_sizes.sum()) != N_CODES:
        failures.append(f"轨道大小之和为 {int(table.orbit_sizes.sum())}，应为 {N_CODES}")
    if not set(table.orbit_sizes.tolist()) <= {1, 2, 3, 6}:
        failures.append("轨道大小必须整除 6")

    complete = sum(1 for t in range(table.n_types) if 0 not in table.signs_of(t))
    if complete != EXPECTED_COMPLETE_TYPES:
        failures.append(f"完全三元组类型数为 {complete}，应为 {EXPECTED_COMPLETE_TYPES}")

    for model, expected in EXPECTED_BALANCED.items():
        count = int(table.balance_flags[model].sum())
        if count != expected:
            failures.append(f"{model} 平衡类型数为 {count}，应为 {expected}")

    classical, clustering, transitivity = (table.balance_flags[m] for m in BALANCE_MODELS)
    if np.any(classical & ~clustering) or np.any(clustering & ~transitivity):
        failures.append("平衡模型不满足 classical ⊆ clustering ⊆ transitivity")

    if np.any(table.type_of[table.canonical_codes] != np.arange(table.n_types)):
        failures.append("type_of 与代表编码不一致")

    return failures


# ----------------------------------------------------------------------
# 普查
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CensusVector:
    """一期的 138 类三元组计数"""
    counts: np.ndarray
    period_index: int
    n_nodes: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True, eq=False)
class TransitionCounts:
    """相邻两期之间三元组类型的转移计数（行：起始类型，列：目标类型）"""
    counts: np.ndarray
    from_period: int
    to_period: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@lru_cache(maxsize=4)
def _triples(m: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """m 个节点的全部 i<j<k 三元组下标，按字典序"""
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), 3)), dtype=np.int32
    )
    triples = flat.reshape(-1, 3)
    columns = tuple(np.ascontiguousarray(triples[:, c]) for c in range(3))
    for column in columns:
        column.setflags(write=False)
    return columns


def _node_subset(net: SignedNetwork, nodes: Optional[Sequence[int]]) -> np.ndarray:
    if nodes is None:
        return np.arange(net.n)
    idx = np.array(sorted(set(int(i) for i in nodes)), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= net.n):
        raise DataValidationError("节点下标越界")
    return idx


def triple_types(
    net: SignedNetwork,
    nodes: Optional[Sequence[int]] = None,
    table: Optional[TriadTypeTable] = None,
) -> np.ndarray:
    """
    计算节点子集上每个 i<j<k 三元组的类型编号

    Args:
        net: 网络
        nodes: 节点下标子集（默认全部节点）
        table: 类型表

    Returns:
        长度为 C(m, 3) 的类型编号数组（按三元组字典序）
    """
    table = table or build_type_table()
    idx = _node_subset(net, nodes)
    if idx.size < 3:
        raise DataValidationError(f"普查至少需要 3 个节点，当前 {idx.size} 个")

    digits = net.adjacency[np.ix_(idx, idx)].astype(np.int64) + 1
    i, j, k = _triples(int(idx.size))
    codes = (
        digits[i, j] * 243
        + digits[j, i] * 81
        + digits[i, k] * 27
        + digits[k, i] * 9
        + digits[j, k] * 3
        + digits[k, j]
    )
    return table.type_of[codes]


def census(
    net: SignedNetwork,
    nodes: Optional[Sequence[int]] = None,
    table: Optional[TriadTypeTable] = None,
) -> CensusVector:
    """
    三元组普查

    Args:
        net: 网络
        nodes: 节点下标子集
        table: 类型表

    Returns:
        CensusVector；计数之和为 C(m, 3)
    """
    table = table or build_type_table()
    types = triple_types(net, nodes, table)
    return census_from_types(types, net.period_index, int(_node_subset(net, nodes).size), table)


def census_from_types(
    types: np.ndarray, period_index: int, n_nodes: int, table: Optional[TriadTypeTable] = None
) -> CensusVector:
    """由 triple_types 的结果汇总普查计数"""
    table = table or build_type_table()
    counts = np.bincount(types, minlength=table.n_types).astype(np.int64)
    return CensusVector(counts=counts, period_index=period_index, n_nodes=n_nodes)


def transition_counts(
    net_t: SignedNetwork,
    net_t1: SignedNetwork,
    nodes: Optional[Sequence[int]] = None,
    table: Optional[TriadTypeTable] = None,
) -> TransitionCounts:
    """
    相邻两期之间每个三元组的类型转移计数

    Args:
        net_t: 第 t 期网络
        net_t1: 第 t+1 期网络
        nodes: 节点下标子集
        table: 类型表

    Returns:
        TransitionCounts；行和等于第 t 期普查，列和等于第 t+1 期普查

    Raises:
        DataValidationError: 两期节点注册表不一致
    """
    if net_t.node_ids != net_t1.node_ids:
        raise DataValidationError("registry mismatch: 两期网络的节点注册表不一致")

    table = table or build_type_table()
    before = triple_types(net_t, nodes, table)
    after = triple_types(net_t1, nodes, table)
    return transitions_from_types(before, after, net_t.period_index, net_t1.period_index, table)


def transitions_from_types(
    before: np.ndarray,
    after: np.ndarray,
    from_period: int,
    to_period: int,
    table: Optional[TriadTypeTable] = None,
) -> TransitionCounts:
    """由同一三元组序列在两期的类型汇总转移计数"""
    table = table or build_type_table()
    if before.shape != after.shape:
        raise DataValidationError("两期三元组数量不一致")
    n = table.n_types
    counts = np.bincount(before * n + after, minlength=n * n).reshape(n, n).astype(np.int64)
    return TransitionCounts(counts=counts, from_period=from_period, to_period=to_period)


def proportion(census_vector: CensusVector) -> np.ndarray:
    """普查计数归一化为比例向量"""
    total = census_vector.total
    if total == 0:
        raise DataValidationError("普查计数全为 0，无法计算比例")
    return census_vector.counts / total


def balanced_share(
    prop: np.ndarray, table: Optional[TriadTypeTable] = None, model: str = "classical"
) -> float:
    """比例向量中平衡类型的总占比"""
    table = table or build_type_table()
    return float(np.asarray(prop)[table.balanced_mask(model)].sum())


def proportion_summary(props: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """各类型比例在各期上的均值与标准差"""
    arr = np.asarray(props, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DataValidationError("比例序列必须是非空二维数组")
    return mean_and_std(arr)


def operative_types(
    mean_prop: np.ndarray, k: int = 10, table: Optional[TriadTypeTable] = None
) -> List[Dict]:
    """
    平均比例最高的 k 个类型（主导类型）及其边结构

    Args:
        mean_prop: 各类型的平均比例
        k: 类型个数
        table: 类型表

    Returns:
        每个类型一行：编号、代表编码、占比、累计占比、边多重集、各模型平衡标记
    """
    table = table or build_type_table()
    ranked = calculate_distribution(mean_prop, list(range(table.n_types)), top_k=k)
    rows = []
    for rank, (type_id, share, cumulative) in enumerate(ranked, start=1):
        row = {
            "rank": rank,
            "type_id": int(type_id),
            "canonical_code": int(table.canonical_codes[type_id]),
            "share": share,
            "cumulative": cumulative,
        }
        row.update(table.edge_multiset(type_id))
        for model in BALANCE_MODELS:
            row[model] = bool(table.balance_flags[model][type_id])
        rows.append(row)
    return rows
