"""
事件日志与外生序列的读取
负责解析带分隔符的文本文件，并将事件按固定长度分期
"""

import io
import math
from dataclasses import dataclass
from datetime import date, datetime
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd
from dateutil import parser as date_parser

from common.logging.logger import get_module_logger
from common.validation.exceptions import (
    DataValidationError,
    DuplicateLabelError,
    EmptyInputError,
    MalformedInputError,
)
from common.validation.validators import require_valid, validate_period_days
from config.settings import ColumnMapping

logger = get_module_logger("extractor.ingest")

Source = Union[str, Path, TextIO]

WEIGHT_LIMIT = 10.0
MALFORMED_SHARE = 0.5
SAMPLE_SIZE = 5


@dataclass(frozen=True)
class Event:
    """一条带时间戳的有向加权评价"""
    timestamp: date
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class ParseReport:
    """解析统计"""
    total_rows: int
    retained: int
    self_loops: int
    unparseable: int
    delimiter: str
    sample: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "total_rows": self.total_rows,
            "retained": self.retained,
            "self_loops": self.self_loops,
            "unparseable": self.unparseable,
            "delimiter": "tab" if self.delimiter == "\t" else self.delimiter,
        }


@dataclass(frozen=True, eq=False)
class EventLog:
    """
    已解析的事件日志

    事件以列式数组存储；按下标或迭代访问时才构造 Event 对象。
    actors 按首次出现顺序编号 0..n-1。
    """
    days: np.ndarray
    source_idx: np.ndarray
    target_idx: np.ndarray
    weights: np.ndarray
    actors: Tuple[str, ...]
    report: Optional[ParseReport] = None

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    def __getitem__(self, i: int) -> Event:
        return Event(
            timestamp=self.days[i].astype(object),
            source=self.actors[self.source_idx[i]],
            target=self.actors[self.target_idx[i]],
            weight=float(self.weights[i]),
        )

    def __iter__(self) -> Iterator[Event]:
        for i in range(len(self)):
            yield self[i]

    @property
    def events(self) -> Tuple[Event, ...]:
        """全部事件（会物化所有 Event 对象）"""
        return tuple(self)

    @cached_property
    def actor_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.actors)}

    @property
    def first_day(self) -> date:
        return self.days.min().astype(object)

    @property
    def last_day(self) -> date:
        return self.days.max().astype(object)


@dataclass(frozen=True, eq=False)
class ScalarSeries:
    """带标签的标量序列；缺失值为 NaN，并通过 missing 显式标记"""
    labels: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if len(self.labels) != values.shape[0]:
            raise DataValidationError(
                f"标签数 {len(self.labels)} 与取值数 {values.shape[0]} 不一致"
            )
        if np.any(np.isinf(values)):
            raise DataValidationError("序列包含无穷值")
        values.setflags(write=False)
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"label": list(self.labels), "value": self.values})


@dataclass(frozen=True)
class PeriodSpec:
    """分期规格：起始日期、周期天数、周期数（或 auto）"""
    start_date: Optional[date] = None
    period_length_days: int = 84
    period_count: Union[int, str] = "auto"
    keep_tail: bool = False

    def __post_init__(self):
        require_valid(validate_period_days(self.period_length_days), "period_length_days: ")
        count = self.period_count
        if count != "auto" and (isinstance(count, bool) or not isinstance(count, int) or count < 1):
            raise DataValidationError("period_count 必须是正整数或 'auto'")


@dataclass(frozen=True, eq=False)
class BinnedPeriods:
    """分期结果：每期的事件下标、期起始日期以及被排除的事件数"""
    buckets: Tuple[np.ndarray, ...]
    period_starts: Tuple[date, ...]
    period_length_days: int
    excluded: int

    def __len__(self) -> int:
        return len(self.buckets)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(start.isoformat() for start in self.period_starts)

    def boundaries(self) -> List[Tuple[str, str]]:
        """每期的 [起始, 结束) 日期"""
        length = np.timedelta64(self.period_length_days, "D")
        return [
            (start.isoformat(), (np.datetime64(start) + length).astype(object).isoformat())
            for start in self.period_starts
        ]


# ----------------------------------------------------------------------
# 解析
# ----------------------------------------------------------------------


def _read_text(stream: Source) -> str:
    """读取文本；路径按 UTF-8 打开"""
    try:
        if isinstance(stream, (str, Path)):
            return Path(stream).read_text(encoding="utf-8")
        text = stream.read()
        return text.decode("utf-8") if isinstance(text, bytes) else text
    except UnicodeDecodeError as e:
        raise MalformedInputError(f"malformed input: not valid UTF-8 ({e})") from e


def detect_delimiter(text: str, delimiter: str = "auto") -> str:
    """
    确定分隔符

    Args:
        text: 文件内容
        delimiter: "auto"、"," 、"\\t" 或 "tab"

    Returns:
        实际使用的分隔符
    """
    if delimiter == "tab":
        return "\t"
    if delimiter != "auto":
        return delimiter
    header = text.split("\n", 1)[0]
    return "\t" if "\t" in header else ","


def _read_table(text: str, sep: str) -> Tuple[pd.DataFrame, List[str]]:
    """读取为字符串表；列数不符的行被剔除并返回"""
    try:
        frame = pd.read_csv(io.StringIO(text), sep=sep, dtype=str, keep_default_na=False)
        return frame, []
    except pd.errors.ParserError:
        bad_lines: List[str] = []

        def _collect(fields: List[str]):
            bad_lines.append(sep.join(fields))
            return None

        frame = pd.read_csv(
            io.StringIO(text),
            sep=sep,
            dtype=str,
            keep_default_na=False,
            engine="python",
            on_bad_lines=_collect,
        )
        return frame, bad_lines


def _parse_date_auto(value: str):
    try:
        return pd.Timestamp(date_parser.parse(value).date())
    except (TypeError, ValueError, OverflowError):
        return pd.NaT


def parse_dates(values: pd.Series, date_format: str = "%Y-%m-%d") -> pd.Series:
    """
    解析日期列；无法解析的值为 NaT

    Args:
        values: 字符串列
        date_format: strftime 格式；"auto" 表示交给 dateutil 自动识别
    """
    values = values.str.strip()
    if date_format == "auto":
        return pd.to_datetime(values.map(_parse_date_auto), errors="coerce")
    return pd.to_datetime(values, format=date_format, errors="coerce")


def parse_events(
    stream: Source,
    columns: Optional[ColumnMapping] = None,
    delimiter: str = "auto",
    date_format: str = "%Y-%m-%d",
) -> EventLog:
    """
    解析事件文件

    Args:
        stream: 文件路径或文本流（需要表头行）
        columns: 列名映射（日期、来源、目标、权重）
        delimiter: 分隔符，默认根据表头自动识别逗号或制表符
        date_format: 日期格式

    Returns:
        EventLog

    Raises:
        EmptyInputError: 没有任何事件
        MalformedInputError: 缺少列，或超过一半的行无法解析
    """
    columns = columns or ColumnMapping()
    text = _read_text(stream)
    if not text.strip():
        raise EmptyInputError("no events: input is empty")

    sep = detect_delimiter(text, delimiter)
    frame, bad_lines = _read_table(text, sep)

    required = [columns.date, columns.source, columns.target, columns.weight]
    missing = [name for name in required if name not in frame.columns]
    if missing:
        raise MalformedInputError(
            f"malformed input: missing columns {missing}", sample=[sep.join(frame.columns)]
        )

    total_rows = len(frame) + len(bad_lines)
    if total_rows == 0:
        raise EmptyInputError("no events: no data rows")

    sources = frame[columns.source].str.strip()
    targets = frame[columns.target].str.strip()
    dates = parse_dates(frame[columns.date], date_format)
    weights = pd.to_numeric(frame[columns.weight].str.strip(), errors="coerce")

    valid = (
        dates.notna()
        & weights.notna()
        & np.isfinite(weights.fillna(0.0))
        & (weights.abs() <= WEIGHT_LIMIT)
        & sources.notna()
        & targets.notna()
        & (sources != "")
        & (targets != "")
    )
    invalid_rows = np.flatnonzero(~valid.to_numpy())
    unparseable = int(invalid_rows.size) + len(bad_lines)

    sample = [
        f"line {int(i) + 2}: " + sep.join(frame.iloc[int(i)].fillna("").tolist())
        for i in invalid_rows[:SAMPLE_SIZE]
    ]
    sample.extend(f"fields: {line}" for line in bad_lines[: max(0, SAMPLE_SIZE - len(sample))])

    if unparseable > MALFORMED_SHARE * total_rows:
        raise MalformedInputError(
            f"malformed input: {unparseable} of {total_rows} rows unparseable", sample=sample
        )

    self_loop = valid & (sources == targets)
    keep = (valid & ~self_loop).to_numpy()
    n_self_loops = int(self_loop.sum())
    if not keep.any():
        raise EmptyInputError("no events: every parseable row is a self-loop")

    kept_sources = sources.to_numpy()[keep]
    kept_targets = targets.to_numpy()[keep]

    # 注册表按首次出现顺序：逐行先来源后目标
    interleaved = np.column_stack([kept_sources, kept_targets]).ravel()
    actors = tuple(pd.unique(interleaved))
    index = pd.Index(actors)

    report = ParseReport(
        total_rows=total_rows,
        retained=int(keep.sum()),
        self_loops=n_self_loops,
        unparseable=unparseable,
        delimiter=sep,
        sample=tuple(sample),
    )
    if n_self_loops or unparseable:
        logger.warning(
            f"事件解析: 共 {total_rows} 行, 保留 {report.retained}, "
            f"自环丢弃 {n_self_loops}, 无法解析 {unparseable}"
        )
    else:
        logger.info(f"事件解析: 共 {total_rows} 行, 全部保留")

    return EventLog(
        days=dates.to_numpy()[keep].astype("datetime64[D]"),
        source_idx=index.get_indexer(kept_sources).astype(np.int64),
        target_idx=index.get_indexer(kept_targets).astype(np.int64),
        weights=weights.to_numpy(dtype=float)[keep],
        actors=actors,
        report=report,
    )


def events_from_records(records: Sequence[Event]) -> EventLog:
    """由 Event 对象序列构造 EventLog（自环被丢弃）"""
    kept = [r for r in records if r.source != r.target and math.isfinite(r.weight)]
    if not kept:
        raise EmptyInputError("no events")
    actors = tuple(pd.unique(np.array([[r.source, r.target] for r in kept], dtype=object).ravel()))
    index = {name: i for i, name in enumerate(actors)}
    return EventLog(
        days=np.array([np.datetime64(r.timestamp, "D") for r in kept], dtype="datetime64[D]"),
        source_idx=np.array([index[r.source] for r in kept], dtype=np.int64),
        target_idx=np.array([index[r.target] for r in kept], dtype=np.int64),
        weights=np.array([r.weight for r in kept], dtype=float),
        actors=actors,
        report=None,
    )


def parse_series(stream: Source, delimiter: str = "auto") -> ScalarSeries:
    """
    解析两列（标签, 数值）的外生序列

    Args:
        stream: 文件路径或文本流（需要表头行）
        delimiter: 分隔符

    Returns:
        ScalarSeries；空白数值记为缺失

    Raises:
        EmptyInputError: 空输入
        DuplicateLabelError: 标签重复
        DataValidationError: 数值无法解析
    """
    text = _read_text(stream)
    if not text.strip():
        raise EmptyInputError("empty series: input is empty")

    sep = detect_delimiter(text, delimiter)
    try:
        frame = pd.read_csv(io.StringIO(text), sep=sep, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise MalformedInputError(f"malformed input: {e}") from e

    if frame.shape[1] < 2:
        raise MalformedInputError("malformed input: series needs (label, value) columns")
    if len(frame) == 0:
        raise EmptyInputError("empty series: no data rows")

    labels = frame.iloc[:, 0].str.strip()
    raw = frame.iloc[:, 1].str.strip()

    duplicated = labels[labels.duplicated()]
    if len(duplicated):
        raise DuplicateLabelError(f"duplicate labels: {sorted(set(duplicated))[:5]}")

    values = pd.to_numeric(raw.where(raw != "", None), errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(((raw != "").to_numpy() & np.isnan(values)) | np.isinf(values))
    if bad.size:
        i = int(bad[0])
        raise DataValidationError(
            f"non-numeric value {raw.iloc[i]!r} at line {i + 2} (label {labels.iloc[i]!r})"
        )

    n_missing = int(np.isnan(values).sum())
    if n_missing:
        logger.warning(f"外生序列包含 {n_missing} 个缺失值")

    return ScalarSeries(labels=tuple(labels), values=values)


# ----------------------------------------------------------------------
# 分期
# ----------------------------------------------------------------------


def bin_periods(log: EventLog, spec: PeriodSpec) -> BinnedPeriods:
    """
    将事件按半开区间 [start + kL, start + (k+1)L) 分期

    Args:
        log: 事件日志
        spec: 分期规格；start_date 为空时取最早事件日期

    Returns:
        BinnedPeriods；区间外的事件计入 excluded

    Raises:
        EmptyInputError: 日志为空
        DataValidationError: 没有覆盖任何完整周期
    """
    if len(log) == 0:
        raise EmptyInputError("no events")

    length = spec.period_length_days
    start = spec.start_date or log.first_day
    offsets = (log.days - np.datetime64(start, "D")).astype(np.int64)
    period_of = np.floor_divide(offsets, length)

    if spec.period_count == "auto":
        span_days = int(offsets.max()) + 1
        count = max(span_days, 0) // length
        if spec.keep_tail and span_days > 0 and span_days % length:
            count += 1
    else:
        count = int(spec.period_count)

    if count < 1:
        raise DataValidationError(
            f"zero periods covered: span from {start} shorter than {length} days"
        )

    in_range = (offsets >= 0) & (period_of < count)
    idx = np.flatnonzero(in_range)
    order = np.argsort(period_of[idx], kind="stable")
    idx = idx[order]
    edges = np.searchsorted(period_of[idx], np.arange(count + 1))
    buckets = tuple(idx[edges[k]: edges[k + 1]] for k in range(count))

    excluded = len(log) - int(idx.size)
    starts = tuple(
        (np.datetime64(start, "D") + np.timedelta64(k * length, "D")).astype(object)
        for k in range(count)
    )
    if excluded:
        logger.warning(f"分期: {count} 期 × {length} 天, 区间外事件 {excluded} 条被排除")
    else:
        logger.info(f"分期: {count} 期 × {length} 天")

    return BinnedPeriods(
        buckets=buckets, period_starts=starts, period_length_days=length, excluded=excluded
    )


def parse_start_date(value: Optional[str]) -> Optional[date]:
    """解析配置中的起始日期（YYYY-MM-DD）"""
    if value in (None, ""):
        return None
    if isinstance(value, date):
        return value
    try:
        return datetime.strptime(str(value), "%Y-%m-%d").date()
    except ValueError as e:
        raise DataValidationError(f"start_date 不是 YYYY-MM-DD 日期: {value}") from e
