"""
运行产物写出器
负责 CSV/JSON 产物、运行报告 run_report.json 与计时文件 timing.json
"""

import platform
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx
import numpy
import pandas
import scipy

from common.data.table_io import write_csv, write_json
from common.logging.logger import get_module_logger
from common.utils.path_utils import ensure_output_dir
from config.settings import Config
from extractor.ingest import EventLog

from . import __version__
from .markov import MatrixLike, as_array

logger = get_module_logger("triad_analyzer.report_writer")

RUN_REPORT = "run_report.json"
TIMING = "timing.json"


def package_versions() -> Dict[str, str]:
    return {
        "SignedTriadDynamics": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "pandas": pandas.__version__,
        "networkx": networkx.__version__,
    }


def matrix_rows(
    mats: Sequence[MatrixLike], periods: Optional[Sequence[Any]] = None
) -> List[Tuple[Any, int, int, float]]:
    """矩阵序列展开为 (期, 起始类型, 目标类型, 概率) 的非零项"""
    rows = []
    for k, matrix in enumerate(mats):
        P = as_array(matrix)
        period = periods[k] if periods is not None else k
        sources, targets = numpy.nonzero(P)
        rows.extend(
            (period, int(i), int(j), float(P[i, j])) for i, j in zip(sources, targets)
        )
    return rows


class ArtifactWriter:
    """
    单次子命令运行的产物写出器

    运行报告不含任何时间信息，同样的输入与配置重复运行时逐字节一致；
    耗时写入单独的 timing.json。
    """

    def __init__(self, out_dir: Union[str, Path], command: str, config: Optional[Config] = None):
        self.out_dir = ensure_output_dir(out_dir)
        self.command = command
        self.config = config
        self.files: List[str] = []
        self.counts: Dict[str, Any] = {}
        self.comparisons: Dict[str, Any] = {}
        self.ingest: Optional[Dict[str, Any]] = None
        self._started = time.perf_counter()

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def csv(self, name: str, rows: Iterable, columns: Optional[Sequence[str]] = None) -> Path:
        path = write_csv(rows, self.path(name), columns)
        self.files.append(name)
        logger.debug(f"写出 {path}")
        return path

    def json(self, name: str, obj: Any) -> Path:
        path = write_json(obj, self.path(name))
        self.files.append(name)
        logger.debug(f"写出 {path}")
        return path

    def count(self, **counts: Any) -> None:
        self.counts.update(counts)

    def record_ingest(self, log: EventLog, excluded_events: Any) -> None:
        """记录事件解析的丢弃计数与分期排除计数"""
        self.ingest = {
            "parse": log.report.to_dict() if log.report is not None else None,
            "excluded_events": excluded_events,
        }

    def compare(self, name: str, observed: Any, reference: Any, note: str = "") -> None:
        """记录与参考值的对比（仅报告，不作判定）"""
        self.comparisons[name] = {"observed": observed, "reference": reference, "note": note}

    def finish(self) -> Path:
        """写出运行报告与计时文件"""
        config_echo = self.config.to_dict() if self.config is not None else None
        if config_echo is not None:
            config_echo.pop("output_dir", None)

        report = {
            "command": self.command,
            "config": config_echo,
            "versions": package_versions(),
            "counts": self.counts,
            "comparisons": self.comparisons,
            "files": sorted(self.files),
        }
        if self.ingest is not None:
            report["ingest"] = self.ingest
        path = write_json(report, self.path(RUN_REPORT))
        elapsed = time.perf_counter() - self._started
        write_json({"command": self.command, "wall_time_seconds": elapsed}, self.path(TIMING))
        logger.info(f"{self.command} 完成: {len(self.files)} 个产物, 耗时 {elapsed:.2f} 秒")
        return path
