"""
事件提取包
读取事件日志、分期并构建每期的带符号网络
"""

from .ingest import (
    BinnedPeriods,
    Event,
    EventLog,
    ParseReport,
    PeriodSpec,
    ScalarSeries,
    bin_periods,
    events_from_records,
    parse_events,
    parse_series,
    parse_start_date,
)
from .netbuild import (
    CoreResult,
    SignedNetwork,
    build_network,
    build_networks,
    dyad_fractions,
    positive_scc,
    read_node_list,
    restrict,
    stable_core,
)

__all__ = [
    "BinnedPeriods",
    "Event",
    "EventLog",
    "ParseReport",
    "PeriodSpec",
    "ScalarSeries",
    "bin_periods",
    "events_from_records",
    "parse_events",
    "parse_series",
    "parse_start_date",
    "CoreResult",
    "SignedNetwork",
    "build_network",
    "build_networks",
    "dyad_fractions",
    "positive_scc",
    "read_node_list",
    "restrict",
    "stable_core",
]
