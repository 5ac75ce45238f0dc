"""
数据输出模块
"""

from .table_io import FLOAT_FORMAT, dumps_json, format_float, to_jsonable, write_csv, write_json

__all__ = [
    "FLOAT_FORMAT",
    "dumps_json",
    "format_float",
    "to_jsonable",
    "write_csv",
    "write_json",
]
