"""
自定义异常类

InputError 系列对应退出码 2（输入/配置问题），
AnalysisError 系列对应退出码 1（分析本身失败）。
"""

from typing import Optional, Sequence


class TriadAnalysisError(Exception):
    """三元组分析基础异常"""

    pass


class InputError(TriadAnalysisError):
    """输入或配置异常"""

    pass


class ConfigError(InputError):
    """配置文件或参数无效"""

    pass


class DataValidationError(InputError):
    """数据验证异常（形状不匹配、节点注册表不一致等）"""

    pass


class EmptyInputError(DataValidationError):
    """空输入异常"""

    pass


class MalformedInputError(DataValidationError):
    """输入格式错误，附带出错行样本"""

    def __init__(self, message: str = "malformed input", sample: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.sample = list(sample or [])


class DuplicateLabelError(DataValidationError):
    """序列标签重复"""

    pass


class UnknownNodeError(DataValidationError):
    """节点不在注册表中"""

    def __init__(self, message: str, nodes: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.nodes = list(nodes or [])


class AnalysisError(TriadAnalysisError):
    """分析过程异常"""

    pass


class ConvergenceError(AnalysisError):
    """迭代未收敛"""

    def __init__(
        self,
        message: str = "iteration did not converge",
        residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class RankDeficiencyError(AnalysisError):
    """回归设计矩阵秩不足"""

    pass


class ZeroVarianceError(AnalysisError):
    """序列方差为零"""

    pass


class InsufficientDataError(AnalysisError):
    """样本量不足"""

    pass
