"""
集中配置管理
所有配置项的单一来源

优先级（低 → 高）: 数据类默认值 → JSON 配置文件 → 环境变量 (TRIADS_*) → 命令行参数
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from dotenv import load_dotenv

from common.validation.exceptions import ConfigError
from common.validation.validators import (
    BALANCE_MODELS,
    ZERO_ROW_POLICIES,
    validate_balance_model,
    validate_lambda,
    validate_penalty_mode,
    validate_period_days,
)

# 加载环境变量
load_dotenv()

ENV_PREFIX = "TRIADS_"

# 默认超参数网格，覆盖 (0.5, 0.05)
DEFAULT_GRID: Tuple[Tuple[float, float], ...] = tuple(
    (l1, l2) for l1 in (0.05, 0.1, 0.5, 1.0, 5.0) for l2 in (0.005, 0.05, 0.5)
)


@dataclass
class ColumnMapping:
    """事件文件列名映射"""
    date: str = "date"
    source: str = "source"
    target: str = "target"
    weight: str = "weight"


@dataclass
class InputConfig:
    """输入文件配置"""
    events: Optional[str] = None
    series: Optional[str] = None
    stability_series: Optional[str] = None
    columns: ColumnMapping = field(default_factory=ColumnMapping)
    delimiter: str = "auto"
    date_format: str = "%Y-%m-%d"


@dataclass
class PeriodConfig:
    """分期配置"""
    start_date: Optional[str] = None
    period_days: int = 84
    period_count: Union[int, str] = "auto"
    keep_tail: bool = False


@dataclass
class CoreConfig:
    """核心节点集配置"""
    mode: str = "union"
    fixed_list: Optional[str] = None


@dataclass
class AnalysisConfig:
    """三元组与马尔可夫分析配置"""
    balance_models: List[str] = field(default_factory=lambda: list(BALANCE_MODELS))
    zero_row_policy: str = "identity"
    stationary_tol: float = 1e-12
    smoothing_epsilon: float = 1e-8
    stationary_max_iters: int = 100_000
    operative_k: int = 10


@dataclass
class SolverConfig:
    """时变马尔可夫估计器配置"""
    lambda1: float = 0.5
    lambda2: float = 0.05
    epsilon_floor: float = 1e-9
    tol: float = 1e-6
    max_iters: int = 20_000
    penalty_mode: str = "matrix"
    feasibility_tol: float = 1e-6
    rho: Optional[float] = None
    window: int = 50

    def validate(self, n_states: int = 138) -> List[str]:
        """返回错误列表（空列表表示有效）"""
        errors = []
        for name in ("lambda1", "lambda2"):
            valid, error = validate_lambda(getattr(self, name), name)
            if not valid:
                errors.append(error)
        if not (0 < self.epsilon_floor < 1.0 / n_states):
            errors.append(f"epsilon_floor 必须位于 (0, 1/{n_states})")
        if not self.tol > 0:
            errors.append("tol 必须大于 0")
        if not self.feasibility_tol > 0:
            errors.append("feasibility_tol 必须大于 0")
        if self.max_iters < 1:
            errors.append("max_iters 必须为正整数")
        if self.window < 1:
            errors.append("window 必须为正整数")
        if self.rho is not None and not self.rho > 0:
            errors.append("rho 必须大于 0")
        valid, error = validate_penalty_mode(self.penalty_mode)
        if not valid:
            errors.append(error)
        return errors


@dataclass
class ForecastConfig:
    """预测与调参配置"""
    holdout_steps: int = 5
    validation_steps: int = 5
    n_folds: int = 5
    grid: List[Tuple[float, float]] = field(default_factory=lambda: list(DEFAULT_GRID))
    restrict_operative: bool = False
    tune: bool = False


@dataclass
class StatsConfig:
    """统计检验配置"""
    alignment: str = "annualize"
    invert: Optional[str] = "exogenous"
    lags: int = 1


@dataclass
class RobustnessConfig:
    """不同周期长度的稳健性比较"""
    period_days: List[int] = field(default_factory=lambda: [84, 28, 14, 7])


class Config:
    """主配置类"""

    SECTIONS = ("inputs", "period", "core", "analysis", "solver", "forecast", "stats", "robustness")

    def __init__(self):
        self.inputs = InputConfig()
        self.period = PeriodConfig()
        self.core = CoreConfig()
        self.analysis = AnalysisConfig()
        self.solver = SolverConfig()
        self.forecast = ForecastConfig()
        self.stats = StatsConfig()
        self.robustness = RobustnessConfig()
        self.output_dir = "output"
        self.seed = 0
        self.log_level = "INFO"

    # ------------------------------------------------------------------
    # 加载与覆盖
    # ------------------------------------------------------------------

    def update(self, overrides: Mapping[str, Any]) -> "Config":
        """
        按嵌套字典覆盖配置

        Args:
            overrides: 形如 {"solver": {"lambda1": 1.0}, "seed": 3} 的字典

        Returns:
            self

        Raises:
            ConfigError: 未知键
        """
        for key, value in overrides.items():
            if key in self.SECTIONS:
                if not isinstance(value, Mapping):
                    raise ConfigError(f"配置节 {key} 必须是对象")
                _update_dataclass(getattr(self, key), value, key)
            elif key in ("output_dir", "seed", "log_level"):
                setattr(self, key, value)
            else:
                raise ConfigError(f"未知配置键: {key}")
        return self

    def apply_environment(self, environ: Optional[Mapping[str, str]] = None) -> "Config":
        """
        应用 TRIADS_* 环境变量，例如 TRIADS_SOLVER__LAMBDA1=1.0、TRIADS_SEED=7

        Args:
            environ: 环境变量映射（默认 os.environ）
        """
        environ = os.environ if environ is None else environ
        overrides: Dict[str, Any] = {}
        for name, raw in sorted(environ.items()):
            if not name.startswith(ENV_PREFIX):
                continue
            path = name[len(ENV_PREFIX):].lower().split("__")
            value = _parse_env_value(raw)
            if len(path) == 1:
                overrides[path[0]] = value
            elif len(path) == 2:
                overrides.setdefault(path[0], {})[path[1]] = value
        if overrides:
            self.update(overrides)
        return self

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Config":
        """从 JSON 文件加载配置"""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"配置文件不存在: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件不是有效 JSON: {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("配置文件顶层必须是对象")
        return cls().update(data)

    # ------------------------------------------------------------------
    # 验证与导出
    # ------------------------------------------------------------------

    def validate(self) -> Tuple[bool, List[str]]:
        """
        验证配置的有效性

        Returns:
            (是否有效, 错误列表)
        """
        errors = []

        valid, error = validate_period_days(self.period.period_days)
        if not valid:
            errors.append(error)

        count = self.period.period_count
        positive_int = isinstance(count, int) and not isinstance(count, bool) and count >= 1
        if not (count == "auto" or positive_int):
            errors.append("period_count 必须是正整数或 'auto'")

        if self.period.start_date is not None:
            try:
                date.fromisoformat(str(self.period.start_date))
            except ValueError:
                errors.append(f"start_date 不是 YYYY-MM-DD 日期: {self.period.start_date}")

        if self.core.mode not in ("union", "fixed"):
            errors.append(f"core.mode 必须是 union 或 fixed: {self.core.mode}")
        elif self.core.mode == "fixed" and not self.core.fixed_list:
            errors.append("core.mode=fixed 需要 fixed_list 文件")

        if not self.analysis.balance_models:
            errors.append("balance_models 不能为空")
        for model in self.analysis.balance_models:
            valid, error = validate_balance_model(model)
            if not valid:
                errors.append(error)

        if self.analysis.zero_row_policy not in ZERO_ROW_POLICIES:
            errors.append(f"zero_row_policy 必须是 {'/'.join(ZERO_ROW_POLICIES)}")
        if not self.analysis.stationary_tol > 0:
            errors.append("stationary_tol 必须大于 0")
        if not 0 <= self.analysis.smoothing_epsilon < 1:
            errors.append("smoothing_epsilon 必须位于 [0, 1)")
        if self.analysis.operative_k < 1:
            errors.append("operative_k 必须为正整数")

        errors.extend(self.solver.validate())

        if self.forecast.holdout_steps < 1:
            errors.append("holdout_steps 必须大于 0")
        if self.forecast.validation_steps < 1:
            errors.append("validation_steps 必须大于 0")
        if self.forecast.n_folds < 1:
            errors.append("n_folds 必须大于 0")
        if not self.forecast.grid:
            errors.append("超参数网格不能为空")
        for pair in self.forecast.grid:
            if len(pair) != 2:
                errors.append(f"网格点必须是 (lambda1, lambda2): {pair}")
                continue
            for value, name in zip(pair, ("lambda1", "lambda2")):
                valid, error = validate_lambda(value, name)
                if not valid:
                    errors.append(error)

        if self.stats.alignment not in ("annualize", "interpolate", "exact"):
            errors.append(f"未知的对齐方式: {self.stats.alignment}")
        if self.stats.invert not in (None, "exogenous", "stability"):
            errors.append(f"invert 必须是 exogenous、stability 或 null: {self.stats.invert}")
        if not isinstance(self.stats.lags, int) or self.stats.lags < 1:
            errors.append("lags 必须为正整数")

        for days in self.robustness.period_days:
            valid, error = validate_period_days(days)
            if not valid:
                errors.append(f"robustness: {error}")

        if not isinstance(self.seed, int):
            errors.append("seed 必须是整数")

        return len(errors) == 0, errors

    def to_dict(self) -> Dict:
        """转换为字典格式"""
        result = {name: asdict(getattr(self, name)) for name in self.SECTIONS}
        result["forecast"]["grid"] = [list(pair) for pair in self.forecast.grid]
        result["output_dir"] = str(self.output_dir)
        result["seed"] = self.seed
        result["log_level"] = self.log_level
        return result


def _update_dataclass(target, values: Mapping[str, Any], section: str) -> None:
    known = {f.name for f in fields(target)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"未知配置键: {section}.{key}")
        current = getattr(target, key)
        if is_dataclass(current):
            if not isinstance(value, Mapping):
                raise ConfigError(f"配置项 {section}.{key} 必须是对象")
            _update_dataclass(current, value, f"{section}.{key}")
        elif key == "grid":
            setattr(target, key, [tuple(float(v) for v in pair) for pair in value])
        else:
            setattr(target, key, value)


def _parse_env_value(raw: str) -> Any:
    """环境变量值按 JSON 解析，失败时保留字符串"""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


# 全局配置实例
_config: Optional[Config] = None


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Config:
    """
    按优先级组装配置：默认值 → 文件 → 环境变量 → 覆盖项

    Args:
        path: JSON 配置文件路径
        overrides: 命令行覆盖项（嵌套字典）
        environ: 环境变量映射（测试用）

    Returns:
        组装好的配置
    """
    global _config
    config = Config.from_file(path) if path else Config()
    config.apply_environment(environ)
    if overrides:
        config.update(overrides)
    _config = config
    return config


def get_config() -> Config:
    """获取全局配置实例"""
    global _config
    if _config is None:
        _config = Config().apply_environment()
    return _config
