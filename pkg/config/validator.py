"""
配置验证工具
"""

import sys
from pathlib import Path
from typing import List, Optional, Tuple

from common.utils.path_utils import check_output_dir
from common.validation.exceptions import ConfigError
from common.validation.validators import validate_file_path
from config.settings import Config, get_config


def validate_environment() -> Tuple[bool, List[str], List[str]]:
    """
    验证运行环境

    Returns:
        (是否有效, 错误列表, 警告列表)
    """
    errors = []
    warnings = []

    if sys.version_info < (3, 8):
        errors.append(f"Python 版本太低: {sys.version}，需要 3.8+")

    for module in ("numpy", "scipy", "pandas", "networkx", "dateutil"):
        try:
            __import__(module)
        except ImportError:
            errors.append(f"缺少依赖包: {module}")

    return len(errors) == 0, errors, warnings


def _input_file_errors(path) -> List[str]:
    valid, error = validate_file_path(path, must_exist=True)
    return [] if valid else [error]


def validate_config(
    config: Optional[Config] = None,
    require_events: bool = False,
    require_series: bool = False,
) -> Tuple[bool, List[str], List[str]]:
    """
    验证配置对象

    Args:
        config: 配置对象（如果为 None，使用全局配置）
        require_events: 是否要求事件文件存在
        require_series: 是否要求外生序列文件存在

    Returns:
        (是否有效, 错误列表, 警告列表)
    """
    if config is None:
        config = get_config()

    valid, errors = config.validate()
    errors = list(errors)
    warnings = []

    if require_events:
        if not config.inputs.events:
            errors.append("未指定事件文件 (inputs.events)")
        else:
            errors.extend(_input_file_errors(config.inputs.events))

    if require_series:
        if not config.inputs.series:
            errors.append("未指定外生序列文件 (inputs.series)")
        else:
            errors.extend(_input_file_errors(config.inputs.series))

    if config.inputs.stability_series:
        errors.extend(_input_file_errors(config.inputs.stability_series))

    if config.core.mode == "fixed" and config.core.fixed_list:
        errors.extend(_input_file_errors(config.core.fixed_list))

    try:
        check_output_dir(config.output_dir)
    except ConfigError as e:
        errors.append(str(e))

    # 合理性警告
    if config.period.period_days < 7:
        warnings.append("周期短于一周，网络可能过于稀疏")

    pair = (config.solver.lambda1, config.solver.lambda2)
    if config.forecast.tune and pair not in [tuple(p) for p in config.forecast.grid]:
        warnings.append(f"当前求解器超参数 {pair} 不在调参网格中")

    if config.solver.max_iters < config.solver.window:
        warnings.append("max_iters 小于收敛窗口，求解器无法判定收敛")

    return len(errors) == 0, errors, warnings


def require_valid_config(
    config: Config, require_events: bool = False, require_series: bool = False
) -> List[str]:
    """
    验证配置，无效时抛出 ConfigError

    Returns:
        警告列表
    """
    valid, errors, warnings = validate_config(config, require_events, require_series)
    if not valid:
        raise ConfigError("; ".join(errors))
    return warnings


def print_config_status(config: Optional[Config] = None, verbose: bool = False) -> bool:
    """
    打印配置状态

    Args:
        config: 配置对象
        verbose: 是否显示详细信息
    """
    config = config or get_config()
    print("=" * 60)
    print("配置验证报告")
    print("=" * 60)

    env_valid, env_errors, _ = validate_environment()
    if env_errors:
        print("\n❌ 环境错误:")
        for error in env_errors:
            print(f"  - {error}")
    else:
        print("\n✅ 环境配置正常")

    config_valid, config_errors, config_warnings = validate_config(config)
    if config_errors:
        print("\n❌ 配置错误:")
        for error in config_errors:
            print(f"  - {error}")
    else:
        print("\n✅ 配置验证通过")

    if config_warnings:
        print("\n⚠️  配置警告:")
        for warning in config_warnings:
            print(f"  - {warning}")

    if verbose:
        print("\n📋 配置摘要:")
        print(f"  - 事件文件: {config.inputs.events}")
        print(f"  - 周期长度: {config.period.period_days} 天")
        print(f"  - 核心模式: {config.core.mode}")
        print(f"  - lambda1/lambda2: {config.solver.lambda1}/{config.solver.lambda2}")
        print(f"  - 输出目录: {Path(config.output_dir)}")

    print("\n" + "=" * 60)
    return env_valid and config_valid


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="配置验证工具")
    parser.add_argument("-c", "--config", help="JSON 配置文件")
    parser.add_argument("-v", "--verbose", action="store_true", help="显示详细信息")
    args = parser.parse_args()

    from config.settings import load_config

    valid = print_config_status(load_config(args.config), verbose=args.verbose)
    sys.exit(0 if valid else 1)
