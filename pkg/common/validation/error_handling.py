"""
错误处理机制
将异常映射为命令行退出码
"""

import sys
from functools import wraps
from typing import Callable

from common.logging.logger import get_module_logger

from .exceptions import AnalysisError, ConvergenceError, InputError, MalformedInputError

EXIT_OK = 0
EXIT_ANALYSIS_FAILURE = 1
EXIT_INPUT_ERROR = 2


def exit_code_for(exc: BaseException) -> int:
    """
    根据异常类型确定退出码

    Args:
        exc: 捕获到的异常

    Returns:
        0 成功, 1 分析失败, 2 输入/配置错误
    """
    if isinstance(exc, InputError):
        return EXIT_INPUT_ERROR
    if isinstance(exc, (FileNotFoundError, IsADirectoryError, PermissionError)):
        return EXIT_INPUT_ERROR
    return EXIT_ANALYSIS_FAILURE


def describe_error(exc: BaseException) -> str:
    """生成面向用户的单行错误描述"""
    message = str(exc) or exc.__class__.__name__
    if isinstance(exc, MalformedInputError) and exc.sample:
        message += " | 样本: " + "; ".join(exc.sample[:3])
    if isinstance(exc, ConvergenceError) and exc.residual is not None:
        message += f" | residual={exc.residual:.3e}"
    return message


def handle_cli_errors(command_name: str) -> Callable:
    """
    命令行错误处理装饰器

    被装饰函数返回 None 或整数退出码；异常被转换为退出码并打印到标准错误。

    Args:
        command_name: 子命令名称（用于日志）
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs) -> int:
            logger = get_module_logger(f"cli.{command_name}")
            try:
                result = func(*args, **kwargs)
                return EXIT_OK if result is None else int(result)
            except (InputError, FileNotFoundError, IsADirectoryError, PermissionError) as e:
                print(f"✗ 输入错误: {describe_error(e)}", file=sys.stderr)
                logger.error(f"{command_name} 输入错误: {e}")
                return exit_code_for(e)
            except AnalysisError as e:
                print(f"✗ 分析失败: {describe_error(e)}", file=sys.stderr)
                logger.error(f"{command_name} 分析失败: {e}")
                return exit_code_for(e)
            except Exception as e:
                print(f"✗ 未知错误: {e}", file=sys.stderr)
                logger.exception("未知错误")
                return EXIT_ANALYSIS_FAILURE

        return wrapper

    return decorator
