"""
测试错误处理机制
"""

from common.error_handling import (
    EXIT_ANALYSIS_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    describe_error,
    exit_code_for,
    handle_cli_errors,
)
from common.exceptions import (
    ConfigError,
    ConvergenceError,
    EmptyInputError,
    MalformedInputError,
    RankDeficiencyError,
    ZeroVarianceError,
)


class TestExitCodes:
    """测试异常到退出码的映射"""

    def test_input_errors(self):
        """测试输入类异常映射为 2"""
        assert exit_code_for(ConfigError("bad")) == EXIT_INPUT_ERROR
        assert exit_code_for(EmptyInputError("no events")) == EXIT_INPUT_ERROR
        assert exit_code_for(MalformedInputError()) == EXIT_INPUT_ERROR
        assert exit_code_for(FileNotFoundError("x")) == EXIT_INPUT_ERROR

    def test_analysis_errors(self):
        """测试分析类异常映射为 1"""
        assert exit_code_for(ConvergenceError()) == EXIT_ANALYSIS_FAILURE
        assert exit_code_for(RankDeficiencyError("rank")) == EXIT_ANALYSIS_FAILURE
        assert exit_code_for(RuntimeError("boom")) == EXIT_ANALYSIS_FAILURE


class TestDescribeError:
    """测试错误描述"""

    def test_plain_message(self):
        """测试普通消息"""
        assert describe_error(ZeroVarianceError("zero variance")) == "zero variance"

    def test_malformed_sample(self):
        """测试格式错误附带样本"""
        error = MalformedInputError("malformed input", sample=["line 2: a", "line 3: b"])
        message = describe_error(error)
        assert message.startswith("malformed input")
        assert "line 2: a" in message

    def test_convergence_residual(self):
        """测试未收敛附带残差"""
        message = describe_error(ConvergenceError("no", residual=0.5))
        assert "residual=5.000e-01" in message


class TestHandleCliErrors:
    """测试命令行错误处理装饰器"""

    def test_success(self):
        """测试正常返回"""

        @handle_cli_errors("test")
        def command():
            return None

        assert command() == EXIT_OK

    def test_explicit_code(self):
        """测试显式返回的退出码"""

        @handle_cli_errors("test")
        def command():
            return EXIT_ANALYSIS_FAILURE

        assert command() == EXIT_ANALYSIS_FAILURE

    def test_input_error(self, capsys):
        """测试输入错误"""

        @handle_cli_errors("test")
        def command():
            raise EmptyInputError("no events")

        assert command() == EXIT_INPUT_ERROR
        captured = capsys.readouterr()
        assert "no events" in captured.err
        assert captured.out == ""

    def test_analysis_error(self, capsys):
        """测试分析失败"""

        @handle_cli_errors("test")
        def command():
            raise ConvergenceError("did not converge", residual=1.0)

        assert command() == EXIT_ANALYSIS_FAILURE
        assert "did not converge" in capsys.readouterr().err

    def test_unexpected_error(self, capsys):
        """测试未知错误"""

        @handle_cli_errors("test")
        def command():
            raise KeyError("unexpected")

        assert command() == EXIT_ANALYSIS_FAILURE
        assert "未知错误" in capsys.readouterr().err

    def test_arguments_passed_through(self):
        """测试参数透传"""

        @handle_cli_errors("test")
        def command(a, b=0):
            return a + b

        assert command(1, b=1) == 2

    def test_logs_error(self, mocker):
        """测试错误被记录到日志"""
        logger = mocker.Mock()
        mocker.patch("common.validation.error_handling.get_module_logger", return_value=logger)

        @handle_cli_errors("census")
        def command():
            raise ConfigError("bad config")

        assert command() == EXIT_INPUT_ERROR
        logger.error.assert_called_once()
        assert "bad config" in logger.error.call_args[0][0]
