"""
命令行端到端测试
"""

import json
from datetime import date, timedelta

import numpy as np
import pandas as pd
import pytest

import cli
from common.error_handling import EXIT_ANALYSIS_FAILURE, EXIT_INPUT_ERROR, EXIT_OK
from triad_analyzer.triads import ALL_NULL_CODE, build_type_table

pytestmark = pytest.mark.integration

START = date(2020, 1, 6)


def _write_events(path, rows):
    lines = ["date,source,target,weight"]
    lines += [f"{(START + timedelta(days=day)).isoformat()},{s},{t},{w}" for day, s, t, w in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def events(tmp_path):
    """四周的小型事件日志：a→b→c→a 每周正向成环，其余边逐周变化"""
    rows = []
    for week in range(4):
        day = 7 * week
        rows += [(day, "a", "b", 1), (day + 1, "b", "c", 2), (day + 2, "c", "a", 1.5)]
    rows += [
        (0, "a", "d", -1),
        (3, "d", "a", 1),
        (8, "c", "b", -2),
        (9, "d", "c", 1),
        (15, "b", "a", 1),
        (16, "a", "d", -1),
        (22, "c", "d", 1),
        (23, "d", "c", 1),
        (24, "b", "d", -3),
    ]
    return _write_events(tmp_path / "events.csv", rows)


def _common(events, out):
    return ["--events", str(events), "--out", str(out), "--period-days", "7", "--keep-tail"]


class TestSelftest:
    """自检命令测试"""

    def test_selftest(self, capsys):
        """测试自检通过"""
        assert cli.main(["selftest"]) == EXIT_OK
        output = capsys.readouterr().out
        assert "类型数: 138" in output
        assert "✓ 全部检查通过" in output

    def test_selftest_uses_seed(self, capsys):
        """测试合成网络核对使用配置的随机种子"""
        assert cli.main(["selftest", "--seed", "5"]) == EXIT_OK
        assert "种子 5" in capsys.readouterr().out

    def test_selftest_writes_table(self, tmp_path):
        """测试指定输出目录时写出类型表"""
        out = tmp_path / "out"
        assert cli.main(["selftest", "--out", str(out)]) == EXIT_OK
        frame = pd.read_csv(out / "type_table.csv")
        assert len(frame) == 138
        assert (out / "run_report.json").exists()

    def test_no_command(self):
        """测试未指定命令"""
        assert cli.main([]) == EXIT_INPUT_ERROR


class TestInputErrors:
    """输入错误测试"""

    def test_missing_events(self, tmp_path, capsys):
        """测试事件文件不存在：退出码 2 且不创建输出目录"""
        out = tmp_path / "out"
        code = cli.main(["census", "--events", str(tmp_path / "missing.csv"), "--out", str(out)])
        assert code == EXIT_INPUT_ERROR
        assert not out.exists()
        assert capsys.readouterr().err

    def test_mostly_malformed(self, tmp_path):
        """测试大部分行无法解析"""
        path = tmp_path / "events.csv"
        path.write_text(
            "date,source,target,weight\n2020-01-01,a,b,x\n2020-01-02,a,b,y\n2020-01-03,b,c,1\n",
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert cli.main(["census", *_common(path, out)]) == EXIT_INPUT_ERROR
        assert not out.exists()

    def test_invalid_lambda(self, events, tmp_path):
        """测试负的惩罚权重"""
        out = tmp_path / "out"
        code = cli.main(["estimate", *_common(events, out), "--lambda1", "-1"])
        assert code == EXIT_INPUT_ERROR
        assert not out.exists()


class TestPipeline:
    """各子命令的产物测试"""

    def test_build_networks(self, events, tmp_path):
        """测试分期建网产物"""
        out = tmp_path / "out"
        assert cli.main(["build-networks", *_common(events, out)]) == EXIT_OK

        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["period_count"] == 4
        assert manifest["period_days"] == 7
        assert manifest["registry_size"] == 4
        assert manifest["parse"]["retained"] == 21
        assert {"a", "b", "c"} <= set(manifest["periods"][0]["core"])

        first = pd.read_csv(out / "networks" / "period_0000.csv")
        assert set(first.columns) == {"source_id", "target_id", "sign"}
        assert ((first.source_id == "a") & (first.target_id == "d") & (first.sign == -1)).any()

        report = json.loads((out / "run_report.json").read_text(encoding="utf-8"))
        assert report["command"] == "build-networks"
        assert "output_dir" not in report["config"]
        assert report["ingest"]["parse"]["retained"] == 21
        assert (out / "timing.json").exists()

    def test_ingest_counts_in_run_report(self, events, tmp_path):
        """测试运行报告记录自环、无法解析的行与区间外事件"""
        lines = events.read_text(encoding="utf-8").splitlines()
        lines += ["2020-01-07,a,a,1", "2020-01-08,a,b,not-a-number"]
        events.write_text("\n".join(lines) + "\n", encoding="utf-8")

        for command in ("census", "transitions", "stability"):
            out = tmp_path / command
            assert cli.main([command, *_common(events, out)]) == EXIT_OK
            report = json.loads((out / "run_report.json").read_text(encoding="utf-8"))
            parse = report["ingest"]["parse"]
            assert parse["retained"] == 21
            assert parse["self_loops"] == 1
            assert parse["unparseable"] == 1
            assert report["ingest"]["excluded_events"] == 0

    def test_census(self, events, tmp_path, capsys):
        """测试普查产物：每期比例之和为 1"""
        out = tmp_path / "out"
        assert cli.main(["census", *_common(events, out), "--balance-model", "all"]) == EXIT_OK

        proportions = pd.read_csv(out / "proportions.csv")
        totals = proportions.groupby("period")["proportion"].sum()
        np.testing.assert_allclose(totals.to_numpy(), 1.0, atol=1e-9)
        shares = pd.read_csv(out / "balanced_share.csv")
        assert set(shares.model) == {"classical", "clustering", "transitivity"}
        assert len(pd.read_csv(out / "type_table.csv")) == 138
        assert "✓ 普查 4 期" in capsys.readouterr().out

    def test_transitions(self, events, tmp_path):
        """测试经验转移与平稳分布"""
        out = tmp_path / "out"
        assert cli.main(["transitions", *_common(events, out)]) == EXIT_OK

        stationary = pd.read_csv(out / "stationary.csv")
        assert len(stationary) == 138
        assert stationary.probability.sum() == pytest.approx(1.0, abs=1e-9)
        matrices = pd.read_csv(out / "transition_matrices.csv")
        row_sums = matrices.groupby(["period", "from_type"])["probability"].sum()
        np.testing.assert_allclose(row_sums.to_numpy(), 1.0, atol=1e-9)
        assert set(matrices.period) == {0, 1, 2}
        quadrants = json.loads((out / "quadrant_summary.json").read_text(encoding="utf-8"))
        assert set(quadrants["classical"]["quadrants"]) == {"B->B", "B->U", "U->B", "U->U"}

    def test_estimate(self, events, tmp_path):
        """测试时变估计写出诊断信息"""
        out = tmp_path / "out"
        code = cli.main(["estimate", *_common(events, out), "--max-iters", "2000"])
        assert code in (EXIT_OK, EXIT_ANALYSIS_FAILURE)

        diagnostics = json.loads((out / "solver_diagnostics.json").read_text(encoding="utf-8"))
        assert diagnostics["lambda1"] == 0.5
        assert diagnostics["penalty_mode"] == "matrix"
        assert (code == EXIT_OK) == diagnostics["converged"]
        trace = pd.read_csv(out / "objective_trace.csv")
        assert trace.objective.is_monotonic_decreasing

    def test_stability(self, events, tmp_path):
        """测试 Frobenius 差异序列与逐元素总变差"""
        out = tmp_path / "out"
        assert cli.main(["stability", *_common(events, out)]) == EXIT_OK
        frobenius = pd.read_csv(out / "frobenius.csv")
        assert len(frobenius) == 2
        assert (frobenius.iloc[:, -1] >= 0).all()

        tv = json.loads((out / "total_variation.json").read_text(encoding="utf-8"))["empirical"]
        assert tv["matrices"] == 3
        assert tv["rate"] == pytest.approx(tv["total"] / 3)
        # 逐元素 L1 范数不小于 Frobenius 范数
        assert tv["total"] >= frobenius.iloc[:, -1].sum() - 1e-9

    def test_forecast(self, events, tmp_path, capsys):
        """测试一步预测产物：每个留出期每种方法一行 RMSE"""
        out = tmp_path / "out"
        argv = ["forecast", *_common(events, out), "--holdout-steps", "2"]
        assert cli.main(argv) == EXIT_OK

        rmse = pd.read_csv(out / "forecast_rmse.csv")
        methods = {"last-proportion", "average-proportion", "individual-markov", "time-varying"}
        assert set(rmse.method) == methods
        assert sorted(set(rmse.step)) == [2, 3]
        assert len(rmse) == 8
        assert (rmse.rmse >= 0).all()

        summary = json.loads((out / "forecast_summary.json").read_text(encoding="utf-8"))
        assert summary["holdout_steps"] == 2
        assert set(summary["methods"]) == methods
        assert summary["tuning"] is None
        assert summary["lambda1"] == 0.5
        assert "一步预测 RMSE" in capsys.readouterr().out

    def test_forecast_holdout_too_long(self, events, tmp_path):
        """测试留出期数超过可用期数"""
        out = tmp_path / "out"
        assert cli.main(["forecast", *_common(events, out)]) == EXIT_INPUT_ERROR
        assert not out.exists()

    def test_robustness(self, events, tmp_path):
        """测试不同周期长度下平均转移矩阵的相关"""
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"robustness": {"period_days": [7, 14]}}))
        out = tmp_path / "out"
        argv = ["robustness", *_common(events, out), "--config", str(config_path)]
        assert cli.main(argv) == EXIT_OK

        result = json.loads((out / "robustness.json").read_text(encoding="utf-8"))
        assert result["reference_period_days"] == 7
        rows = result["results"]
        assert [row["period_days"] for row in rows] == [7, 14]
        assert [row["periods"] for row in rows] == [4, 2]
        assert rows[0]["r"] == pytest.approx(1.0)
        assert -1.0 <= rows[1]["r"] <= 1.0

        report = json.loads((out / "run_report.json").read_text(encoding="utf-8"))
        assert report["ingest"]["excluded_events"] == {"7": 0, "14": 0}
        assert report["ingest"]["parse"]["retained"] == 21

    def test_robustness_default_lengths_too_coarse(self, events, tmp_path):
        """测试默认 84 天周期只有一期时分析失败"""
        out = tmp_path / "out"
        assert cli.main(["robustness", *_common(events, out)]) == EXIT_ANALYSIS_FAILURE
        assert not (out / "run_report.json").exists()

    def test_too_few_periods_for_transitions(self, events, tmp_path):
        """测试只有一期时无法计算转移"""
        out = tmp_path / "out"
        argv = ["transitions", *_common(events, out)]
        argv[argv.index("7")] = "28"
        assert cli.main(argv) == EXIT_ANALYSIS_FAILURE
        assert not (out / "run_report.json").exists()


class TestFixedCore:
    """固定节点列表测试"""

    def test_all_zero_network(self, tmp_path):
        """测试所有二元组符号和为零：全部三元组为全空类型"""
        rows = []
        for week in range(3):
            day = 7 * week
            rows += [(day, "a", "b", 1), (day + 1, "a", "b", -1)]
            rows += [(day, "b", "c", 2), (day + 2, "b", "c", -2)]
        events = _write_events(tmp_path / "events.csv", rows)
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("# 分析节点\na\nb\n\nc\n", encoding="utf-8")
        out = tmp_path / "out"

        argv = ["census", *_common(events, out), "--core-mode", f"fixed:{nodes}"]
        assert cli.main(argv) == EXIT_OK

        null_type = build_type_table().type_of_code(ALL_NULL_CODE)
        proportions = pd.read_csv(out / "proportions.csv")
        null_rows = proportions[proportions.type_id == null_type]
        np.testing.assert_allclose(null_rows.proportion.to_numpy(), 1.0)

    def test_unknown_node(self, events, tmp_path):
        """测试节点列表包含未知节点"""
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("a\nb\nzz\n", encoding="utf-8")
        out = tmp_path / "out"
        argv = ["census", *_common(events, out), "--core-mode", f"fixed:{nodes}"]
        assert cli.main(argv) == EXIT_INPUT_ERROR


class TestCorrelate:
    """相关分析命令测试"""

    def test_with_stability_series(self, tmp_path):
        """测试使用已有稳定性序列"""
        rng = np.random.default_rng(0)
        years = list(range(1970, 2000))
        exogenous = rng.uniform(1.0, 4.0, size=len(years))
        stability = 1.0 / exogenous + 0.01 * rng.normal(size=len(years))

        series_path = tmp_path / "trade.csv"
        rows = [f"{y},{float(v)!r}" for y, v in zip(years, exogenous)]
        series_path.write_text("year,value\n" + "\n".join(rows) + "\n", encoding="utf-8")
        stability_path = tmp_path / "stability.csv"
        rows = [f"{y}-07-01,{float(v)!r}" for y, v in zip(years, stability)]
        stability_path.write_text("label,value\n" + "\n".join(rows) + "\n", encoding="utf-8")
        out = tmp_path / "out"
        argv = [
            "correlate",
            "--series",
            str(series_path),
            "--stability-series",
            str(stability_path),
            "--out",
            str(out),
        ]
        assert cli.main(argv) == EXIT_OK

        report = json.loads((out / "correlation_report.json").read_text(encoding="utf-8"))
        assert report["primary"] == "annualize"
        assert set(report["reports"]) == {"annualize", "interpolate"}
        primary = report["reports"]["annualize"]
        assert primary["n_pairs"] == 30
        assert primary["pearson"]["r"] > 0.9
        assert primary["granger_xy"]["direction"] == "exogenous->stability"

    def test_missing_series(self, events, tmp_path):
        """测试未提供外生序列"""
        out = tmp_path / "out"
        argv = ["correlate", "--events", str(events), "--out", str(out)]
        assert cli.main(argv) == EXIT_INPUT_ERROR
        assert not out.exists()


class TestDeterminism:
    """重复运行一致性测试"""

    def test_byte_identical_reruns(self, events, tmp_path):
        """测试同样输入与配置的两次运行产物逐字节一致（计时文件除外）"""
        first, second = tmp_path / "first", tmp_path / "second"
        for out in (first, second):
            assert cli.main(["transitions", *_common(events, out), "--seed", "3"]) == EXIT_OK

        names = sorted(
            p.relative_to(first).as_posix() for p in first.rglob("*") if p.is_file()
        )
        assert "run_report.json" in names
        for name in names:
            if name == "timing.json":
                continue
            assert (first / name).read_bytes() == (second / name).read_bytes(), name
