"""
一步预测与调参的单元测试
"""

import numpy as np
import pytest

from common.exceptions import DataValidationError, InsufficientDataError
from config.settings import DEFAULT_GRID, SolverConfig
from triad_analyzer.forecast import (
    METHODS,
    evaluate_methods,
    forecast_one_step,
    rmse,
    score_grid,
    select_best,
    tune_hyperparams,
)
from triad_analyzer.synthetic import (
    drifting_truth,
    embed_block,
    random_stochastic_matrix,
    simulate_chain,
)


def _constant_sequence(n_periods=6, k=3):
    prop = np.arange(1, k + 1, dtype=float)
    prop /= prop.sum()
    props = np.tile(prop, (n_periods, 1))
    phats = [np.eye(k) for _ in range(n_periods - 1)]
    return props, phats


class TestForecastOneStep:
    """一步预测测试"""

    def test_preserves_simplex(self):
        """测试结果仍为概率向量"""
        rng = np.random.default_rng(0)
        P = random_stochastic_matrix(6, rng)
        prop = rng.dirichlet(np.ones(6))
        pred = forecast_one_step(prop, P)
        assert pred.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(pred >= 0)

    def test_row_vector_convention(self):
        """测试行向量左乘"""
        P = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(forecast_one_step([0.7, 0.3], P), [0.3, 0.7])

    def test_dimension_mismatch(self):
        """测试维度不符"""
        with pytest.raises(DataValidationError):
            forecast_one_step([0.5, 0.5], np.eye(3))


class TestRmse:
    """RMSE 测试"""

    def test_values(self):
        """测试数值与对称性"""
        a, b = np.array([0.0, 1.0]), np.array([1.0, 1.0])
        assert rmse(a, b) == pytest.approx(np.sqrt(0.5))
        assert rmse(a, b) == rmse(b, a)
        assert rmse(a, a) == 0.0

    def test_shape(self):
        """测试形状不一致"""
        with pytest.raises(DataValidationError):
            rmse(np.zeros(2), np.zeros(3))


class TestEvaluateMethods:
    """方法比较测试"""

    def test_constant_sequence(self):
        """测试常数序列：上一期比例的 RMSE 为 0"""
        props, phats = _constant_sequence()
        report = evaluate_methods(props, phats, SolverConfig(), holdout_steps=3)
        assert report.steps == (3, 4, 5)
        assert set(report.rmse) == set(METHODS)
        np.testing.assert_allclose(report.rmse["last-proportion"], 0.0)
        np.testing.assert_allclose(report.rmse["average-proportion"], 0.0, atol=1e-15)
        np.testing.assert_allclose(report.rmse["individual-markov"], 0.0, atol=1e-15)
        np.testing.assert_allclose(report.rmse["time-varying"], 0.0, atol=1e-7)

    def test_baselines(self):
        """测试基线方法的手工结果"""
        props = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        phats = [swap, np.full((2, 2), 0.5), np.eye(2)]
        report = evaluate_methods(
            props,
            phats,
            holdout_steps=1,
            methods=("last-proportion", "average-proportion", "individual-markov"),
        )
        assert report.steps == (3,)
        # 上一期 (0.5, 0.5) 与 (1, 0) 的误差
        assert report.rmse["last-proportion"][0] == pytest.approx(0.5)
        # 平均 (0.5, 0.5)
        assert report.rmse["average-proportion"][0] == pytest.approx(0.5)
        # 用 P̂_1（均匀矩阵）推进 (0.5, 0.5)
        assert report.rmse["individual-markov"][0] == pytest.approx(0.5)

    def test_restrict_types(self):
        """测试限定类型计算 RMSE"""
        props = np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5]])
        phats = [np.eye(3), np.eye(3)]
        report = evaluate_methods(
            props, phats, holdout_steps=1, types=[0], methods=("last-proportion",)
        )
        assert report.rmse["last-proportion"][0] == 0.0

    def test_report_helpers(self):
        """测试报告汇总与行展开"""
        props, phats = _constant_sequence()
        report = evaluate_methods(props, phats, holdout_steps=2, methods=("last-proportion",))
        assert report.mean("last-proportion") == 0.0
        assert report.summary()["last-proportion"] == {"mean": 0.0, "median": 0.0}
        assert report.to_rows() == [(4, "last-proportion", 0.0), (5, "last-proportion", 0.0)]

    def test_holdout_too_long(self):
        """测试留出期超出可用期数"""
        props, phats = _constant_sequence(n_periods=5)
        with pytest.raises(DataValidationError, match="holdout exceeding available periods"):
            evaluate_methods(props, phats, holdout_steps=4)
        with pytest.raises(DataValidationError):
            evaluate_methods(props, phats, holdout_steps=0)

    def test_too_few_periods(self):
        """测试期数不足"""
        props, phats = _constant_sequence(n_periods=2)
        with pytest.raises(InsufficientDataError):
            evaluate_methods(props, phats, holdout_steps=1)

    def test_misaligned_sequences(self):
        """测试矩阵数与比例数不匹配"""
        props, phats = _constant_sequence(n_periods=5)
        with pytest.raises(DataValidationError):
            evaluate_methods(props, phats[:-1], holdout_steps=1)

    @pytest.mark.slow
    def test_time_varying_beats_individual(self):
        """测试平滑漂移的合成链上（5 个种子，各留出 5 期）时变估计平均优于单期经验矩阵"""
        states = list(range(5))
        initial = np.zeros(138)
        initial[states] = 0.2
        config = SolverConfig(lambda1=5e-4, lambda2=5e-5)

        means = {"time-varying": [], "individual-markov": []}
        for seed in range(5):
            rng = np.random.default_rng(seed)
            start = embed_block(random_stochastic_matrix(5, rng, self_weight=0.6), states)
            end = embed_block(random_stochastic_matrix(5, rng, self_weight=0.6), states)
            truth = drifting_truth(start, end, 30)
            chain = simulate_chain(truth, initial, n_triads=5000, rng=rng)
            report = evaluate_methods(
                chain.proportions,
                chain.empirical,
                config,
                holdout_steps=5,
                methods=tuple(means),
            )
            for method in means:
                means[method].append(report.mean(method))
        assert np.mean(means["time-varying"]) < np.mean(means["individual-markov"])


class TestTuning:
    """超参数调优测试"""

    def test_select_best_tie_break(self):
        """测试并列时取较大的 λ1，再取较大的 λ2"""
        scored = [
            ((0.1, 0.05), 1.0),
            ((0.5, 0.005), 1.0),
            ((0.5, 0.05), 1.0 + 1e-15),
            ((5.0, 0.5), 2.0),
        ]
        assert select_best(scored) == (0.5, 0.05)
        assert select_best([((1.0, 1.0), 3.0), ((0.05, 0.005), 0.5)]) == (0.05, 0.005)

    def test_select_best_empty(self):
        """测试空列表"""
        with pytest.raises(DataValidationError):
            select_best([])

    def test_singleton_grid(self):
        """测试单点网格"""
        props, phats = _constant_sequence(n_periods=5)
        best = tune_hyperparams(props, phats, [(0.3, 0.03)], validation_steps=2)
        assert best == (0.3, 0.03)

    def test_empty_grid(self):
        """测试空网格"""
        props, phats = _constant_sequence(n_periods=5)
        with pytest.raises(DataValidationError):
            tune_hyperparams(props, phats, [], validation_steps=2)

    def test_selects_minimum_score(self):
        """测试选出的网格点得分最低"""
        rng = np.random.default_rng(3)
        truth = [random_stochastic_matrix(3, rng, self_weight=0.5) for _ in range(6)]
        chain = simulate_chain(truth, np.ones(3), n_triads=300, rng=rng)
        grid = [(0.05, 0.005), (1.0, 0.5), (0.5, 0.05)]

        scored = score_grid(chain.proportions, chain.empirical, grid, validation_steps=3)
        best = tune_hyperparams(chain.proportions, chain.empirical, grid, validation_steps=3)
        assert [pair for pair, _ in scored] == grid
        assert dict(scored)[best] == min(score for _, score in scored)

    def test_default_grid_contains_standard_point(self):
        """测试默认网格包含 (0.5, 0.05)"""
        assert (0.5, 0.05) in [tuple(pair) for pair in DEFAULT_GRID]
        assert len(DEFAULT_GRID) == 15
