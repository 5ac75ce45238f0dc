#!/usr/bin/env python
"""
统一的命令行接口入口
整合建网、普查、转移、估计、预测、稳定性与相关分析等子命令

退出码: 0 成功, 1 分析失败（如求解器未收敛）, 2 输入或配置错误
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

# 添加项目根目录到路径
project_root = Path(__file__).parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from common.logger import get_module_logger, set_project_level
from common.error_handling import (
    EXIT_ANALYSIS_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    handle_cli_errors,
)

BALANCE_CHOICES = ("classical", "clustering", "transitivity", "all")

# 与公开数据上报告的数值对比（仅记录，不作判定）
REFERENCE_OPERATIVE_COVERAGE = 0.91
REFERENCE_STATIONARY_BALANCED = 0.85
REFERENCE_PEARSON_R = 0.88


def _core_mode(value: str) -> Dict[str, Any]:
    """解析 --core-mode：union 或 fixed:FILE"""
    if value == "union":
        return {"mode": "union"}
    if value.startswith("fixed:") and len(value) > len("fixed:"):
        return {"mode": "fixed", "fixed_list": value[len("fixed:"):]}
    raise argparse.ArgumentTypeError("必须是 union 或 fixed:FILE")


def _overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """命令行参数转换为嵌套配置覆盖项（未指定的参数不覆盖）"""
    overrides: Dict[str, Any] = {}

    def put(section: Optional[str], key: str, value: Any) -> None:
        if value is None:
            return
        if section is None:
            overrides[key] = value
        else:
            overrides.setdefault(section, {})[key] = value

    put("inputs", "events", getattr(args, "events", None))
    put("inputs", "series", getattr(args, "series", None))
    put("inputs", "stability_series", getattr(args, "stability_series", None))
    put("inputs", "date_format", getattr(args, "date_format", None))
    put("period", "period_days", getattr(args, "period_days", None))
    put("period", "start_date", getattr(args, "start_date", None))
    put("period", "keep_tail", getattr(args, "keep_tail", None))
    core = getattr(args, "core_mode", None)
    if core:
        overrides["core"] = dict(core)
    model = getattr(args, "balance_model", None)
    if model:
        models = ["classical", "clustering", "transitivity"] if model == "all" else [model]
        put("analysis", "balance_models", models)
    put("solver", "penalty_mode", getattr(args, "penalty_mode", None))
    put("solver", "lambda1", getattr(args, "lambda1", None))
    put("solver", "lambda2", getattr(args, "lambda2", None))
    put("solver", "max_iters", getattr(args, "max_iters", None))
    put("forecast", "holdout_steps", getattr(args, "holdout_steps", None))
    if getattr(args, "tune", False):
        put("forecast", "tune", True)
    if getattr(args, "restrict_operative", False):
        put("forecast", "restrict_operative", True)
    put("stats", "alignment", getattr(args, "alignment", None))
    put(None, "output_dir", getattr(args, "out", None))
    put(None, "seed", getattr(args, "seed", None))
    put(None, "log_level", getattr(args, "log_level", None))
    return overrides


def _prepare(args: argparse.Namespace, require_events: bool = True, require_series: bool = False):
    """组装并验证配置；验证在创建输出目录之前完成"""
    from config import load_config
    from config.validator import require_valid_config

    config = load_config(args.config, overrides=_overrides_from_args(args))
    set_project_level(config.log_level)
    logger = get_module_logger(f"cli.{args.command}")
    for warning in require_valid_config(config, require_events, require_series):
        logger.warning(warning)
    return config


def _network_and_triads(config, with_transitions: bool = True):
    from triad_analyzer.pipeline import build_network_series, compute_triad_series

    series = build_network_series(config)
    triads = compute_triad_series(
        series,
        zero_row_policy=config.analysis.zero_row_policy,
        with_transitions=with_transitions,
    )
    return series, triads


def _require_transitions(triads) -> None:
    from common.exceptions import InsufficientDataError

    if not triads.empirical:
        raise InsufficientDataError("至少需要 2 期才能计算转移矩阵")


@handle_cli_errors("build-networks")
def cmd_build_networks(args):
    """建网命令"""
    from extractor.netbuild import dyad_fractions
    from triad_analyzer.pipeline import build_network_series
    from triad_analyzer.report_writer import ArtifactWriter

    config = _prepare(args)
    series = build_network_series(config)
    actors = series.log.actors

    writer = ArtifactWriter(config.output_dir, "build-networks", config)
    writer.record_ingest(series.log, series.binned.excluded)
    periods = []
    fractions = []
    for k, (net, core, (start, end)) in enumerate(
        zip(series.networks, series.cores, series.binned.boundaries())
    ):
        sources, targets = net.adjacency.nonzero()
        writer.csv(
            f"networks/period_{k:04d}.csv",
            [(actors[i], actors[j], int(net.adjacency[i, j])) for i, j in zip(sources, targets)],
            columns=["source_id", "target_id", "sign"],
        )
        analysed = series.analysed(k) if series.nodes else net
        positive, negative = dyad_fractions(analysed)
        fractions.append((k, start, positive, negative))
        periods.append(
            {
                "index": k,
                "start": start,
                "end": end,
                "events": int(len(series.binned.buckets[k])),
                "edges": net.edge_counts(),
                "core_size": len(core.core),
                "periphery_size": len(core.periphery),
                "core": sorted(actors[i] for i in core.core),
                "periphery": sorted(actors[i] for i in core.periphery),
            }
        )

    writer.csv("dyad_fractions.csv", fractions, columns=["period", "start", "positive", "negative"])
    writer.json(
        "manifest.json",
        {
            "period_days": series.binned.period_length_days,
            "period_count": len(series.networks),
            "excluded_events": series.binned.excluded,
            "parse": series.log.report.to_dict() if series.log.report else None,
            "registry_size": len(actors),
            "analysed_nodes": list(series.node_names),
            "periods": periods,
        },
    )
    writer.count(periods=len(series.networks), nodes=len(actors), analysed_nodes=len(series.nodes))
    writer.finish()

    print(f"✓ 构建 {len(series.networks)} 期网络（{len(actors)} 个节点，分析节点 {len(series.nodes)} 个）")
    print(f"✓ 已保存到 {writer.out_dir}")


@handle_cli_errors("census")
def cmd_census(args):
    """三元组普查命令"""
    from common.calculations import calculate_percentage, format_percentage_display
    from triad_analyzer.report_writer import ArtifactWriter
    from triad_analyzer.triads import (
        balanced_share,
        build_type_table,
        operative_types,
        proportion_summary,
    )

    config = _prepare(args)
    series, triads = _network_and_triads(config, with_transitions=False)
    table = build_type_table()
    models = config.analysis.balance_models

    mean, std = proportion_summary(triads.proportions)
    operative = operative_types(mean, k=config.analysis.operative_k, table=table)
    coverage = operative[-1]["cumulative"] if operative else 0.0

    writer = ArtifactWriter(config.output_dir, "census", config)
    writer.record_ingest(series.log, series.binned.excluded)
    writer.csv(
        "census_counts.csv",
        [(c.period_index, t, int(n)) for c in triads.censuses for t, n in enumerate(c.counts)],
        columns=["period", "type_id", "count"],
    )
    writer.csv(
        "proportions.csv",
        [(k, t, float(p)) for k, row in enumerate(triads.proportions) for t, p in enumerate(row)],
        columns=["period", "type_id", "proportion"],
    )
    shares = [
        (k, model, balanced_share(row, table, model))
        for k, row in enumerate(triads.proportions)
        for model in models
    ]
    writer.csv("balanced_share.csv", shares, columns=["period", "model", "share"])
    writer.csv(
        "proportion_summary.csv",
        [(t, float(mean[t]), float(std[t])) for t in range(table.n_types)],
        columns=["type_id", "mean", "std"],
    )
    writer.csv("operative_types.csv", operative)
    writer.csv("type_table.csv", table.to_frame())
    writer.count(periods=len(triads.censuses), triads_per_period=triads.censuses[0].total)
    writer.compare(
        "operative_coverage",
        coverage,
        REFERENCE_OPERATIVE_COVERAGE,
        f"top-{config.analysis.operative_k} types mass",
    )
    writer.finish()

    print(f"✓ 普查 {len(triads.censuses)} 期，每期 {triads.censuses[0].total} 个三元组")
    for model in models:
        last = balanced_share(triads.proportions[-1], table, model)
        print(f"  {model:<13} 末期平衡占比 {format_percentage_display(calculate_percentage(last, 1))}")
    print(f"  前 {config.analysis.operative_k} 类型覆盖 {coverage:.1%}")


@handle_cli_errors("transitions")
def cmd_transitions(args):
    """经验转移矩阵命令"""
    from triad_analyzer.markov import (
        average_transition,
        quadrant_summary,
        stationary,
        stationary_balanced_mass,
    )
    from triad_analyzer.report_writer import ArtifactWriter, matrix_rows

    config = _prepare(args)
    series, triads = _network_and_triads(config)
    _require_transitions(triads)

    average = average_transition(triads.empirical)
    pi = stationary(
        average,
        tol=config.analysis.stationary_tol,
        smoothing_epsilon=config.analysis.smoothing_epsilon,
        max_iters=config.analysis.stationary_max_iters,
    )
    models = config.analysis.balance_models

    writer = ArtifactWriter(config.output_dir, "transitions", config)
    writer.record_ingest(series.log, series.binned.excluded)
    writer.csv(
        "transition_matrices.csv",
        matrix_rows(triads.empirical, [m.from_period for m in triads.empirical]),
        columns=["period", "from_type", "to_type", "probability"],
    )
    writer.csv(
        "average_matrix.csv",
        [row[1:] for row in matrix_rows([average])],
        columns=["from_type", "to_type", "probability"],
    )
    writer.csv("stationary.csv", list(enumerate(pi.tolist())), columns=["type_id", "probability"])
    writer.json(
        "quadrant_summary.json",
        {model: quadrant_summary(triads.empirical, model=model).to_dict() for model in models},
    )
    for model in models:
        writer.compare(
            f"stationary_balanced_mass.{model}",
            stationary_balanced_mass(pi, model=model),
            REFERENCE_STATIONARY_BALANCED,
            "lower bound reported for the classical model",
        )
    writer.count(matrices=len(triads.empirical))
    writer.finish()

    print(f"✓ {len(triads.empirical)} 个经验转移矩阵")
    for model in models:
        print(f"  {model:<13} 平稳分布平衡质量 {stationary_balanced_mass(pi, model=model):.4f}")


@handle_cli_errors("estimate")
def cmd_estimate(args):
    """时变马尔可夫估计命令"""
    from triad_analyzer.markov import quadrant_summary
    from triad_analyzer.report_writer import ArtifactWriter, matrix_rows
    from triad_analyzer.tvsolver import estimate, total_variation

    config = _prepare(args)
    series, triads = _network_and_triads(config)
    _require_transitions(triads)

    result = estimate(triads.empirical, config.solver)
    T = len(triads.empirical)
    diagnostics = result.diagnostics()
    diagnostics["lambda1"] = config.solver.lambda1
    diagnostics["lambda2"] = config.solver.lambda2
    diagnostics["penalty_mode"] = config.solver.penalty_mode
    if T >= 2:
        tv_empirical = total_variation(triads.empirical)
        tv_estimated = total_variation(result.matrices)
        diagnostics["total_variation"] = {
            "empirical": {"total": tv_empirical, "rate": tv_empirical / T},
            "estimated": {"total": tv_estimated, "rate": tv_estimated / T},
        }

    writer = ArtifactWriter(config.output_dir, "estimate", config)
    writer.record_ingest(series.log, series.binned.excluded)
    writer.csv(
        "estimated_matrices.csv",
        matrix_rows(result.matrices, [m.from_period for m in triads.empirical]),
        columns=["period", "from_type", "to_type", "probability"],
    )
    writer.csv(
        "objective_trace.csv",
        list(enumerate(result.objective_trace.tolist(), start=1)),
        columns=["iteration", "objective"],
    )
    writer.json(
        "quadrant_summary.json",
        {
            model: quadrant_summary(result.matrices, model=model).to_dict()
            for model in config.analysis.balance_models
        },
    )
    writer.json("solver_diagnostics.json", diagnostics)
    writer.count(matrices=T)
    writer.finish()

    if not result.converged:
        print(
            f"✗ 求解器未在 {result.iterations} 次迭代内收敛（原始残差 {result.primal_residual:.3e}），"
            "诊断信息已写出",
            file=sys.stderr,
        )
        return EXIT_ANALYSIS_FAILURE

    print(f"✓ 求解器收敛: {result.iterations} 次迭代, 目标值 {result.final_objective:.9g}")
    return EXIT_OK


@handle_cli_errors("forecast")
def cmd_forecast(args):
    """一步预测评估命令"""
    from triad_analyzer.forecast import evaluate_methods, score_grid, select_best
    from triad_analyzer.report_writer import ArtifactWriter
    from triad_analyzer.triads import operative_types, proportion_summary

    config = _prepare(args)
    series, triads = _network_and_triads(config)
    _require_transitions(triads)

    props = triads.proportions
    phats = triads.empirical
    holdout = config.forecast.holdout_steps

    types = None
    if config.forecast.restrict_operative:
        mean, _ = proportion_summary(props[: len(props) - holdout])
        types = [row["type_id"] for row in operative_types(mean, config.analysis.operative_k)]

    solver_config = config.solver
    tuning = None
    if config.forecast.tune:
        train_props = props[: len(props) - holdout]
        train_phats = phats[: len(phats) - holdout]
        validation_steps = min(config.forecast.validation_steps, len(train_props) - 2)
        scored = score_grid(
            train_props,
            train_phats,
            config.forecast.grid,
            validation_steps=validation_steps,
            base_config=solver_config,
            n_folds=config.forecast.n_folds,
            types=types,
        )
        lambda1, lambda2 = select_best(scored)
        solver_config = replace(solver_config, lambda1=lambda1, lambda2=lambda2)
        tuning = {
            "validation_steps": validation_steps,
            "selected": [lambda1, lambda2],
            "scores": [{"lambda1": p[0], "lambda2": p[1], "score": s} for p, s in scored],
        }

    report = evaluate_methods(props, phats, solver_config, holdout_steps=holdout, types=types)

    writer = ArtifactWriter(config.output_dir, "forecast", config)
    writer.record_ingest(series.log, series.binned.excluded)
    writer.csv("forecast_rmse.csv", report.to_rows(), columns=["step", "method", "rmse"])
    writer.json(
        "forecast_summary.json",
        {
            "holdout_steps": holdout,
            "steps": list(report.steps),
            "methods": report.summary(),
            "restricted_types": types,
            "lambda1": solver_config.lambda1,
            "lambda2": solver_config.lambda2,
            "tuning": tuning,
            "unconverged_solves": report.unconverged,
        },
    )
    writer.count(periods=len(props), holdout_steps=holdout)
    writer.finish()

    print(f"✓ 留出 {holdout} 期的一步预测 RMSE:")
    for method, stats in report.summary().items():
        print(f"  {method:<20} 平均 {stats['mean']:.6g}  中位数 {stats['median']:.6g}")


@handle_cli_errors("stability")
def cmd_stability(args):
    """稳定性（Frobenius 差异）命令"""
    from triad_analyzer.markov import frobenius_diff_series
    from triad_analyzer.report_writer import ArtifactWriter
    from triad_analyzer.tvsolver import total_variation

    config = _prepare(args)
    series, triads = _network_and_triads(config)
    _require_transitions(triads)

    mats = triads.empirical
    frobenius = frobenius_diff_series(
        mats, labels=[series.labels[m.from_period] for m in mats[1:]]
    )
    tv = total_variation(mats)

    writer = ArtifactWriter(config.output_dir, "stability", config)
    writer.record_ingest(series.log, series.binned.excluded)
    writer.csv("frobenius.csv", frobenius.to_frame())
    writer.json(
        "total_variation.json",
        {"empirical": {"total": tv, "rate": tv / len(mats), "matrices": len(mats)}},
    )
    writer.count(values=len(frobenius))
    writer.finish()

    print(f"✓ Frobenius 差异序列 {len(frobenius)} 个值, 总变差 {tv:.6g}")


@handle_cli_errors("correlate")
def cmd_correlate(args):
    """稳定性与外生序列的相关分析命令"""
    from common.exceptions import InsufficientDataError
    from triad_analyzer.markov import frobenius_diff_series
    from triad_analyzer.pipeline import load_series
    from triad_analyzer.report_writer import ArtifactWriter
    from triad_analyzer.stats import ALIGNMENT_MODES, stability_vs_exogenous

    from config.validator import require_valid_config

    config = _prepare(args, require_events=False, require_series=True)
    series = None
    if config.inputs.stability_series:
        stability = load_series(config.inputs.stability_series, config)
    else:
        require_valid_config(config, require_events=True, require_series=True)
        series, triads = _network_and_triads(config)
        _require_transitions(triads)
        mats = triads.empirical
        stability = frobenius_diff_series(
            mats, labels=[series.labels[m.from_period] for m in mats[1:]]
        )
    exogenous = load_series(config.inputs.series, config)

    primary = config.stats.alignment
    reports = {
        primary: stability_vs_exogenous(
            stability, exogenous, mode=primary, invert=config.stats.invert, lags=config.stats.lags
        )
    }
    for mode in ALIGNMENT_MODES:
        if mode in reports or mode == "exact":
            continue
        try:
            reports[mode] = stability_vs_exogenous(
                stability, exogenous, mode=mode, invert=config.stats.invert, lags=config.stats.lags
            )
        except InsufficientDataError as e:
            reports[mode] = {"alignment": mode, "error": str(e)}

    writer = ArtifactWriter(config.output_dir, "correlate", config)
    if series is not None:
        writer.record_ingest(series.log, series.binned.excluded)
    writer.json("correlation_report.json", {"primary": primary, "reports": reports})
    writer.compare(
        "pearson_r", reports[primary]["pearson"]["r"], REFERENCE_PEARSON_R, f"alignment {primary}"
    )
    writer.count(pairs=reports[primary]["n_pairs"])
    writer.finish()

    result = reports[primary]
    print(f"✓ 对齐方式 {primary}: n={result['n_pairs']}")
    print(f"  Pearson r={result['pearson']['r']:.4f}, p={result['pearson']['p_value']:.3g}")
    print(f"  Granger 外生→稳定性 p(F)={result['granger_xy']['p_F']:.3g}")
    print(f"  Granger 稳定性→外生 p(F)={result['granger_yx']['p_F']:.3g}")


@handle_cli_errors("robustness")
def cmd_robustness(args):
    """不同周期长度下平均转移矩阵的稳健性比较"""
    from triad_analyzer.markov import average_transition
    from triad_analyzer.pipeline import build_network_series, compute_triad_series, load_events
    from triad_analyzer.report_writer import ArtifactWriter
    from triad_analyzer.stats import matrix_correlation

    config = _prepare(args)
    log = load_events(config)
    lengths = list(config.robustness.period_days)

    averages = []
    rows = []
    excluded = {}
    for days in lengths:
        series = build_network_series(config, log=log, period_days=days)
        excluded[str(days)] = series.binned.excluded
        triads = compute_triad_series(series, zero_row_policy=config.analysis.zero_row_policy)
        _require_transitions(triads)
        averages.append(average_transition(triads.empirical))
        rows.append(
            {"period_days": days, "periods": len(series.networks), "nodes": len(series.nodes)}
        )

    for row, average in zip(rows, averages):
        result = matrix_correlation(averages[0], average)
        row.update({"r": result.r, "p_value": result.p_value})

    writer = ArtifactWriter(config.output_dir, "robustness", config)
    writer.record_ingest(log, excluded)
    writer.json("robustness.json", {"reference_period_days": lengths[0], "results": rows})
    writer.count(lengths=len(lengths))
    writer.finish()

    print(f"✓ 以 {lengths[0]} 天为基准的平均转移矩阵相关:")
    for row in rows:
        print(f"  {row['period_days']:>4} 天: {row['periods']:>4} 期, r={row['r']:.4f}")


@handle_cli_errors("selftest")
def cmd_selftest(args):
    """内置组合学自检（无需输入文件）"""
    import numpy as np

    from triad_analyzer.synthetic import census_consistency_failures
    from triad_analyzer.triads import build_type_table, verify_type_table

    config = _prepare(args, require_events=False)
    table = build_type_table()
    failures = verify_type_table(table)
    failures += census_consistency_failures(np.random.default_rng(config.seed), table)

    print("三元组类型表自检:")
    print(f"  类型数: {table.n_types}")
    for model in ("classical", "clustering", "transitivity"):
        print(f"  {model:<13} 平衡类型: {int(table.balance_flags[model].sum())}")
    print(f"  合成网络普查核对（种子 {config.seed}）")

    if getattr(args, "out", None):
        from triad_analyzer.report_writer import ArtifactWriter

        writer = ArtifactWriter(config.output_dir, "selftest", config)
        writer.csv("type_table.csv", table.to_frame())
        writer.count(types=table.n_types, failures=len(failures))
        writer.finish()

    if failures:
        for failure in failures:
            print(f"✗ {failure}", file=sys.stderr)
        return EXIT_ANALYSIS_FAILURE

    print("✓ 全部检查通过")
    return EXIT_OK


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """所有子命令共享的参数"""
    parser.add_argument("--config", help="JSON 配置文件")
    parser.add_argument("--out", help="输出目录")
    parser.add_argument("--events", help="事件文件（date, source, target, weight）")
    parser.add_argument("--period-days", type=int, help="周期长度（天，默认 84）")
    parser.add_argument("--start-date", help="分期起始日期 YYYY-MM-DD")
    tail = parser.add_mutually_exclusive_group()
    tail.add_argument("--keep-tail", dest="keep_tail", action="store_true", default=None,
                      help="保留末尾不完整的周期")
    tail.add_argument("--drop-tail", dest="keep_tail", action="store_false",
                      help="丢弃末尾不完整的周期（默认）")
    parser.add_argument("--date-format", help="日期格式（strftime 格式或 auto）")
    parser.add_argument("--core-mode", type=_core_mode, help="union 或 fixed:FILE")
    parser.add_argument("--balance-model", choices=BALANCE_CHOICES, help="报告的平衡模型")
    parser.add_argument("--penalty-mode", choices=("matrix", "row-groups"), help="惩罚分组方式")
    parser.add_argument("--lambda1", type=float, help="L1 差分惩罚权重")
    parser.add_argument("--lambda2", type=float, help="分组 L2 差分惩罚权重")
    parser.add_argument("--max-iters", type=int, help="求解器最大迭代次数")
    parser.add_argument("--seed", type=int, help="随机种子")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="日志级别")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triaddynamics",
        description="带符号网络三元组动态分析",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  %(prog)s selftest                                        # 自检
  %(prog)s build-networks --events events.csv --out out    # 分期建网
  %(prog)s census --events events.csv --out out            # 三元组普查
  %(prog)s estimate --events events.csv --lambda1 0.5      # 时变估计
  %(prog)s correlate --events events.csv --series trade.csv
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    simple = {
        "build-networks": "分期构建带符号网络",
        "census": "三元组普查与平衡占比",
        "transitions": "经验转移矩阵与平稳分布",
        "estimate": "时变马尔可夫链估计",
        "stability": "相邻转移矩阵的 Frobenius 差异",
        "robustness": "不同周期长度的稳健性比较",
        "selftest": "三元组类型表自检",
    }
    for name, help_text in simple.items():
        _add_common_arguments(subparsers.add_parser(name, help=help_text))

    parser_forecast = subparsers.add_parser("forecast", help="一步预测方法比较")
    _add_common_arguments(parser_forecast)
    parser_forecast.add_argument("--holdout-steps", type=int, help="留出期数（默认 5）")
    parser_forecast.add_argument("--tune", action="store_true", help="前向交叉验证调参")
    parser_forecast.add_argument("--restrict-operative", action="store_true",
                                 help="RMSE 只计算主导类型")

    parser_correlate = subparsers.add_parser("correlate", help="稳定性与外生序列的相关分析")
    _add_common_arguments(parser_correlate)
    parser_correlate.add_argument("--series", help="外生序列文件（label, value）")
    parser_correlate.add_argument("--stability-series", help="已有的稳定性序列文件")
    parser_correlate.add_argument("--alignment", choices=("annualize", "interpolate", "exact"),
                                  help="序列对齐方式")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 如果没有指定命令，显示帮助
    if not args.command:
        parser.print_help()
        return EXIT_INPUT_ERROR

    # 执行对应命令
    commands = {
        "build-networks": cmd_build_networks,
        "census": cmd_census,
        "transitions": cmd_transitions,
        "estimate": cmd_estimate,
        "forecast": cmd_forecast,
        "stability": cmd_stability,
        "correlate": cmd_correlate,
        "robustness": cmd_robustness,
        "selftest": cmd_selftest,
    }

    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
