# -*- coding: utf-8 -*-
"""批处理运行器

按子命令分派到各实验模块，写出 CSV/JSON 产物与运行摘要，并把异常映射为退出码：
1 用法错误，2 配置错误，3 数值错误，4 不变量被破坏
"""

import math
import time
import logging
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from app.config.config_manager import config_manager
from app.cptest import (
    VIOLATION_CSV_HEADER, build_full_hamiltonian, cp_check, cpt_check, kaon_model_from_phases,
    symmetry_maps, violation_scan
)
from app.dynamics import (
    amplitude_damping_model, dephasing_model, evolve_lindblad, unitary_model
)
from app.measurement import energy_budget_check, run_pipeline
from app.phasemix import growth_slope, retrodiction_demo, run_mixing, single_cell
from app.qdm import PureState, from_pure, purity
from app.schemas import (
    KaonConfig, LedgerConfig, LindbladConfig, MeasurementConfig, MixingConfig, RunConfig, RunSummary
)
from app.utils.errors import ConfigError, SimulationError
from app.utils.tools import (
    matrix_to_pairs, open_output, render_csv, render_json, setup_logging
)
from app.worldledger import run_script
from app.cli.loader import load_config, parse_args

logger = logging.getLogger(__name__)

Artifact = Tuple[str, Dict[str, Any]]


def _metric(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


def run_measure(run: RunConfig, config: MeasurementConfig) -> Artifact:
    """测量流程：CSV 为 run_id, outcome, S2；JSON 为完整记录"""
    config = config.model_copy(update={'seed': run.seed})
    scale = config_manager.get_boltzmann()
    record = run_pipeline(config)
    budget = energy_budget_check(config)

    if run.format == 'json':
        data = record.to_json_dict(scale)
        data['energy_budget'] = budget.to_dict()
        text = render_json(data)
    else:
        text = render_csv(['run_id', 'outcome', 'S2'], record.csv_rows(scale))

    metrics = {
        'S2': scale * record.stages[2].entropy,
        'outcome': record.outcome,
        'repetitions': len(record.outcomes),
        'detectable': budget.detectable,
    }
    return text, metrics


def run_lindblad(run: RunConfig, config: LindbladConfig) -> Artifact:
    """Lindblad 演化轨迹"""
    builders: Dict[str, Callable[[], Any]] = {
        'dephasing': lambda: dephasing_model(config.gamma, config.dim, config.omega),
        'amplitude_damping': lambda: amplitude_damping_model(config.gamma, config.dim, config.omega),
        'unitary': lambda: unitary_model(config.dim, config.omega),
    }
    model = builders[config.model]()
    psi = PureState.normalized(config.psi or np.ones(config.dim))
    t_grid = np.linspace(0.0, config.t_end, config.n_steps + 1)
    trajectory = evolve_lindblad(model, from_pure(psi), t_grid, config.dt_max)
    scale = config_manager.get_boltzmann()

    if run.format == 'json':
        text = render_json({
            'config': config.model_dump(),
            'times': list(trajectory.times),
            'entropies': [scale * s for s in trajectory.entropies],
            'states': [matrix_to_pairs(s.matrix) for s in trajectory.states],
        })
    else:
        text = trajectory.to_csv(scale)

    final = trajectory.final
    metrics = {
        'final_entropy': scale * trajectory.entropies[-1],
        'final_purity': purity(final),
        'trace_drift': abs(float(np.trace(final.matrix).real) - 1.0),
        'n_points': len(trajectory),
    }
    return text, metrics


def run_kaon(run: RunConfig, config: KaonConfig) -> Artifact:
    """Λ 扫描：微扰结果与精确投影结果逐 (β, ε) 比较"""
    model = kaon_model_from_phases(
        config.n_f, config.n_E, config.m0, config.E_f, config.g, config.phi_f, config.h_int,
        config.epsilon, delta=config.delta, h_ff=config.h_ff, E_env=config.E_env,
    )
    h_u = build_full_hamiltonian(model)
    maps = symmetry_maps(model)
    cp_ok, cpt_ok = cp_check(h_u, maps), cpt_check(h_u, maps)
    logger.info(f"H_U 对称性: CP {'守恒' if cp_ok else '破坏'}, CPT {'守恒' if cpt_ok else '破坏'}")
    reports = violation_scan(model, config.beta_list(), config.epsilon_list())

    if run.format == 'json':
        text = render_json({
            'config': config.model_dump(),
            'delta': model.delta,
            'cp_preserving': cp_ok,
            'cpt_preserving': cpt_ok,
            'reports': [r.to_dict() for r in reports],
        })
    else:
        text = render_csv(VIOLATION_CSV_HEADER, [r.csv_row() for r in reports])

    ratios = [r.ratio for r in reports if math.isfinite(r.ratio)]
    metrics = {
        'cp_preserving': cp_ok,
        'cpt_preserving': cpt_ok,
        'max_abs_lambda_pert': max((abs(r.lambda_pert) for r in reports), default=0.0),
        'max_abs_lambda_oracle': max((abs(r.lambda_oracle) for r in reports), default=0.0),
        'min_ratio': _metric(min(ratios)) if ratios else None,
    }
    return text, metrics


def run_mix(run: RunConfig, config: MixingConfig) -> Artifact:
    """面包师变换混合；给出第二个初始格点时附带全变差距离序列"""
    initial = single_cell(config.N, config.x0, config.y0)
    tv_series = None
    report = None
    if config.has_second_start:
        report = retrodiction_demo(initial, single_cell(config.N, config.x1, config.y1),
                                   config.steps, config.block, config.coarsen_every)
        mixing = report.run_a
        tv_series = list(report.tv_series)
    else:
        mixing = run_mixing(initial, config.steps, config.block, config.coarsen_every)
    scale = config_manager.get_boltzmann()

    if run.format == 'json':
        steps = []
        for step, (s, support) in enumerate(zip(mixing.entropy_series, mixing.support_series)):
            item: Dict[str, Any] = {'step': step, 'entropy': scale * s, 'support': support}
            if tv_series is not None:
                item['tv_distance'] = tv_series[step]
            steps.append(item)
        data: Dict[str, Any] = {'config': config.model_dump(), 'steps': steps}
        if report is not None:
            data['retrodiction'] = report.to_dict()
        text = render_json(data)
    else:
        text = mixing.to_csv(tv_series, scale)

    metrics: Dict[str, Any] = {
        'final_entropy': scale * mixing.entropy_series[-1],
        'max_entropy': scale * math.log(config.N ** 2),
        'steps_to_95': mixing.first_step_reaching(0.95),
        'slope': growth_slope(mixing, 1, 5) if config.steps >= 5 else None,
    }
    if report is not None:
        metrics['initial_tv'] = report.initial_distance
        metrics['final_tv'] = report.final_distance
    return text, metrics


def run_ledger(run: RunConfig, config: LedgerConfig) -> Artifact:
    """世界账本脚本：JSON 为事件日志，CSV 为最终世界列表"""
    try:
        with open(config.script, 'r', encoding='utf-8') as f:
            script = f.read()
    except OSError as e:
        raise ConfigError(f"无法读取脚本 {config.script}: {str(e)}", key='script') from e

    result = run_script(script, seed=run.seed, merge_tol=config.merge_tol, strong=config.strong)
    if run.format == 'json':
        text = render_json(result.to_json_dict())
    else:
        rows = [(w.id, w.weight, '' if w.stage is None else w.stage, w.to_dict()['entropy'])
                for w in result.ledger.worlds]
        text = render_csv(['id', 'weight', 'stage', 'entropy'], rows)

    metrics = {key: value for key, value in result.stats.to_dict().items()}
    return text, metrics


RUNNERS: Dict[str, Callable[[RunConfig, Any], Artifact]] = {
    'measure': run_measure,
    'lindblad': run_lindblad,
    'kaon': run_kaon,
    'mix': run_mix,
    'ledger': run_ledger,
}


def summary_target(run: RunConfig) -> Optional[str]:
    """摘要路径：显式给出时使用之，否则输出到文件时为 <out>.summary.json"""
    if run.summary_path:
        return run.summary_path
    if run.out_path:
        return f"{run.out_path}.summary.json"
    return None


def execute(run: RunConfig) -> RunSummary:
    """执行一次运行并写出产物

    Raises:
        SimulationError: 各模块的错误，携带退出码
    """
    started = time.perf_counter()
    config = load_config(run.config_path, run.command)
    logger.info(f"开始运行 {run.command}: 配置 {run.config_path}, 种子 {run.seed}")

    text, metrics = RUNNERS[run.command](run, config)
    with open_output(run.out_path) as out:
        out.write(text)
        out.flush()

    summary = RunSummary(
        command=run.command,
        seed=run.seed,
        wall_time=time.perf_counter() - started,
        key_metrics={k: _summary_value(v) for k, v in metrics.items()},
    )
    target = summary_target(run)
    if target:
        with open_output(target) as f:
            f.write(render_json(summary.model_dump()))
        logger.info(f"运行摘要已写入: {target}")
    else:
        logger.info(f"运行摘要: {summary.model_dump()}")
    return summary


def _summary_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _metric(float(value))
    return value


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口，返回退出码"""
    try:
        run = parse_args(argv)
    except SimulationError as e:
        setup_logging(log_file='')
        logger.error(f"命令行参数错误: {str(e)}")
        return e.exit_code

    setup_logging(run.log_level)
    try:
        execute(run)
    except SimulationError as e:
        logger.error(f"{run.command} 运行失败 ({type(e).__name__}): {str(e)}")
        return e.exit_code
    return 0
