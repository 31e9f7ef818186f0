# -*- coding: utf-8 -*-
"""账本脚本

每行一条命令，'#' 之后为注释：

    prepare WEIGHT C_UP C_DOWN     制备一个世界（振幅为 Python 复数字面量）
    evolve                         对每个世界执行阶段1幺正作用
    decohere [analytic|mc M]       必要时先执行阶段1，再执行阶段2
    split [p1 p2]                  每个已退相干的世界按指针结果分裂（缺省用玻恩概率）
    merge                          合并不可区分的世界
    stats                          记录一次统计快照

开头的 prepare 命令块权重之和必须为1，之后每条命令执行完都检查总权重。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from app.measurement.pipeline import (
    OUTCOMES, StageState, branch_probabilities, outcome_state,
    stage0_prepare, stage1_premeasure, stage2_decohere, stage3_latent
)
from app.schemas.measurement import MeasurementConfig
from app.utils.errors import ScriptError, SequencingError, SimulationError
from app.utils.tools import make_rng
from app.worldledger.ledger import WEIGHT_TOL, LedgerStats, WorldLedger

logger = logging.getLogger(__name__)

COMMANDS = ('prepare', 'evolve', 'decohere', 'split', 'merge', 'stats')


def parse_script(text: str) -> List[Tuple[str, List[str]]]:
    """拆分为 (原始命令, 词列表)，忽略空行和注释"""
    commands = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            commands.append((line, line.split()))
    return commands


@dataclass
class ScriptResult:
    """脚本执行结果"""
    ledger: WorldLedger
    stats: LedgerStats
    snapshots: List[Dict[str, Any]] = field(default_factory=list)

    def to_json_dict(self) -> Dict[str, Any]:
        data = self.ledger.to_dict()
        data['snapshots'] = self.snapshots
        return data


class _ScriptRunner:

    def __init__(self, ledger: WorldLedger, rng: np.random.Generator):
        self.ledger = ledger
        self.rng = rng
        self.configs: Dict[str, MeasurementConfig] = {}
        self.snapshots: List[Dict[str, Any]] = []

    def _stage_state(self, world_id: str) -> StageState:
        world = self.ledger.get(world_id)
        if world.stage is None or world.stage == 4:
            raise SequencingError(f"世界 {world_id} 处于阶段{world.stage}，不能继续测量流程")
        return StageState.of(world.stage, world.state)

    def _config_for(self, world_id: str) -> MeasurementConfig:
        if world_id not in self.configs:
            raise ValueError(f"世界 {world_id} 不是由 prepare 制备的")
        return self.configs[world_id]

    def prepare(self, args: List[str]) -> None:
        if len(args) != 3:
            raise ValueError("用法: prepare WEIGHT C_UP C_DOWN")
        weight = float(args[0])
        c_up, c_down = complex(args[1]), complex(args[2])
        config = MeasurementConfig(c_up=c_up.real, c_up_im=c_up.imag,
                                   c_down=c_down.real, c_down_im=c_down.imag)
        state = stage0_prepare(config)
        world = self.ledger.add_world(state.rho, weight, stage=0)
        self.configs[world.id] = config

    def evolve(self, args: List[str]) -> None:
        if args:
            raise ValueError("evolve 不接受参数")
        for world in list(self.ledger.worlds):
            state = stage1_premeasure(self._stage_state(world.id))
            self.ledger.replace_state(world.id, state.rho, stage=1)

    def decohere(self, args: List[str]) -> None:
        if not args or args == ['analytic']:
            update: Dict[str, Any] = {'phase_mode': 'analytic'}
        elif len(args) == 2 and args[0] == 'mc':
            samples = int(args[1])
            if samples < 1:
                raise ValueError(f"蒙特卡洛样本数必须 ≥ 1: {samples}")
            update = {'phase_mode': 'monte_carlo', 'mc_samples': samples}
        else:
            raise ValueError("用法: decohere [analytic|mc M]")

        for world in list(self.ledger.worlds):
            if world.stage not in (0, 1):
                logger.debug(f"世界 {world.id} 处于阶段{world.stage}，跳过退相干")
                continue
            config = self._config_for(world.id).model_copy(update=update)
            state = self._stage_state(world.id)
            if state.stage == 0:
                state = stage1_premeasure(state)
            state = stage2_decohere(state, config, self.rng)
            self.ledger.replace_state(world.id, state.rho, stage=2)

    def split(self, args: List[str]) -> None:
        explicit = [float(p) for p in args]
        if explicit and len(explicit) != len(OUTCOMES):
            raise ValueError(f"split 需要 {len(OUTCOMES)} 个概率，实际为 {len(explicit)}")
        targets = [w.id for w in self.ledger.worlds if w.stage in (2, 3)]
        if not targets:
            logger.warning("没有已退相干的世界可以分裂")
        for world_id in targets:
            state = self._stage_state(world_id)
            if state.stage == 2:
                state = stage3_latent(state)
            probs = explicit or list(branch_probabilities(state))
            self.ledger.split(world_id, [(p, outcome_state(o)) for p, o in zip(probs, OUTCOMES)], stage=4)

    def merge(self, args: List[str]) -> None:
        if args:
            raise ValueError("merge 不接受参数")
        n_events = len(self.ledger.events)
        self.ledger.merge()
        for event in self.ledger.events[n_events:]:
            parents = [p for p in event['parents'] if p in self.configs]
            if parents:
                self.configs[event['child']] = self.configs[parents[0]]

    def stats(self, args: List[str], index: int) -> None:
        if args:
            raise ValueError("stats 不接受参数")
        snapshot = {'index': index, **self.ledger.stats().to_dict()}
        self.snapshots.append(snapshot)
        logger.info(f"账本统计: {snapshot}")


def run_script(text: str, seed: int = 0, merge_tol: Optional[float] = None, strong: bool = False,
               ledger: Optional[WorldLedger] = None) -> ScriptResult:
    """执行账本脚本

    参数:
        text: 脚本文本
        seed: 蒙特卡洛退相干所用随机数种子
        merge_tol: 世界合并阈值，缺省取全局配置
        strong: 是否允许不可区分子世界的分裂
        ledger: 在已有账本上继续执行（此时不允许 prepare）

    Raises:
        ScriptError: 任一命令失败或权重不变量被破坏，携带命令序号
    """
    ledger = ledger if ledger is not None else WorldLedger(merge_tol=merge_tol, strong=strong)
    runner = _ScriptRunner(ledger, make_rng(seed))
    preparing = not ledger.worlds
    last_prepare = -1

    commands = parse_script(text)
    for index, (line, tokens) in enumerate(commands):
        name, args = tokens[0], tokens[1:]
        try:
            if name not in COMMANDS:
                raise ValueError(f"未知命令 {name}")
            if name == 'prepare':
                if not preparing:
                    raise ValueError("prepare 只能出现在脚本开头且账本为空时")
                runner.prepare(args)
                last_prepare = index
                continue
            if preparing:
                preparing = False
                _check_prepared(ledger, last_prepare, commands)
            if name == 'stats':
                runner.stats(args, index)
            else:
                getattr(runner, name)(args)
            ledger.check_weights()
        except ScriptError:
            raise
        except (SimulationError, ValidationError, ValueError) as e:
            raise ScriptError(index, line, str(e)) from e
        logger.debug(f"脚本第{index}条命令完成: {line}，当前 {len(ledger.worlds)} 个世界")

    if preparing:
        _check_prepared(ledger, last_prepare, commands)
    result = ScriptResult(ledger=ledger, stats=ledger.stats(), snapshots=runner.snapshots)
    logger.info(f"脚本执行完成: {len(commands)} 条命令, {result.stats.n_splits} 次分裂, "
                f"{result.stats.n_merges} 次合并")
    return result


def _check_prepared(ledger: WorldLedger, last_prepare: int, commands: List[Tuple[str, List[str]]]) -> None:
    if last_prepare < 0:
        return
    total = ledger.total_weight
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ScriptError(last_prepare, commands[last_prepare][0], f"制备的世界权重之和必须为1，实际为 {total!r}")
