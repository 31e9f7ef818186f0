# -*- coding: utf-8 -*-
"""世界账本

带权重的世界集合：可观测坍缩时分裂，退相干使不同过去无法区分时合并。
事件按发生顺序记录，总权重始终为1。
"""

import math
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config.config_manager import config_manager
from app.qdm import DensityMatrix, mix, trace_distance, vn_entropy
from app.qdm.density_matrix import validate_weights
from app.utils.errors import SplitRejectedError, StateValidationError
from app.utils.tools import matrix_to_pairs

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class World:
    """单个世界：宏观态、权重以及（可选的）测量阶段"""
    id: str
    state: DensityMatrix
    weight: float
    stage: Optional[int] = None

    def __post_init__(self) -> None:
        if not isinstance(self.state, DensityMatrix):
            raise StateValidationError(f"世界 {self.id} 的态必须是密度矩阵")
        if not 0 < self.weight <= 1 + WEIGHT_TOL:
            raise StateValidationError(f"世界 {self.id} 的权重必须在 (0, 1] 内: {self.weight}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'weight': self.weight,
            'stage': self.stage,
            'entropy': vn_entropy(self.state),
            'rho': matrix_to_pairs(self.state.matrix),
        }


@dataclass(frozen=True)
class LedgerStats:
    n_worlds: int
    n_splits: int
    n_merges: int
    ensemble_entropy: float
    total_weight: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_worlds': self.n_worlds,
            'n_splits': self.n_splits,
            'n_merges': self.n_merges,
            'ensemble_entropy': self.ensemble_entropy,
            'total_weight': self.total_weight,
        }


class WorldLedger:
    """世界账本

    默认采用弱版本：只有子世界两两可区分（迹距离 > merge_tol）时才允许分裂；
    strong=True 时允许潜在坍缩产生不可区分的子世界。
    """

    def __init__(self, merge_tol: Optional[float] = None, strong: bool = False):
        self.merge_tol = config_manager.get_merge_tol() if merge_tol is None else float(merge_tol)
        if self.merge_tol < 0:
            raise StateValidationError(f"merge_tol 不能为负: {self.merge_tol}")
        self.strong = strong
        self.worlds: List[World] = []
        self.events: List[Dict[str, Any]] = []
        self._next_id = 0

    def _new_id(self) -> str:
        world_id = f"W{self._next_id}"
        self._next_id += 1
        return world_id

    def _log_event(self, event: Dict[str, Any]) -> None:
        event = {'seq': len(self.events), **event}
        self.events.append(event)
        logger.debug(f"账本事件: {event}")

    def add_world(self, state: DensityMatrix, weight: float, stage: Optional[int] = None) -> World:
        """加入一个世界（不检查总权重，由调用方在制备完成后检查）"""
        world = World(self._new_id(), state, float(weight), stage)
        self.worlds.append(world)
        self._log_event({'type': 'prepare', 'world': world.id, 'weight': world.weight})
        return world

    def get(self, world_id: str) -> World:
        return self.worlds[self._index_of(world_id)]

    def replace_state(self, world_id: str, state: DensityMatrix, stage: Optional[int] = None) -> World:
        """替换世界的态（幺正演化、退相干等不改变权重的操作）"""
        index = self._index_of(world_id)
        old = self.worlds[index]
        world = World(old.id, state, old.weight, stage)
        self.worlds[index] = world
        return world

    def _index_of(self, world_id: str) -> int:
        for index, world in enumerate(self.worlds):
            if world.id == world_id:
                return index
        raise StateValidationError(f"世界不存在: {world_id}")

    @property
    def total_weight(self) -> float:
        return math.fsum(w.weight for w in self.worlds)

    def check_weights(self) -> None:
        """总权重为1（空账本除外）

        Raises:
            StateValidationError: 总权重偏离1超过容差
        """
        if self.worlds and abs(self.total_weight - 1.0) > WEIGHT_TOL:
            raise StateValidationError(f"总权重必须为1，实际为 {self.total_weight!r}")

    def split(self, world_id: str, outcomes: Sequence[Tuple[float, DensityMatrix]],
              strong: Optional[bool] = None, stage: Optional[int] = None) -> List[World]:
        """把一个世界分裂为若干子世界，子世界权重为 父权重 × 概率

        Raises:
            SplitRejectedError: 概率退化或不归一，或弱版本下子世界不可区分
        """
        strong = self.strong if strong is None else strong
        index = self._index_of(world_id)
        parent = self.worlds[index]
        probs = [float(p) for p, _ in outcomes]
        states = [s for _, s in outcomes]
        if len(outcomes) < 2:
            raise SplitRejectedError(f"世界 {world_id} 至少要分裂为两个子世界")
        try:
            validate_weights(probs)
        except StateValidationError as e:
            raise SplitRejectedError(f"世界 {world_id} 的分裂概率无效: {str(e)}") from e
        if any(s.dim != parent.state.dim for s in states):
            raise SplitRejectedError(f"世界 {world_id} 的子世界维数与父世界不一致")

        if not strong:
            for i in range(len(states)):
                for j in range(i + 1, len(states)):
                    distance = trace_distance(states[i], states[j])
                    if distance <= self.merge_tol:
                        raise SplitRejectedError(
                            f"世界 {world_id} 的子世界 {i} 与 {j} 不可区分（迹距离 {distance:.3e}），弱版本不允许分裂")

        children = [World(self._new_id(), s, parent.weight * p, stage) for p, s in zip(probs, states)]
        self.worlds[index:index + 1] = children
        self._log_event({'type': 'split', 'parent': parent.id,
                         'children': [c.id for c in children], 'probs': probs})
        self.check_weights()
        logger.info(f"世界 {parent.id} 分裂为 {', '.join(c.id for c in children)}")
        return children

    def _merge_pass(self) -> int:
        assigned = [False] * len(self.worlds)
        merged: List[World] = []
        n_merges = 0
        for i, world in enumerate(self.worlds):
            if assigned[i]:
                continue
            assigned[i] = True
            group = [world]
            for j in range(i + 1, len(self.worlds)):
                if not assigned[j] and trace_distance(world.state, self.worlds[j].state) <= self.merge_tol:
                    assigned[j] = True
                    group.append(self.worlds[j])
            if len(group) == 1:
                merged.append(world)
                continue

            weight = math.fsum(w.weight for w in group)
            state = mix([(w.weight / weight, w.state) for w in group])
            stages = {w.stage for w in group}
            child = World(self._new_id(), state, min(weight, 1.0),
                          stages.pop() if len(stages) == 1 else None)
            merged.append(child)
            n_merges += 1
            self._log_event({'type': 'merge', 'parents': [w.id for w in group],
                             'child': child.id, 'weight': child.weight})
            logger.info(f"世界 {', '.join(w.id for w in group)} 合并为 {child.id}")
        self.worlds = merged
        return n_merges

    def merge(self) -> int:
        """合并迹距离不超过 merge_tol 的世界，重复直到没有可合并的世界

        返回:
            int: 本次产生的合并事件数
        """
        total = 0
        while True:
            n = self._merge_pass()
            total += n
            if n == 0:
                break
        self.check_weights()
        return total

    def ensemble_state(self) -> Optional[DensityMatrix]:
        """Σ weight·state（按总权重归一）"""
        if not self.worlds:
            return None
        total = self.total_weight
        rho = sum((w.weight / total * np.asarray(w.state.matrix) for w in self.worlds),
                  np.zeros_like(self.worlds[0].state.matrix))
        return DensityMatrix(rho)

    def stats(self) -> LedgerStats:
        ensemble = self.ensemble_state()
        return LedgerStats(
            n_worlds=len(self.worlds),
            n_splits=sum(1 for e in self.events if e['type'] == 'split'),
            n_merges=sum(1 for e in self.events if e['type'] == 'merge'),
            ensemble_entropy=vn_entropy(ensemble) if ensemble is not None else 0.0,
            total_weight=self.total_weight,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'merge_tol': self.merge_tol,
            'strong': self.strong,
            'worlds': [w.to_dict() for w in self.worlds],
            'events': list(self.events),
            'stats': self.stats().to_dict(),
        }


def ledger_stats(ledger: WorldLedger) -> LedgerStats:
    """账本统计：世界数、分裂数、合并数与系综熵"""
    return ledger.stats()
