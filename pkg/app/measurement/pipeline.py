# -*- coding: utf-8 -*-
"""五阶段测量流程

系统（|↑⟩, |↓⟩）与仪器指针（a0, a↑, a↓）构成 6 维空间，基矢序号为 3·s + a：
    阶段0 制备：Ψ0 = c↑|↑⟩|a0⟩ + c↓|↓⟩|a0⟩
    阶段1 预测量：条件指针置换，Ψ1 = c↑|↑⟩|a↑⟩ + c↓|↓⟩|a↓⟩
    阶段2 退相干：分支间相位失去关联，非对角块消失
    阶段3 潜在坍缩：密度矩阵不变，结果未知
    阶段4 可观测坍缩：按玻恩规则抽样得到宏观结果
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.config.config_manager import config_manager
from app.qdm import DensityMatrix, PureState, from_pure, vn_entropy
from app.schemas.measurement import MeasurementConfig
from app.utils.errors import SequencingError, StateValidationError
from app.utils.tools import make_rng, matrix_to_pairs

logger = logging.getLogger(__name__)

SYSTEM_DIM = 2
POINTER_DIM = 3
DIM = SYSTEM_DIM * POINTER_DIM

UP, DOWN = 0, 1
A0, A_UP, A_DOWN = 0, 1, 2
OUTCOMES = ('up', 'down')


def basis_index(spin: int, pointer: int) -> int:
    """|spin⟩|pointer⟩ 的基矢序号"""
    return POINTER_DIM * spin + pointer


def premeasurement_unitary() -> np.ndarray:
    """条件指针置换：|↑⟩ 分支交换 a0↔a↑，|↓⟩ 分支交换 a0↔a↓，其余指针态不动

    该置换是对合，U² = I
    """
    u = np.zeros((DIM, DIM), dtype=complex)
    swaps = {UP: (A0, A_UP), DOWN: (A0, A_DOWN)}
    for spin, (a, b) in swaps.items():
        for pointer in range(POINTER_DIM):
            target = b if pointer == a else a if pointer == b else pointer
            u[basis_index(spin, target), basis_index(spin, pointer)] = 1.0
    return u


def _branch_mask() -> np.ndarray:
    """↑ 与 ↓ 分支之间的非对角块掩码"""
    spins = np.arange(DIM) // POINTER_DIM
    return spins[:, None] != spins[None, :]


@dataclass(frozen=True, eq=False)
class StageState:
    """某一阶段的态、熵与（仅阶段4的）结果"""
    stage: int
    rho: DensityMatrix
    entropy: float
    outcome: Optional[str] = None

    def __post_init__(self) -> None:
        if self.stage not in range(5):
            raise StateValidationError(f"阶段序号必须在 0..4: {self.stage}")
        if (self.outcome is not None) != (self.stage == 4):
            raise StateValidationError("只有阶段4带有测量结果")
        if self.outcome is not None and self.outcome not in OUTCOMES:
            raise StateValidationError(f"未知的测量结果: {self.outcome}")

    @classmethod
    def of(cls, stage: int, rho: DensityMatrix, outcome: Optional[str] = None) -> 'StageState':
        return cls(stage, rho, vn_entropy(rho), outcome)

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            'stage': self.stage,
            'entropy': self.entropy,
            'rho': matrix_to_pairs(self.rho.matrix),
        }
        if self.outcome is not None:
            data['outcome'] = self.outcome
        return data


def _require_stage(state: StageState, expected: int) -> None:
    if state.stage != expected:
        raise SequencingError(f"需要阶段{expected}的输入，实际为阶段{state.stage}")


def stage0_prepare(config: MeasurementConfig, flip_sign: bool = False) -> StageState:
    """阶段0：制备叠加态，熵为0

    参数:
        flip_sign: 为 True 时制备 Ψ0′ = c↑|↑⟩|a0⟩ − c↓|↓⟩|a0⟩
    """
    amp_up, amp_down = config.amp_up, config.amp_down
    if amp_up == 0 or amp_down == 0:
        raise StateValidationError("c_up 与 c_down 都不能为0")
    psi = np.zeros(DIM, dtype=complex)
    psi[basis_index(UP, A0)] = amp_up
    psi[basis_index(DOWN, A0)] = -amp_down if flip_sign else amp_down
    return StageState.of(0, from_pure(PureState(psi)))


def stage1_premeasure(state: StageState) -> StageState:
    """阶段1：系统与仪器的幺正相互作用，熵不变"""
    _require_stage(state, 0)
    u = premeasurement_unitary()
    return StageState.of(1, DensityMatrix(u @ state.rho.matrix @ u.conj().T))


def stage2_decohere(state: StageState, config: MeasurementConfig,
                    rng: Optional[np.random.Generator] = None) -> StageState:
    """阶段2：退相干

    analytic 模式直接把 ↑/↓ 分支间的非对角块置零；monte_carlo 模式对 M 个
    独立均匀相位 θ ∈ [0, 2π) 的样本 Θ = e^{iθ} 取平均

    Raises:
        StateValidationError: monte_carlo 模式下 M < 1
    """
    _require_stage(state, 1)
    rho = np.array(state.rho.matrix)
    mask = _branch_mask()

    if config.phase_mode == 'analytic':
        rho[mask] = 0.0
    else:
        samples = config.mc_samples
        if samples < 1:
            raise StateValidationError(f"蒙特卡洛样本数必须 ≥ 1: {samples}")
        rng = rng if rng is not None else make_rng(config.seed)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=(samples, SYSTEM_DIM))
        phases = np.exp(1j * theta)
        # 每个样本 Θ_s 作用在分支 s 上，ρ_{s s'} 乘以 ⟨Θ_s Θ_{s'}*⟩
        correlation = phases.T @ phases.conj() / samples
        spins = np.arange(DIM) // POINTER_DIM
        rho = rho * correlation[spins[:, None], spins[None, :]]
        logger.debug(f"蒙特卡洛退相干: M={samples}, 残余相关 {abs(correlation[UP, DOWN]):.3e}")

    return StageState.of(2, DensityMatrix(rho))


def stage3_latent(state: StageState) -> StageState:
    """阶段3：潜在坍缩，ρ3 = ρ2，熵不变，结果不可见"""
    _require_stage(state, 2)
    return StageState(3, state.rho, state.entropy)


def branch_probabilities(state: StageState) -> Tuple[float, float]:
    """读取 |↑a↑⟩ 与 |↓a↓⟩ 上的布居并归一"""
    populations = state.rho.populations()
    p_up = max(float(populations[basis_index(UP, A_UP)]), 0.0)
    p_down = max(float(populations[basis_index(DOWN, A_DOWN)]), 0.0)
    total = p_up + p_down
    if total <= 0:
        raise StateValidationError("指针分支上没有布居")
    return p_up / total, p_down / total


def outcome_state(outcome: str) -> DensityMatrix:
    """测量结果对应的纯投影态"""
    index = basis_index(UP, A_UP) if outcome == 'up' else basis_index(DOWN, A_DOWN)
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[index, index] = 1.0
    return DensityMatrix(rho)


def stage4_observe(state: StageState, config: MeasurementConfig,
                   rng: Optional[np.random.Generator] = None) -> StageState:
    """阶段4：可观测坍缩，按玻恩规则抽样，熵降为0"""
    _require_stage(state, 3)
    rng = rng if rng is not None else make_rng(config.seed)
    p_up, _ = branch_probabilities(state)
    outcome = 'up' if rng.random() < p_up else 'down'
    logger.debug(f"阶段4观测结果: {outcome} (p↑={p_up:.6f})")
    return StageState(4, outcome_state(outcome), 0.0, outcome)


def observe_repeated(state: StageState, n: int, rng: np.random.Generator) -> List[str]:
    """对同一个阶段3的态重复 n 次可观测坍缩"""
    _require_stage(state, 3)
    if n < 0:
        raise StateValidationError(f"重复次数不能为负: {n}")
    p_up, _ = branch_probabilities(state)
    draws = rng.random(n)
    return ['up' if u < p_up else 'down' for u in draws]


def born_frequencies(outcomes: List[str]) -> Dict[str, float]:
    """结果频率"""
    n = len(outcomes)
    if n == 0:
        return {key: 0.0 for key in OUTCOMES}
    return {key: outcomes.count(key) / n for key in OUTCOMES}


@dataclass(frozen=True)
class EnergyBudget:
    """可观测坍缩的热力学能量预算"""
    required_entropy_dump: float
    required_energy: float
    detectable: bool
    transfer_sufficient: bool
    amplified: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            'required_entropy_dump': self.required_entropy_dump,
            'required_energy': self.required_energy,
            'detectable': self.detectable,
            'transfer_sufficient': self.transfer_sufficient,
            'amplified': self.amplified,
        }


def energy_budget_check(config: MeasurementConfig, ratio: Optional[float] = None) -> EnergyBudget:
    """能量预算检查

    仪器至少要吸收 ΔS_a ≥ S3 = S2 的熵，对应能量 T_a·ΔS_a；
    ΔE1 ≥ R·T_a/2 时认为效应高于热噪声可被探测

    Raises:
        StateValidationError: T_a ≤ 0
    """
    if not config.T_a > 0:
        raise StateValidationError(f"仪器温度必须为正: {config.T_a}")
    if ratio is None:
        ratio = config.detectability_ratio or config_manager.get_detectability_ratio()
    entropy_dump = config.branch_entropy()
    required_energy = config.T_a * entropy_dump
    return EnergyBudget(
        required_entropy_dump=entropy_dump,
        required_energy=required_energy,
        detectable=config.delta_E1 >= ratio * config.T_a / 2.0,
        transfer_sufficient=config.delta_E1 >= required_energy,
        amplified=config.delta_E2 > config.delta_E1,
    )


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """一次完整测量流程的记录

    outcomes 依次为阶段4的结果和之后的重复观测结果
    """
    stages: Tuple[StageState, ...]
    config: MeasurementConfig
    outcomes: Tuple[str, ...] = field(default=())
    born_frequencies: Optional[Dict[str, float]] = None

    def __post_init__(self) -> None:
        if [s.stage for s in self.stages] != list(range(5)):
            raise StateValidationError("记录必须按顺序包含阶段 0..4")

    @property
    def entropy_profile(self) -> Tuple[float, ...]:
        return tuple(s.entropy for s in self.stages)

    @property
    def outcome(self) -> str:
        return self.stages[4].outcome or ''

    def to_json_dict(self, entropy_scale: float = 1.0) -> Dict[str, object]:
        stages = []
        for s in self.stages:
            item = s.to_dict()
            item['entropy'] = entropy_scale * s.entropy
            stages.append(item)
        data: Dict[str, object] = {'config': self.config.model_dump(), 'stages': stages}
        if self.born_frequencies is not None:
            data['frequencies'] = self.born_frequencies
        return data

    def csv_rows(self, entropy_scale: float = 1.0) -> List[Tuple[int, str, float]]:
        """CSV 汇总行: run_id, outcome, S2"""
        s2 = entropy_scale * self.stages[2].entropy
        return [(i, outcome, s2) for i, outcome in enumerate(self.outcomes or (self.outcome,))]


def run_pipeline(config: MeasurementConfig, rng: Optional[np.random.Generator] = None) -> MeasurementRecord:
    """依次执行阶段0..4

    随机数使用顺序：阶段2的随机相位（仅 monte_carlo）、阶段4的一次抽样、
    其余 repetitions-1 次重复观测
    """
    rng = rng if rng is not None else make_rng(config.seed)
    s0 = stage0_prepare(config)
    s1 = stage1_premeasure(s0)
    s2 = stage2_decohere(s1, config, rng)
    s3 = stage3_latent(s2)
    s4 = stage4_observe(s3, config, rng)

    outcomes = [s4.outcome or '']
    frequencies = None
    if config.repetitions > 1:
        outcomes += observe_repeated(s3, config.repetitions - 1, rng)
        frequencies = born_frequencies(outcomes)

    logger.info(f"测量流程完成: S2={s2.entropy:.6f}, 结果 {outcomes[0]}, 重复 {len(outcomes)} 次")
    return MeasurementRecord((s0, s1, s2, s3, s4), config, tuple(outcomes), frequencies)
