# -*- coding: utf-8 -*-
"""密度矩阵演化模块

冯·诺依曼方程的精确幺正演化、Lindblad 方程的四阶定步长积分、
环境退相干（整体幺正演化后对环境求偏迹）以及坍缩时间估计 τ = ħ/ΔE
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from app.config.config_manager import config_manager
from app.qdm import (
    DensityMatrix, PureState, SpaceLayout, from_pure, partial_trace, vn_entropy
)
from app.qdm.operators import SIGMA_X, SIGMA_Z
from app.utils.errors import IntegrationError, StateValidationError
from app.dynamics.trajectory import Trajectory

logger = logging.getLogger(__name__)


def _check_hermitian(matrix: np.ndarray, name: str = 'H') -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateValidationError(f"{name} 必须是方阵，实际形状 {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StateValidationError(f"{name} 包含 NaN 或 Inf")
    deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if deviation > config_manager.get_tolerance('hermitian_tol'):
        raise StateValidationError(f"{name} 不是厄米矩阵 (偏差 {deviation:.3e})")
    return m


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Lindblad 模型：哈密顿量 H 与 Lindblad 算符列表 L_j"""
    hamiltonian: np.ndarray
    lindblad_ops: Tuple[np.ndarray, ...] = ()

    def __post_init__(self) -> None:
        h = _check_hermitian(self.hamiltonian)
        ops = tuple(np.array(op, dtype=complex) for op in self.lindblad_ops)
        for j, op in enumerate(ops):
            if op.shape != h.shape:
                raise StateValidationError(f"L_{j} 形状 {op.shape} 与 H {h.shape} 不符")
            if not np.all(np.isfinite(op)):
                raise StateValidationError(f"L_{j} 包含 NaN 或 Inf")
            op.setflags(write=False)
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(self, 'hamiltonian', h)
        object.__setattr__(self, 'lindblad_ops', ops)

    @property
    def dim(self) -> int:
        return int(self.hamiltonian.shape[0])


def unitary_propagator(hamiltonian: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """U = exp(-iHt/ħ)，通过厄米本征分解计算"""
    h = _check_hermitian(hamiltonian)
    w, v = linalg.eigh(h)
    return (v * np.exp(-1j * w * t / hbar)) @ v.conj().T


def evolve_von_neumann(rho0: DensityMatrix, hamiltonian: np.ndarray, t: float,
                       hbar: Optional[float] = None) -> DensityMatrix:
    """冯·诺依曼演化 ρ(t) = U ρ0 U†，t 可为负（向后演化）

    Raises:
        StateValidationError: H 非厄米或维数不符
    """
    hbar = config_manager.get_hbar() if hbar is None else hbar
    u = unitary_propagator(hamiltonian, t, hbar)
    if u.shape != rho0.matrix.shape:
        raise StateValidationError(f"H 维数 {u.shape} 与 ρ 维数 {rho0.matrix.shape} 不符")
    return DensityMatrix(u @ rho0.matrix @ u.conj().T, tol=rho0.tol)


class _Generator:
    """预计算的 Lindblad 生成元 dρ/dt = -i[H,ρ]/ħ - ½Σ(L†Lρ + ρL†L - 2LρL†)"""

    def __init__(self, model: LindbladModel, hbar: float):
        self.h = np.asarray(model.hamiltonian)
        self.ops = [np.asarray(op) for op in model.lindblad_ops]
        self.ops_dag = [op.conj().T for op in self.ops]
        self.dissipation = sum((d @ op for op, d in zip(self.ops, self.ops_dag)),
                               np.zeros_like(self.h))
        self.hbar = hbar

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        drho = -1j * (self.h @ rho - rho @ self.h)
        if self.ops:
            drho -= 0.5 * (self.dissipation @ rho + rho @ self.dissipation)
            for op, op_dag in zip(self.ops, self.ops_dag):
                drho += op @ rho @ op_dag
        # iħ∂ρ/∂t 形式：整个右端除以 ħ
        return drho / self.hbar

    def rk4_step(self, rho: np.ndarray, dt: float) -> np.ndarray:
        k1 = self(rho)
        k2 = self(rho + 0.5 * dt * k1)
        k3 = self(rho + 0.5 * dt * k2)
        k4 = self(rho + dt * k3)
        return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def lindblad_rhs(model: LindbladModel, rho: DensityMatrix, hbar: Optional[float] = None) -> np.ndarray:
    """Lindblad 方程右端 dρ/dt（结果无迹）

    Raises:
        StateValidationError: 维数不符
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != model.hamiltonian.shape:
        raise StateValidationError(f"ρ 维数 {m.shape} 与模型维数 {model.hamiltonian.shape} 不符")
    hbar = config_manager.get_hbar() if hbar is None else hbar
    return _Generator(model, hbar)(np.asarray(m))


def evolve_lindblad(model: LindbladModel, rho0: DensityMatrix, t_grid: Sequence[float],
                    dt_max: float, hbar: Optional[float] = None) -> Trajectory:
    """四阶 Runge-Kutta 定步长积分 Lindblad 方程

    参数:
        model: Lindblad 模型
        rho0: t_grid[0] 时刻的初态
        t_grid: 严格递增的记录时刻
        dt_max: 最大步长

    返回:
        Trajectory: 每个记录时刻的态与熵

    Raises:
        IntegrationError: 出现超出容差的负本征值或迹漂移，应减小 dt_max
    """
    times = [float(t) for t in t_grid]
    if not times:
        raise StateValidationError("t_grid 不能为空")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise StateValidationError("t_grid 必须严格递增")
    if not dt_max > 0:
        raise StateValidationError(f"dt_max 必须为正: {dt_max}")
    if rho0.dim != model.dim:
        raise StateValidationError(f"初态维数 {rho0.dim} 与模型维数 {model.dim} 不符")

    hbar = config_manager.get_hbar() if hbar is None else hbar
    positivity_tol = config_manager.get_tolerance('positivity_abort_tol')
    drift_rate = config_manager.get_tolerance('trace_drift_per_time')
    generator = _Generator(model, hbar)

    rho = np.array(rho0.matrix, dtype=complex)
    states: List[DensityMatrix] = [DensityMatrix(rho, tol=positivity_tol)]
    n_steps = 0

    for t_prev, t_next in zip(times, times[1:]):
        n_sub = max(1, math.ceil((t_next - t_prev) / dt_max - 1e-12))
        dt = (t_next - t_prev) / n_sub
        for k in range(n_sub):
            rho = generator.rk4_step(rho, dt)
            n_steps += 1
            min_eig = float(linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
            if min_eig < -positivity_tol:
                elapsed = t_prev + (k + 1) * dt
                raise IntegrationError(
                    f"t={elapsed:.6g} 时出现负本征值 {min_eig:.3e}，请减小 dt_max（当前 {dt_max}）")

        elapsed = t_next - times[0]
        trace_drift = abs(float(np.trace(rho).real) - 1.0)
        if trace_drift > drift_rate * max(1.0, elapsed):
            raise IntegrationError(f"t={t_next:.6g} 时迹漂移 {trace_drift:.3e} 超出容差，请减小 dt_max")
        states.append(DensityMatrix(rho, tol=positivity_tol))

    logger.debug(f"Lindblad 积分完成: 维数 {model.dim}, {n_steps} 步, {len(model.lindblad_ops)} 个耗散算符")
    return Trajectory(times, states)


def dp_collapse_time(delta_E: float, hbar: Optional[float] = None) -> float:
    """坍缩时间估计 τ = ħ/ΔE

    Raises:
        StateValidationError: ΔE ≤ 0
    """
    hbar = config_manager.get_hbar() if hbar is None else hbar
    if not delta_E > 0:
        raise StateValidationError(f"ΔE 必须为正: {delta_E}")
    return hbar / delta_E


@dataclass(frozen=True)
class EnvironmentalReport:
    """环境退相干结果"""
    rho_system: DensityMatrix
    system_entropy: float
    environment_entropy: float
    universe_entropy: float


def environmental_decoherence(psi_universe: PureState, hamiltonian: np.ndarray,
                              layout: SpaceLayout, t: float) -> EnvironmentalReport:
    """整体幺正演化后对环境求偏迹

    纯态的"宇宙"熵始终为0，系统熵的增加恰好由环境熵抵消（S_sys = S_env）

    参数:
        psi_universe: 系统⊗环境 的纯态
        hamiltonian: 整体哈密顿量 H_U
        layout: 两因子分解 (n, n_E)
        t: 演化时间
    """
    if len(layout.factor_dims) != 2:
        raise StateValidationError("环境退相干需要 系统⊗环境 两因子分解")
    rho_u = evolve_von_neumann(from_pure(psi_universe), hamiltonian, t)
    rho_sys = partial_trace(rho_u, layout, keep=0)
    rho_env = partial_trace(rho_u, layout, keep=1)
    return EnvironmentalReport(
        rho_system=rho_sys,
        system_entropy=vn_entropy(rho_sys),
        environment_entropy=vn_entropy(rho_env),
        universe_entropy=vn_entropy(rho_u),
    )


def dephasing_model(gamma: float, dim: int = 2, omega: float = 0.0) -> LindbladModel:
    """纯退相位模型：L = √γ·Z，二能级时 Z = σ_z"""
    if gamma < 0:
        raise StateValidationError(f"γ 不能为负: {gamma}")
    z = SIGMA_Z if dim == 2 else np.diag(1.0 - 2.0 * np.arange(dim) / max(dim - 1, 1)).astype(complex)
    return LindbladModel(_drive(dim, omega), (math.sqrt(gamma) * z,))


def amplitude_damping_model(gamma: float, dim: int = 2, omega: float = 0.0) -> LindbladModel:
    """衰减模型：L = √γ·Σ|k⟩⟨k+1|，二能级时为 σ_-"""
    if gamma < 0:
        raise StateValidationError(f"γ 不能为负: {gamma}")
    lowering = np.diag(np.ones(dim - 1), k=1).astype(complex)
    return LindbladModel(_drive(dim, omega), (math.sqrt(gamma) * lowering,))


def unitary_model(dim: int = 2, omega: float = 1.0) -> LindbladModel:
    """无耗散模型"""
    return LindbladModel(_drive(dim, omega), ())


def _drive(dim: int, omega: float) -> np.ndarray:
    """二能级取 ω σ_x/2，其他维数取 ω·diag(0..n-1)"""
    if dim < 1:
        raise StateValidationError(f"维数必须为正: {dim}")
    if dim == 2:
        return 0.5 * omega * SIGMA_X
    return omega * np.diag(np.arange(dim)).astype(complex)
