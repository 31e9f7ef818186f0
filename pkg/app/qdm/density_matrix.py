# -*- coding: utf-8 -*-
"""密度矩阵模块

提供纯态、密度矩阵、空间分解等核心类型，以及混合、偏迹、冯·诺依曼熵等运算。
所有对象构造后不可变，运算都是输入的纯函数。
"""

import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from app.config.config_manager import config_manager
from app.utils.errors import StateValidationError

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    """返回只读副本"""
    copy = np.array(array, dtype=complex, copy=True)
    copy.setflags(write=False)
    return copy


@dataclass(frozen=True)
class SpaceLayout:
    """张量积空间分解，如 系统 ⊗ 环境"""
    factor_dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise StateValidationError(f"各因子维数必须为正整数: {self.factor_dims}")
        object.__setattr__(self, 'factor_dims', dims)

    @property
    def total(self) -> int:
        """总维数"""
        return int(np.prod(self.factor_dims))


@dataclass(frozen=True, eq=False)
class PureState:
    """归一化的纯态 ψ"""
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0 or not np.all(np.isfinite(amps)):
            raise StateValidationError("纯态振幅必须为有限的非空向量")
        deviation = abs(float(np.vdot(amps, amps).real) - 1.0)
        if deviation > config_manager.get_tolerance('normalization_tol'):
            raise StateValidationError(f"纯态未归一化，范数偏差 {deviation:.3e}")
        object.__setattr__(self, 'amplitudes', _frozen(amps))

    @classmethod
    def normalized(cls, vector: Sequence[complex]) -> 'PureState':
        """对任意非零向量归一化后构造纯态"""
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise StateValidationError("零向量无法归一化")
        return cls(vec / norm)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)


@dataclass(frozen=True)
class DensityReport:
    """密度矩阵合法性诊断报告"""
    valid: bool
    hermitian_deviation: float
    trace_deviation: float
    min_eigenvalue: float
    message: str = ''


def is_valid_density(matrix: Union['DensityMatrix', np.ndarray], tol: Optional[float] = None) -> DensityReport:
    """检查矩阵是否为合法的密度矩阵

    参数:
        matrix: 待检查的矩阵
        tol: 容差，默认使用配置中的 hermitian_tol / trace_tol / psd_tol

    返回:
        DensityReport: 始终返回报告，不抛出异常
    """
    if isinstance(matrix, DensityMatrix):
        matrix = matrix.matrix
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        return DensityReport(False, math.inf, math.inf, -math.inf, f"不是方阵: {m.shape}")
    if not np.all(np.isfinite(m)):
        return DensityReport(False, math.inf, math.inf, -math.inf, "包含 NaN 或 Inf")

    herm_tol = config_manager.get_tolerance('hermitian_tol') if tol is None else tol
    trace_tol = config_manager.get_tolerance('trace_tol') if tol is None else tol
    psd_tol = config_manager.get_tolerance('psd_tol') if tol is None else tol

    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    trace_dev = float(abs(np.trace(m) - 1.0))
    min_eig = float(linalg.eigvalsh(0.5 * (m + m.conj().T))[0])

    problems = []
    if herm_dev > herm_tol:
        problems.append(f"非厄米 (偏差 {herm_dev:.3e})")
    if trace_dev > trace_tol:
        problems.append(f"迹不为1 (偏差 {trace_dev:.3e})")
    if min_eig < -psd_tol:
        problems.append(f"存在负本征值 {min_eig:.3e}")
    return DensityReport(not problems, herm_dev, trace_dev, min_eig, '; '.join(problems))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """密度矩阵 ρ：厄米、迹为1、半正定

    参数:
        matrix: dim×dim 复矩阵
        tol: 校验容差，默认取配置；积分轨迹使用更宽的正定容差
    """
    matrix: np.ndarray
    tol: Optional[float] = field(default=None)

    def __post_init__(self) -> None:
        report = is_valid_density(self.matrix, self.tol)
        if not report.valid:
            raise StateValidationError(f"非法密度矩阵: {report.message}")
        object.__setattr__(self, 'matrix', _frozen(self.matrix))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def psd_tol(self) -> float:
        return config_manager.get_tolerance('psd_tol') if self.tol is None else self.tol

    def populations(self) -> np.ndarray:
        """对角元（实数）"""
        return np.real(np.diag(self.matrix)).copy()

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, purity={purity(self):.6f})"


StateLike = Union[PureState, DensityMatrix]


def from_pure(psi: PureState) -> DensityMatrix:
    """由纯态构造密度矩阵 ρ = |ψ⟩⟨ψ|"""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def _as_matrix(state: StateLike) -> np.ndarray:
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    if isinstance(state, DensityMatrix):
        return np.asarray(state.matrix)
    raise StateValidationError(f"不支持的态类型: {type(state).__name__}")


def mix(states: Sequence[Tuple[float, StateLike]]) -> DensityMatrix:
    """按权重混合纯态或密度矩阵 ρ = Σ p_k ρ_k

    Raises:
        StateValidationError: 权重为负、权重和不为1或维数不一致
    """
    if not states:
        raise StateValidationError("混合列表为空")
    weights = np.array([float(p) for p, _ in states])
    if np.any(weights < 0):
        raise StateValidationError(f"权重不能为负: {weights.tolist()}")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise StateValidationError(f"权重之和必须为1，实际为 {math.fsum(weights)!r}")

    matrices = [_as_matrix(state) for _, state in states]
    dim = matrices[0].shape[0]
    if any(m.shape != (dim, dim) for m in matrices):
        raise StateValidationError("混合的各个态维数不一致")
    rho = np.zeros((dim, dim), dtype=complex)
    for p, m in zip(weights, matrices):
        rho += p * m
    return DensityMatrix(rho)


def eigenvalues(rho: DensityMatrix) -> np.ndarray:
    """厄米本征值（升序）"""
    return linalg.eigvalsh(rho.matrix)


def vn_entropy(rho: DensityMatrix) -> float:
    """冯·诺依曼熵 S = -Tr(ρ ln ρ)，单位为 k_B（nat）

    本征值落在 [-psd_tol, zero_eigen_tol] 内视为0；更负的本征值报错
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    lam = eigenvalues(rho)
    if lam[0] < -rho.psd_tol:
        raise StateValidationError(f"密度矩阵存在负本征值 {lam[0]:.3e}")
    lam = lam[lam > config_manager.get_tolerance('zero_eigen_tol')]
    entropy = -float(np.sum(lam * np.log(lam)))
    return max(entropy, 0.0)


def partial_trace(rho: DensityMatrix, layout: SpaceLayout, keep: int) -> DensityMatrix:
    """偏迹：保留第 keep 个因子，对其余因子求迹

    Raises:
        StateValidationError: 维数与分解不符或 keep 越界
    """
    dims = layout.factor_dims
    if rho.dim != layout.total:
        raise StateValidationError(f"密度矩阵维数 {rho.dim} 与分解 {dims} 不符")
    if not 0 <= keep < len(dims):
        raise StateValidationError(f"因子序号越界: {keep}")
    if len(dims) == 1:
        return rho

    n = len(dims)
    tensor = np.asarray(rho.matrix).reshape(dims + dims)
    row_idx = list(range(n))
    col_idx = [i if i != keep else n + keep for i in range(n)]
    reduced = np.einsum(tensor, row_idx + col_idx, [keep, n + keep])
    return DensityMatrix(reduced, tol=rho.tol)


def purity(rho: DensityMatrix) -> float:
    """纯度 Tr ρ²"""
    m = np.asarray(rho.matrix)
    return float(np.real(np.vdot(m, m)))


def expectation(rho: DensityMatrix, observable: np.ndarray) -> complex:
    """期望值 Tr(ρA)"""
    a = np.asarray(observable, dtype=complex)
    if a.shape != rho.matrix.shape:
        raise StateValidationError(f"观测量形状 {a.shape} 与密度矩阵不符")
    return complex(np.trace(rho.matrix @ a))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """迹距离 ½ Σ|eig(ρ−σ)|，取值 [0, 1]"""
    if rho.dim != sigma.dim:
        raise StateValidationError("两个密度矩阵维数不一致")
    diff = np.asarray(rho.matrix) - np.asarray(sigma.matrix)
    diff = 0.5 * (diff + diff.conj().T)
    return min(1.0, 0.5 * float(np.sum(np.abs(linalg.eigvalsh(diff)))))


def dephase(rho: DensityMatrix, basis: Optional[np.ndarray] = None) -> DensityMatrix:
    """退相干：去掉给定正交基下的非对角元

    参数:
        basis: 列向量为基矢的幺正矩阵，默认计算基
    """
    m = np.asarray(rho.matrix)
    if basis is None:
        return DensityMatrix(np.diag(np.diag(m)), tol=rho.tol)
    u = np.asarray(basis, dtype=complex)
    if u.shape != m.shape or not np.allclose(u.conj().T @ u, np.eye(rho.dim), atol=1e-10):
        raise StateValidationError("退相干基必须是同维数的幺正矩阵")
    in_basis = u.conj().T @ m @ u
    return DensityMatrix(u @ np.diag(np.diag(in_basis)) @ u.conj().T, tol=rho.tol)


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """张量积 ρ_A ⊗ ρ_B ⊗ ..."""
    if not states:
        raise StateValidationError("张量积至少需要一个因子")
    result = np.asarray(states[0].matrix)
    for state in states[1:]:
        result = np.kron(result, np.asarray(state.matrix))
    return DensityMatrix(result)


def maximally_mixed(dim: int) -> DensityMatrix:
    """最大混合态 I/n"""
    if dim < 1:
        raise StateValidationError("维数必须为正")
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def basis_state(dim: int, index: int) -> PureState:
    """计算基矢 |index⟩"""
    if not 0 <= index < dim:
        raise StateValidationError(f"基矢序号越界: {index}")
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return PureState(vec)


def validate_weights(weights: List[float], tol: float = 1e-12) -> None:
    """校验概率权重为正且和为1"""
    if any(w <= 0 for w in weights):
        raise StateValidationError(f"概率必须为正: {weights}")
    if abs(math.fsum(weights) - 1.0) > tol:
        raise StateValidationError(f"概率之和必须为1，实际为 {math.fsum(weights)!r}")
