# -*- coding: utf-8 -*-
"""K介子–环境复合哈密顿量

系统基矢：K=0, K̄=1, f_i=2+2i, f̄_i=3+2i（i < n_f）；整体空间为 系统 ⊗ 环境，
整体序号为 s·n_E + β。

    H_U = H_s⊗I_E + ε·H_w⊗I_E + I⊗H_E + ε·H_int

CP 表示为基矢置换（K↔K̄、f↔f̄，环境不变），T 表示为固定基下的复共轭。
"""

import math
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from app.config.config_manager import config_manager
from app.qdm import PureState
from app.utils.errors import StateValidationError

logger = logging.getLogger(__name__)

K, KBAR = 0, 1
EPSILON_MAX = 0.2


def final_index(i: int, bar: bool = False) -> int:
    """第 i 对末态 f_i（bar=True 时为 f̄_i）的系统序号"""
    return 2 + 2 * i + (1 if bar else 0)


def _readonly(values: Sequence, dtype: type, shape: Tuple[int, ...], name: str) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    if array.size != int(np.prod(shape)):
        raise StateValidationError(f"{name} 形状应为 {shape}，实际为 {array.shape}")
    array = array.reshape(shape)
    if not np.all(np.isfinite(array)):
        raise StateValidationError(f"{name} 包含 NaN 或 Inf")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class KaonModel:
    """K介子衰变模型

    参数:
        n_f: 末态对 (f, f̄) 的数目
        n_E: 环境维数
        m0: K 与 K̄ 的强作用能量
        g: 长度 2·n_f，前半为 ⟨K|H_w|f_i⟩，后半为 ⟨K̄|H_w|f̄_i⟩
        E_f: 末态强作用能量（f 与 f̄ 相同）
        h_int: 形状 (n_E, n_f)，⟨K|⟨β|H_int|f_i⟩|β⟩
        h_int_bar: 形状 (n_E, n_f)，⟨K̄|⟨β|H_int|f̄_i⟩|β⟩，缺省与 h_int 相同（CP 守恒）
        h_ff: 形状 (n_E, n_f) 的实数，环境对末态的对角能移（f 与 f̄ 相同）
        E_env: 环境能级，互不相同
        epsilon: 弱作用与环境作用的小参数，ε ∈ [0, 0.2]
        delta: 预解式正则化参数 δ > 0
    """
    n_f: int
    n_E: int
    m0: float
    g: np.ndarray
    E_f: np.ndarray
    h_int: np.ndarray
    epsilon: float
    delta: float
    h_int_bar: Optional[np.ndarray] = None
    h_ff: Optional[np.ndarray] = None
    E_env: Optional[np.ndarray] = None
    E0: float = field(init=False)

    def __post_init__(self) -> None:
        if self.n_f < 1 or self.n_E < 1:
            raise StateValidationError(f"n_f 与 n_E 必须为正: n_f={self.n_f}, n_E={self.n_E}")
        if not 0.0 <= self.epsilon <= EPSILON_MAX:
            raise StateValidationError(f"epsilon 必须在 [0, {EPSILON_MAX}] 内: {self.epsilon}")
        if not self.delta > 0:
            raise StateValidationError(f"delta 必须为正: {self.delta}")
        n_f, n_E = self.n_f, self.n_E
        object.__setattr__(self, 'g', _readonly(self.g, complex, (2 * n_f,), 'g'))
        object.__setattr__(self, 'E_f', _readonly(self.E_f, float, (n_f,), 'E_f'))
        object.__setattr__(self, 'h_int', _readonly(self.h_int, complex, (n_E, n_f), 'h_int'))
        h_bar = self.h_int if self.h_int_bar is None else self.h_int_bar
        object.__setattr__(self, 'h_int_bar', _readonly(h_bar, complex, (n_E, n_f), 'h_int_bar'))
        h_ff = np.zeros((n_E, n_f)) if self.h_ff is None else self.h_ff
        object.__setattr__(self, 'h_ff', _readonly(h_ff, float, (n_E, n_f), 'h_ff'))
        e_env = np.arange(n_E, dtype=float) if self.E_env is None else self.E_env
        e_env = _readonly(e_env, float, (n_E,), 'E_env')
        if len(set(e_env.tolist())) != n_E:
            raise StateValidationError("环境能级必须互不相同")
        object.__setattr__(self, 'E_env', e_env)
        object.__setattr__(self, 'E0', float(self.m0))

    @property
    def n_sys(self) -> int:
        """系统维数 2 + 2·n_f"""
        return 2 + 2 * self.n_f

    @property
    def dim(self) -> int:
        """整体维数 (2 + 2·n_f)·n_E"""
        return self.n_sys * self.n_E

    def with_epsilon(self, epsilon: float) -> 'KaonModel':
        """返回只改变 ε 的新模型"""
        return replace(self, epsilon=epsilon)

    def strong_hamiltonian(self) -> np.ndarray:
        """H_s = diag(m0, m0, E_f0, E_f0, ...)，与末态块不耦合"""
        energies = [self.m0, self.m0]
        for e in self.E_f:
            energies += [float(e), float(e)]
        return np.diag(np.array(energies, dtype=complex))

    def weak_hamiltonian(self) -> np.ndarray:
        """H_w：K→f_i 与 K̄→f̄_i 的耦合（厄米）"""
        h = np.zeros((self.n_sys, self.n_sys), dtype=complex)
        for i in range(self.n_f):
            h[K, final_index(i)] = self.g[i]
            h[KBAR, final_index(i, bar=True)] = self.g[self.n_f + i]
        return h + h.conj().T

    def environment_hamiltonian(self) -> np.ndarray:
        """H_E = diag(E_env)"""
        return np.diag(self.E_env.astype(complex))

    def interaction_block(self, beta: int) -> np.ndarray:
        """H_int 在固定 β 上的系统块（不含 ε）"""
        self._check_beta(beta)
        h = np.zeros((self.n_sys, self.n_sys), dtype=complex)
        for i in range(self.n_f):
            h[K, final_index(i)] = self.h_int[beta, i]
            h[KBAR, final_index(i, bar=True)] = self.h_int_bar[beta, i]
        h = h + h.conj().T
        for i in range(self.n_f):
            h[final_index(i), final_index(i)] += self.h_ff[beta, i]
            h[final_index(i, bar=True), final_index(i, bar=True)] += self.h_ff[beta, i]
        return h

    def interaction_hamiltonian(self) -> np.ndarray:
        """整体空间上的 H_int（β 对角）"""
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for beta in range(self.n_E):
            idx = np.arange(self.n_sys) * self.n_E + beta
            h[np.ix_(idx, idx)] = self.interaction_block(beta)
        return h

    def _check_beta(self, beta: int) -> None:
        if not 0 <= beta < self.n_E:
            raise StateValidationError(f"环境序号 β 越界: {beta}（n_E={self.n_E}）")


def build_full_hamiltonian(model: KaonModel) -> np.ndarray:
    """组装整体哈密顿量 H_U

    Raises:
        StateValidationError: 组装结果不是厄米矩阵
    """
    eye_e = np.eye(model.n_E, dtype=complex)
    eye_s = np.eye(model.n_sys, dtype=complex)
    h_u = (np.kron(model.strong_hamiltonian(), eye_e)
           + model.epsilon * np.kron(model.weak_hamiltonian(), eye_e)
           + np.kron(eye_s, model.environment_hamiltonian())
           + model.epsilon * model.interaction_hamiltonian())
    deviation = float(np.max(np.abs(h_u - h_u.conj().T)))
    if deviation > 1e-12:
        raise StateValidationError(f"H_U 不是厄米矩阵 (偏差 {deviation:.3e})")
    return h_u


@dataclass(frozen=True)
class SymmetryMaps:
    """CP 配对置换与 T 约定"""
    n_f: int
    n_E: int = 1
    t_convention: str = 'conjugate'

    @property
    def cp_pairing(self) -> Tuple[int, ...]:
        """K↔K̄、f_i↔f̄_i 的对合置换"""
        pairing = [KBAR, K]
        for i in range(self.n_f):
            pairing += [final_index(i, bar=True), final_index(i)]
        return tuple(pairing)

    def permutation_matrix(self, dim: int) -> np.ndarray:
        """系统空间或 系统⊗环境 空间上的置换矩阵（环境序号不变）"""
        n_sys = 2 + 2 * self.n_f
        p = np.zeros((n_sys, n_sys), dtype=complex)
        for src, dst in enumerate(self.cp_pairing):
            p[dst, src] = 1.0
        if dim == n_sys:
            return p
        if dim == n_sys * self.n_E:
            return np.kron(p, np.eye(self.n_E))
        raise StateValidationError(f"矩阵维数 {dim} 既不是系统维数 {n_sys} 也不是整体维数 {n_sys * self.n_E}")

    def time_reverse(self, matrix: np.ndarray) -> np.ndarray:
        """T：固定基下逐元素复共轭"""
        if self.t_convention != 'conjugate':
            raise StateValidationError(f"未知的 T 约定: {self.t_convention}")
        return np.conj(matrix)


def symmetry_maps(model: KaonModel) -> SymmetryMaps:
    """由模型构造对称性映射"""
    return SymmetryMaps(n_f=model.n_f, n_E=model.n_E)


def _square(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateValidationError(f"需要方阵，实际形状 {m.shape}")
    return m


def cp_check(matrix: np.ndarray, maps: SymmetryMaps, tol: float = 1e-12) -> bool:
    """CP 守恒检查：max|H − P H P| ≤ tol"""
    h = _square(matrix)
    p = maps.permutation_matrix(h.shape[0])
    return float(np.max(np.abs(h - p @ h @ p))) <= tol


def cpt_check(matrix: np.ndarray, maps: SymmetryMaps, tol: float = 1e-12) -> bool:
    """CPT 守恒检查：max|H − P H̄ P| ≤ tol"""
    h = _square(matrix)
    p = maps.permutation_matrix(h.shape[0])
    return float(np.max(np.abs(h - p @ maps.time_reverse(h) @ p))) <= tol


def kaon_basis(model: Optional[KaonModel] = None) -> Tuple[PureState, PureState]:
    """K_S ≈ (K + K̄)/√2，K_L ≈ (K − K̄)/√2，作用在 {K, K̄} 二维块上"""
    s = 1.0 / math.sqrt(2.0)
    return PureState(np.array([s, s], dtype=complex)), PureState(np.array([s, -s], dtype=complex))


def default_delta(m0: float, E_f: Sequence[float], scale: Optional[float] = None) -> float:
    """δ 默认值：scale × 最小非零 |E0 − E_f|"""
    scale = config_manager.get_delta_scale() if scale is None else scale
    gaps = [abs(m0 - float(e)) for e in E_f if abs(m0 - float(e)) > 0]
    return scale * (min(gaps) if gaps else 1.0)


def kaon_model_from_phases(n_f: int, n_E: int, m0: float, E_f: Sequence[float], g: Sequence[complex],
                           phi_f: Sequence[float], h_int: Sequence[complex], epsilon: float,
                           delta: Optional[float] = None, h_ff: Optional[Sequence[float]] = None,
                           E_env: Optional[Sequence[float]] = None) -> KaonModel:
    """由相位参数构造模型

    ⟨K|H_w|f⟩ = g_f e^{−iφ_f/2}，⟨K̄|H_w|f̄⟩ = conj(g_f) e^{+iφ_f/2}，H_w 天然满足 CPT；
    实数 g_f 时 ⟨K̄|H_w|f̄⟩ = e^{iφ_f}⟨K|H_w|f⟩，φ_f = 0 为 CP 守恒。
    复数 g_f 的相位并入 CP 相位：⟨K̄|H_w|f̄⟩ = e^{i(φ_f − 2·arg g_f)}⟨K|H_w|f⟩，
    CP 守恒条件为 φ_f = 2·arg g_f（模 2π）。
    H_int 对 K→f 与 K̄→f̄ 取相同耦合，天然满足 CP。

    参数:
        g: 长度 n_f 的基本振幅
        phi_f: 长度 n_f 的 CP 破坏相位
        h_int: 长度 n_E·n_f，按 β 行优先
    """
    g = np.asarray(g, dtype=complex).reshape(-1)
    phi = np.asarray(phi_f, dtype=float).reshape(-1)
    if g.size != n_f or phi.size != n_f:
        raise StateValidationError(f"g 与 phi_f 的长度都必须为 n_f={n_f}")
    half = np.exp(-0.5j * phi)
    couplings = np.concatenate([g * half, np.conj(g) * np.conj(half)])
    if delta is None:
        delta = default_delta(m0, E_f)
    return KaonModel(
        n_f=n_f, n_E=n_E, m0=float(m0), g=couplings, E_f=np.asarray(E_f, dtype=float),
        h_int=np.asarray(h_int, dtype=complex).reshape(n_E, n_f), epsilon=float(epsilon),
        delta=float(delta), h_ff=None if h_ff is None else np.asarray(h_ff, dtype=float).reshape(n_E, n_f),
        E_env=None if E_env is None else np.asarray(E_env, dtype=float),
    )


def random_kaon_model(rng: np.random.Generator, cp_violating: bool, n_f: Optional[int] = None,
                      n_E: Optional[int] = None, epsilon: float = 0.1) -> KaonModel:
    """随机模型（用于对称性定理与微扰一致性扫描）

    末态能量都低于 m0；CP 破坏时各末态的 Im⟨K|H_w|f⟩·Im h 同号且 h_ff > 0，
    使三阶修正不会在不同末态之间相消
    """
    n_f = n_f or int(rng.integers(1, 4))
    n_E = n_E or int(rng.integers(1, 5))
    m0 = 1.0
    E_f = m0 - rng.uniform(1.0, 2.0, size=n_f)
    g = rng.uniform(0.5, 1.0, size=n_f)
    if cp_violating:
        phi = rng.uniform(0.25 * np.pi, np.pi, size=n_f)
        chi = rng.uniform(np.pi / 6, 5 * np.pi / 6, size=(n_E, n_f))
        h_int = rng.uniform(0.3, 1.0, size=(n_E, n_f)) * np.exp(-1j * chi)
    else:
        phi = np.zeros(n_f)
        h_int = rng.uniform(0.3, 1.0, size=(n_E, n_f)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(n_E, n_f)))
    h_ff = rng.uniform(0.1, 0.5, size=(n_E, n_f))
    E_env = np.arange(n_E, dtype=float) + rng.uniform(0.0, 0.5, size=n_E)
    return kaon_model_from_phases(n_f, n_E, m0, E_f, g, phi, h_int.reshape(-1), epsilon,
                                  h_ff=h_ff.reshape(-1), E_env=E_env)
