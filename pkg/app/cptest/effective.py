# -*- coding: utf-8 -*-
"""有效哈密顿量与 CP 破坏量 Λ

投影到 {|K⟩|β⟩, |K̄⟩|β⟩} 二维子空间：
- 二阶微扰：H_eff = H0 + ε·V_PP + ε²·V_PQ (E0 − E_Q + iδ)^{-1} V_QP
- 精确 Feshbach 投影：H_eff(z) = PHP + PHQ (z − QHQ)^{-1} QHP，z = E0 + E_β + iδ

两种结果都扣除环境能量 E_β，以 m0 为零阶对角元。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from app.config.config_manager import config_manager
from app.cptest.kaon_model import (
    K, KBAR, KaonModel, build_full_hamiltonian, cp_check, cpt_check, symmetry_maps
)
from app.utils.errors import SingularityError

logger = logging.getLogger(__name__)


def _resolved_delta(model: KaonModel, delta: Optional[float]) -> float:
    return model.delta if delta is None else float(delta)


def effective_hamiltonian_perturbative(model: KaonModel, beta: int,
                                       delta: Optional[float] = None) -> np.ndarray:
    """二阶微扰有效哈密顿量（2×2，基为 K, K̄）

    参数:
        model: K介子模型
        beta: 环境序号
        delta: 覆盖模型的 δ（δ = 0 用于检查奇异分母）

    Raises:
        SingularityError: δ = 0 且某个 E0 − E_f = 0
    """
    model._check_beta(beta)
    delta = _resolved_delta(model, delta)
    eps = model.epsilon
    v = model.weak_hamiltonian() + model.interaction_block(beta)
    energies = np.real(np.diag(model.strong_hamiltonian()))
    p_idx = np.array([K, KBAR])
    q_idx = np.arange(2, model.n_sys)

    denominators = model.E0 - energies[q_idx] + 1j * delta
    if np.any(np.abs(denominators) == 0):
        raise SingularityError(f"β={beta}: δ=0 且存在与 E0 简并的末态，二阶分母为零")

    h0 = np.diag(energies[p_idx]).astype(complex)
    v_pp = v[np.ix_(p_idx, p_idx)]
    v_pq = v[np.ix_(p_idx, q_idx)]
    v_qp = v[np.ix_(q_idx, p_idx)]
    second = (v_pq / denominators) @ v_qp
    return h0 + eps * v_pp + eps ** 2 * second


def lambda_perturbative(model: KaonModel, beta: int, delta: Optional[float] = None) -> complex:
    """Λ = −ε² Σ_f (h_Kf − h̄_Kf)(g_Kf − ḡ_Kf) / (E0 − E_f + iδ)

    h_Kf = ⟨K|⟨β|H_int|f⟩|β⟩，g_Kf = ⟨K|H_w|f⟩，上划线为复共轭。
    H_w 满足 CPT 且 H_int 满足 CP 时，Λ 等于 H_eff 对角元之差 ⟨K|H_eff|K⟩ − ⟨K̄|H_eff|K̄⟩。

    Raises:
        SingularityError: δ = 0 且某个 E0 − E_f = 0
    """
    model._check_beta(beta)
    delta = _resolved_delta(model, delta)
    maps = symmetry_maps(model)
    if not cpt_check(model.weak_hamiltonian(), maps) or not cp_check(model.interaction_block(beta), maps):
        logger.warning(f"β={beta}: H_w 不满足 CPT 或 H_int 不满足 CP，Λ 公式不再等于对角元之差")

    h = model.h_int[beta]
    g = model.g[:model.n_f]
    denominators = model.E0 - model.E_f + 1j * delta
    if np.any(np.abs(denominators) == 0):
        raise SingularityError(f"β={beta}: δ=0 且存在与 E0 简并的末态，Λ 分母为零")
    terms = (h - np.conj(h)) * (g - np.conj(g)) / denominators
    return complex(-model.epsilon ** 2 * np.sum(terms))


def effective_hamiltonian_oracle(model: KaonModel, beta: int,
                                 delta: Optional[float] = None) -> np.ndarray:
    """精确 Feshbach 投影有效哈密顿量（2×2，基为 K, K̄，已扣除 E_β）

    Raises:
        SingularityError: ‖H_U‖·‖(z − QHQ)^{-1}‖ 超过 resolvent_cond_max
    """
    model._check_beta(beta)
    delta = _resolved_delta(model, delta)
    h_u = build_full_hamiltonian(model)
    p_idx = np.array([K * model.n_E + beta, KBAR * model.n_E + beta])
    q_idx = np.setdiff1d(np.arange(model.dim), p_idx)
    e_beta = float(model.E_env[beta])
    z = model.E0 + e_beta + 1j * delta

    h_pp = h_u[np.ix_(p_idx, p_idx)]
    h_pq = h_u[np.ix_(p_idx, q_idx)]
    h_qp = h_u[np.ix_(q_idx, p_idx)]
    resolvent = z * np.eye(q_idx.size) - h_u[np.ix_(q_idx, q_idx)]

    # 以 ‖H_U‖ 为尺度：z − QHQ ≈ iδ·I 时普通条件数为1，但已经接近奇异
    sigma_min = float(linalg.svdvals(resolvent)[-1])
    scale = max(float(linalg.norm(h_u, 2)), abs(z), 1.0)
    cond = scale / sigma_min if sigma_min > 0 else float('inf')
    cond_max = config_manager.get_tolerance('resolvent_cond_max')
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularityError(f"β={beta}: 预解式 z − QHQ 病态，条件数 {cond:.3e} > {cond_max:.1e}")

    correction = h_pq @ linalg.solve(resolvent, h_qp)
    return h_pp + correction - e_beta * np.eye(2)


def lambda_from_heff(h_eff: np.ndarray) -> complex:
    """⟨K|H_eff|K⟩ − ⟨K̄|H_eff|K̄⟩"""
    return complex(h_eff[0, 0] - h_eff[1, 1])


def lambda_oracle(model: KaonModel, beta: int, delta: Optional[float] = None) -> complex:
    """精确投影给出的 Λ"""
    return lambda_from_heff(effective_hamiltonian_oracle(model, beta, delta))


@dataclass(frozen=True)
class ViolationReport:
    """单个 (β, ε) 的 Λ 比较

    ratio = |Λ_oracle − Λ_pert|(ε) / |Λ_oracle − Λ_pert|(ε/2)，分母为0时为 nan
    """
    beta: int
    epsilon: float
    lambda_pert: complex
    lambda_oracle: complex
    ratio: float

    @property
    def error(self) -> float:
        return abs(self.lambda_oracle - self.lambda_pert)

    def csv_row(self) -> List[float]:
        return [self.beta, self.epsilon, self.lambda_pert.real, self.lambda_pert.imag,
                self.lambda_oracle.real, self.lambda_oracle.imag, self.ratio]

    def to_dict(self) -> Dict[str, float]:
        return dict(zip(VIOLATION_CSV_HEADER, self.csv_row()))


VIOLATION_CSV_HEADER = ['beta', 'epsilon', 're_lambda_pert', 'im_lambda_pert',
                        're_lambda_oracle', 'im_lambda_oracle', 'ratio']


def _compare(model: KaonModel, beta: int, epsilon: float) -> ViolationReport:
    here = model.with_epsilon(epsilon)
    half = model.with_epsilon(epsilon / 2.0)
    pert = lambda_perturbative(here, beta)
    oracle = lambda_oracle(here, beta)
    error_half = abs(lambda_oracle(half, beta) - lambda_perturbative(half, beta))
    error = abs(oracle - pert)
    ratio = error / error_half if error_half > 0 else float('nan')
    return ViolationReport(beta=beta, epsilon=float(epsilon), lambda_pert=pert,
                           lambda_oracle=oracle, ratio=float(ratio))


def violation_scan(model: KaonModel, beta_list: Sequence[int], epsilon_list: Sequence[float],
                   max_workers: Optional[int] = None) -> List[ViolationReport]:
    """对 β × ε 网格比较微扰 Λ 与精确 Λ

    结果顺序固定为 β 外层、ε 内层，与线程调度无关
    """
    grid: List[Tuple[int, float]] = [(int(b), float(e)) for b in beta_list for e in epsilon_list]
    for beta, _ in grid:
        model._check_beta(beta)
    workers = max_workers or config_manager.get_max_workers()
    logger.info(f"开始 Λ 扫描: {len(grid)} 个 (β, ε) 组合, {workers} 个线程")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(lambda item: _compare(model, *item), grid))
    for report in reports:
        logger.debug(f"β={report.beta} ε={report.epsilon}: |Λo−Λp|={report.error:.3e}, ratio={report.ratio:.4g}")
    return reports
