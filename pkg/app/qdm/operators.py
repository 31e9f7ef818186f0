# -*- coding: utf-8 -*-
"""常用算符与随机矩阵

泡利矩阵、上升/下降算符，以及由种子随机数流生成的幺正矩阵、厄米矩阵和密度矩阵
"""

import numpy as np
from scipy import linalg

from app.qdm.density_matrix import DensityMatrix, PureState

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# σ_- = |0⟩⟨1|，把激发态 |1⟩ 降到 |0⟩
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar 随机幺正矩阵（QR 分解并修正相位）"""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    """随机厄米矩阵"""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (a + a.conj().T)


def random_pure_state(rng: np.random.Generator, dim: int) -> PureState:
    """随机纯态"""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized(vec)


def random_density(rng: np.random.Generator, dim: int, rank: int = 0) -> DensityMatrix:
    """随机密度矩阵（Ginibre 构造），rank 为0时取满秩"""
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)
