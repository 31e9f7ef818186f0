# -*- coding: utf-8 -*-
"""离散相空间上的面包师变换

N×N 格点（N = 2^k），权重按 [x, y] 存储。面包师变换实现为 (x, y) 二进制位的
置换：x 左移一位并从 y 的最低位补入，y 右移一位并把 x 的最高位补到最高位。
变换是格点的置换，精确可逆且保测度。
"""

import math
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from app.utils.errors import StateValidationError

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """相空间概率测度：N×N 非负权重，总和为1"""
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim == 1:
            side = math.isqrt(w.size)
            if side * side != w.size:
                raise StateValidationError(f"权重个数 {w.size} 不是平方数")
            w = w.reshape(side, side)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise StateValidationError(f"权重必须是 N×N 方阵，实际形状 {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise StateValidationError("权重必须是有限的非负数")
        total = math.fsum(w.ravel().tolist())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise StateValidationError(f"权重总和必须为1，实际为 {total!r}")
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)

    @property
    def N(self) -> int:
        return int(self.weights.shape[0])

    @property
    def support(self) -> int:
        """占据格点数"""
        return int(np.count_nonzero(self.weights))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhaseGrid) and np.array_equal(self.weights, other.weights)

    def __repr__(self) -> str:
        return f"PhaseGrid(N={self.N}, support={self.support})"


def single_cell(N: int, x: int = 0, y: int = 0) -> PhaseGrid:
    """全部权重集中在格点 (x, y)"""
    if not (0 <= x < N and 0 <= y < N):
        raise StateValidationError(f"格点 ({x}, {y}) 超出 {N}×{N} 相空间")
    w = np.zeros((N, N))
    w[x, y] = 1.0
    return PhaseGrid(w)


def uniform(N: int) -> PhaseGrid:
    """均匀测度"""
    return PhaseGrid(np.full((N, N), 1.0 / (N * N)))


def uniform_on(N: int, cells: Iterable[Tuple[int, int]]) -> PhaseGrid:
    """在给定格点集合上均匀分布"""
    cells = sorted(set(cells))
    if not cells:
        raise StateValidationError("格点集合不能为空")
    w = np.zeros((N, N))
    for x, y in cells:
        w[x, y] = 1.0
    return PhaseGrid(w / len(cells))


def _bits(N: int) -> int:
    if N < 1 or N & (N - 1):
        raise StateValidationError(f"N 必须是2的幂: {N}")
    return N.bit_length() - 1


def _index_grids(N: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(np.arange(N), np.arange(N), indexing='ij')


def apply_map(grid: PhaseGrid) -> PhaseGrid:
    """正向面包师变换

    Raises:
        StateValidationError: N 不是2的幂
    """
    N = grid.N
    k = _bits(N)
    if k == 0:
        # 1×1 相空间上映射为恒等
        return PhaseGrid(grid.weights)
    x, y = _index_grids(N)
    x_new = ((x << 1) & (N - 1)) | (y & 1)
    y_new = (y >> 1) | ((x >> (k - 1)) << (k - 1))
    out = np.empty_like(grid.weights)
    out[x_new, y_new] = grid.weights
    return PhaseGrid(out)


def apply_inverse(grid: PhaseGrid) -> PhaseGrid:
    """逆向面包师变换，apply_inverse(apply_map(g)) == g"""
    N = grid.N
    k = _bits(N)
    if k == 0:
        return PhaseGrid(grid.weights)
    x, y = _index_grids(N)
    x_old = (x >> 1) | ((y >> (k - 1)) << (k - 1))
    y_old = ((y << 1) & (N - 1)) | (x & 1)
    out = np.empty_like(grid.weights)
    out[x_old, y_old] = grid.weights
    return PhaseGrid(out)


def entropy(grid: PhaseGrid) -> float:
    """Gibbs 熵 −Σ w ln w，与求和顺序无关"""
    w = grid.weights[grid.weights > 0]
    return max(0.0, -math.fsum((w * np.log(w)).tolist()))


def coarsen(grid: PhaseGrid, b: int) -> PhaseGrid:
    """b×b 分块平均粗粒化

    Raises:
        StateValidationError: b 不整除 N，或粗粒化后熵减小
    """
    N = grid.N
    if b < 1 or N % b:
        raise StateValidationError(f"粗粒化块大小 {b} 必须整除 N={N}")
    if b == 1:
        return grid
    m = N // b
    blocks = grid.weights.reshape(m, b, m, b).mean(axis=(1, 3))
    result = PhaseGrid(np.repeat(np.repeat(blocks, b, axis=0), b, axis=1))

    before, after = entropy(grid), entropy(result)
    if after < before - WEIGHT_TOL:
        raise StateValidationError(f"粗粒化后熵减小: {before!r} -> {after!r}")
    return result


def total_variation(a: PhaseGrid, b: PhaseGrid) -> float:
    """全变差距离 ½Σ|w_a − w_b|"""
    if a.N != b.N:
        raise StateValidationError(f"相空间大小不一致: {a.N} 与 {b.N}")
    return 0.5 * math.fsum(np.abs(a.weights - b.weights).ravel().tolist())
