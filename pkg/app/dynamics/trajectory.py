# -*- coding: utf-8 -*-
"""演化轨迹

记录时刻、密度矩阵与熵，并提供CSV导出和熵产生率
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from app.qdm import DensityMatrix, vn_entropy
from app.utils.errors import StateValidationError
from app.utils.tools import render_csv


@dataclass(frozen=True, eq=False)
class Trajectory:
    """演化轨迹：times、states、entropies 三者等长"""
    times: Sequence[float]
    states: Sequence[DensityMatrix]
    entropies: Sequence[float] = field(default=())

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        states = tuple(self.states)
        if len(times) != len(states):
            raise StateValidationError("轨迹的时刻与态数量不一致")
        entropies = tuple(self.entropies) or tuple(vn_entropy(s) for s in states)
        if len(entropies) != len(states):
            raise StateValidationError("轨迹的熵与态数量不一致")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'entropies', entropies)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def csv_header(self) -> List[str]:
        """列名：t, S, rho_re_00, rho_im_00, ..."""
        n = self.states[0].dim if self.states else 0
        header = ['t', 'S']
        for i in range(n):
            for j in range(n):
                header += [f'rho_re_{i}{j}', f'rho_im_{i}{j}']
        return header

    def to_csv(self, entropy_scale: float = 1.0) -> str:
        """按行优先展开密度矩阵导出CSV"""
        rows = []
        for t, s, state in zip(self.times, self.entropies, self.states):
            row: List[float] = [t, entropy_scale * s]
            for value in np.asarray(state.matrix).reshape(-1):
                row += [float(value.real), float(value.imag)]
            rows.append(row)
        return render_csv(self.csv_header(), rows)


def entropy_production(trajectory: Trajectory) -> np.ndarray:
    """熵产生率 dS/dt（有限差分，两端为单侧差分）"""
    if len(trajectory) < 2:
        return np.zeros(len(trajectory))
    return np.gradient(np.asarray(trajectory.entropies), np.asarray(trajectory.times))
