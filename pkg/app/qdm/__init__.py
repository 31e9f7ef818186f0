# -*- coding: utf-8 -*-
"""量子密度矩阵核心包

提供纯态、密度矩阵及其代数运算"""
from .density_matrix import (
    SpaceLayout, PureState, DensityMatrix, DensityReport,
    is_valid_density, from_pure, mix, vn_entropy, partial_trace,
    purity, expectation, trace_distance, dephase, tensor,
    maximally_mixed, basis_state, eigenvalues
)

__all__ = [
    'SpaceLayout', 'PureState', 'DensityMatrix', 'DensityReport',
    'is_valid_density', 'from_pure', 'mix', 'vn_entropy', 'partial_trace',
    'purity', 'expectation', 'trace_distance', 'dephase', 'tensor',
    'maximally_mixed', 'basis_state', 'eigenvalues'
]
