# -*- coding: utf-8 -*-
"""相空间混合包

面包师变换、粗粒化与熵增长演示"""
from .baker import (
    PhaseGrid, single_cell, uniform, uniform_on, apply_map, apply_inverse,
    coarsen, entropy, total_variation
)
from .mixing import MixingRun, RetrodictionReport, run_mixing, growth_slope, retrodiction_demo

__all__ = [
    'PhaseGrid', 'single_cell', 'uniform', 'uniform_on', 'apply_map', 'apply_inverse',
    'coarsen', 'entropy', 'total_variation',
    'MixingRun', 'RetrodictionReport', 'run_mixing', 'growth_slope', 'retrodiction_demo'
]
