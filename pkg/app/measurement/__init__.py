# -*- coding: utf-8 -*-
"""测量模块

五阶段测量流程与熵记账"""
from .pipeline import (
    StageState, MeasurementRecord, EnergyBudget,
    stage0_prepare, stage1_premeasure, stage2_decohere, stage3_latent, stage4_observe,
    observe_repeated, born_frequencies, branch_probabilities, energy_budget_check,
    run_pipeline, premeasurement_unitary, outcome_state, basis_index,
    DIM, UP, DOWN, A0, A_UP, A_DOWN
)

__all__ = [
    'StageState', 'MeasurementRecord', 'EnergyBudget',
    'stage0_prepare', 'stage1_premeasure', 'stage2_decohere', 'stage3_latent', 'stage4_observe',
    'observe_repeated', 'born_frequencies', 'branch_probabilities', 'energy_budget_check',
    'run_pipeline', 'premeasurement_unitary', 'outcome_state', 'basis_index',
    'DIM', 'UP', 'DOWN', 'A0', 'A_UP', 'A_DOWN'
]
