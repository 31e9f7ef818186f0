# -*- coding: utf-8 -*-
"""K介子 CP/CPT 检验包

复合哈密顿量、对称性检查以及微扰与精确投影的有效哈密顿量"""
from .kaon_model import (
    KaonModel, SymmetryMaps, build_full_hamiltonian, cp_check, cpt_check,
    kaon_basis, symmetry_maps, default_delta, kaon_model_from_phases, random_kaon_model
)
from .effective import (
    ViolationReport, VIOLATION_CSV_HEADER, effective_hamiltonian_perturbative,
    effective_hamiltonian_oracle, lambda_perturbative, lambda_oracle, lambda_from_heff,
    violation_scan
)

__all__ = [
    'KaonModel', 'SymmetryMaps', 'build_full_hamiltonian', 'cp_check', 'cpt_check',
    'kaon_basis', 'symmetry_maps', 'default_delta', 'kaon_model_from_phases', 'random_kaon_model',
    'ViolationReport', 'VIOLATION_CSV_HEADER', 'effective_hamiltonian_perturbative',
    'effective_hamiltonian_oracle', 'lambda_perturbative', 'lambda_oracle', 'lambda_from_heff',
    'violation_scan'
]
