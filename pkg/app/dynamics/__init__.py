# -*- coding: utf-8 -*-
"""动力学模块

提供冯·诺依曼与 Lindblad 演化"""
from .trajectory import Trajectory, entropy_production
from .evolution import (
    LindbladModel, evolve_von_neumann, lindblad_rhs, evolve_lindblad,
    dp_collapse_time, environmental_decoherence, EnvironmentalReport,
    dephasing_model, amplitude_damping_model, unitary_model, unitary_propagator
)

__all__ = [
    'Trajectory', 'entropy_production', 'LindbladModel', 'evolve_von_neumann',
    'lindblad_rhs', 'evolve_lindblad', 'dp_collapse_time', 'environmental_decoherence',
    'EnvironmentalReport', 'dephasing_model', 'amplitude_damping_model', 'unitary_model',
    'unitary_propagator'
]
