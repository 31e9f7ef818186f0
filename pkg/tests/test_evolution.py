#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""测试动力学模块

冯·诺依曼演化保熵、Lindblad 积分保迹与退相干包络、环境退相干
"""

import os
import sys
import math
import unittest

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.dynamics import (
    LindbladModel, Trajectory, amplitude_damping_model, dephasing_model, dp_collapse_time,
    entropy_production, environmental_decoherence, evolve_lindblad, evolve_von_neumann,
    lindblad_rhs, unitary_model
)
from app.qdm import PureState, SpaceLayout, basis_state, from_pure, maximally_mixed, vn_entropy
from app.qdm.operators import random_density, random_hermitian, random_pure_state
from app.utils.errors import IntegrationError, StateValidationError
from app.utils.tools import make_rng


def _plus_state():
    s = 1.0 / math.sqrt(2.0)
    return from_pure(PureState(np.array([s, s])))


class TestVonNeumann(unittest.TestCase):
    """幺正演化测试类"""

    def test_entropy_conserved(self):
        """200 组随机 (ρ, H, t) 熵变化小于 1e-10"""
        rng = make_rng(11)
        for _ in range(200):
            dim = int(rng.integers(2, 7))
            rho = random_density(rng, dim)
            h = random_hermitian(rng, dim)
            t = float(rng.uniform(-5.0, 5.0))
            evolved = evolve_von_neumann(rho, h, t)
            self.assertLess(abs(vn_entropy(evolved) - vn_entropy(rho)), 1e-10)

    def test_forward_then_backward(self):
        """向前演化 t 再向后演化 t 回到初态"""
        rng = make_rng(12)
        rho = random_density(rng, 4)
        h = random_hermitian(rng, 4)
        back = evolve_von_neumann(evolve_von_neumann(rho, h, 2.5), h, -2.5)
        np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-10)

    def test_rabi_oscillation(self):
        """H = ω σ_x/2 时 |1⟩ 的布居为 sin²(ωt/2)"""
        model = unitary_model(2, omega=1.3)
        rho0 = from_pure(basis_state(2, 0))
        for t in (0.3, 1.0, math.pi):
            rho = evolve_von_neumann(rho0, model.hamiltonian, t)
            self.assertAlmostEqual(rho.matrix[1, 1].real, math.sin(1.3 * t / 2) ** 2, places=12)

    def test_non_hermitian_rejected(self):
        with self.assertRaises(StateValidationError):
            evolve_von_neumann(maximally_mixed(2), np.array([[0, 1], [0, 0]]), 1.0)
        with self.assertRaises(StateValidationError):
            evolve_von_neumann(maximally_mixed(3), np.eye(2), 1.0)


class TestLindblad(unittest.TestCase):
    """Lindblad 积分测试类"""

    def test_trace_preserved_random_models(self):
        """50 个随机模型积分到 t=1，迹漂移小于 1e-9"""
        rng = make_rng(21)
        for _ in range(50):
            dim = int(rng.integers(2, 5))
            ops = [random_hermitian(rng, dim, 0.2) + 1j * random_hermitian(rng, dim, 0.2)
                   for _ in range(int(rng.integers(1, 3)))]
            model = LindbladModel(random_hermitian(rng, dim), tuple(ops))
            rho0 = from_pure(random_pure_state(rng, dim))
            trajectory = evolve_lindblad(model, rho0, np.linspace(0.0, 1.0, 5), dt_max=0.01)
            for state in trajectory.states:
                self.assertLess(abs(np.trace(state.matrix).real - 1.0), 1e-9)

    def test_rhs_is_traceless(self):
        rng = make_rng(22)
        model = LindbladModel(random_hermitian(rng, 3), (random_hermitian(rng, 3),))
        drho = lindblad_rhs(model, random_density(rng, 3))
        self.assertLess(abs(np.trace(drho)), 1e-12)

    def test_rhs_dephasing_coherence(self):
        """H = 0、L = √γσ_z 时 dρ01/dt = −2γρ01，布居不变"""
        gamma = 0.7
        rho = random_density(make_rng(23), 2)
        drho = lindblad_rhs(dephasing_model(gamma), rho)
        self.assertLess(abs(drho[0, 1] + 2.0 * gamma * rho.matrix[0, 1]), 1e-14)
        self.assertLess(abs(drho[1, 0] + 2.0 * gamma * rho.matrix[1, 0]), 1e-14)
        self.assertLess(float(np.max(np.abs(np.diag(drho)))), 1e-14)

    def test_maximally_mixed_is_stationary(self):
        """厄米 L 时 I/n 为稳态"""
        rng = make_rng(24)
        for dim in (2, 3, 4):
            model = LindbladModel(random_hermitian(rng, dim), (random_hermitian(rng, dim), random_hermitian(rng, dim)))
            drho = lindblad_rhs(model, maximally_mixed(dim))
            self.assertLess(float(np.max(np.abs(drho))), 1e-12)

    def test_states_stay_hermitian(self):
        """轨迹上每个态都是厄米矩阵"""
        rng = make_rng(25)
        ops = (random_hermitian(rng, 3, 0.3) + 1j * random_hermitian(rng, 3, 0.3), random_hermitian(rng, 3, 0.3))
        model = LindbladModel(random_hermitian(rng, 3), ops)
        trajectory = evolve_lindblad(model, from_pure(random_pure_state(rng, 3)), np.linspace(0.0, 2.0, 9), dt_max=0.01)
        for state in trajectory.states:
            self.assertLessEqual(float(np.max(np.abs(state.matrix - state.matrix.conj().T))), 1e-12)

    def test_empty_operators_keep_entropy(self):
        """无 Lindblad 算符时整条轨迹熵变化不超过 1e-8"""
        rng = make_rng(26)
        model = LindbladModel(random_hermitian(rng, 3))
        rho0 = random_density(rng, 3)
        trajectory = evolve_lindblad(model, rho0, np.linspace(0.0, 2.0, 11), dt_max=0.002)
        s0 = vn_entropy(rho0)
        self.assertLessEqual(max(abs(s - s0) for s in trajectory.entropies), 1e-8)

    def test_step_halving_error_ratio(self):
        """步长减半，与退相位解析解的终态误差至少缩小8倍"""
        gamma = 0.5
        t_end = 2.0

        def final_error(dt):
            final = evolve_lindblad(dephasing_model(gamma), _plus_state(), [0.0, t_end], dt_max=dt).final
            exact = np.array([[0.5, 0.5 * math.exp(-2.0 * gamma * t_end)],
                              [0.5 * math.exp(-2.0 * gamma * t_end), 0.5]])
            return float(np.max(np.abs(final.matrix - exact)))

        coarse, fine = final_error(0.2), final_error(0.1)
        self.assertGreater(fine, 0.0)
        self.assertGreaterEqual(coarse / fine, 8.0)

    def test_dephasing_envelope(self):
        """退相位下 |ρ01| = ½ e^{-2γt}，γt ∈ {0.5, 1, 2}"""
        gamma = 0.5
        model = dephasing_model(gamma)
        t_grid = [0.0, 1.0, 2.0, 4.0]
        trajectory = evolve_lindblad(model, _plus_state(), t_grid, dt_max=0.001)
        for t, state in zip(trajectory.times[1:], trajectory.states[1:]):
            expected = 0.5 * math.exp(-2.0 * gamma * t)
            self.assertLess(abs(abs(state.matrix[0, 1]) - expected), 1e-6)

    def test_dephasing_entropy_limit(self):
        """长时间后熵趋于 ln 2，且单调不减"""
        trajectory = evolve_lindblad(dephasing_model(0.5), _plus_state(), np.linspace(0.0, 20.0, 21), dt_max=0.01)
        self.assertLess(abs(trajectory.entropies[-1] - math.log(2)), 1e-6)
        self.assertTrue(all(b >= a - 1e-12 for a, b in zip(trajectory.entropies, trajectory.entropies[1:])))
        self.assertTrue(np.all(entropy_production(trajectory) >= -1e-9))

    def test_unitary_model_matches_exact(self):
        """无耗散时积分结果与精确幺正演化一致"""
        model = unitary_model(2, omega=1.0)
        rho0 = from_pure(basis_state(2, 0))
        trajectory = evolve_lindblad(model, rho0, [0.0, math.pi], dt_max=0.01)
        exact = evolve_von_neumann(rho0, model.hamiltonian, math.pi)
        np.testing.assert_allclose(trajectory.final.matrix, exact.matrix, atol=1e-8)

    def test_amplitude_damping_decay(self):
        """衰减模型激发态布居按 e^{-γt} 衰减"""
        gamma = 0.8
        rho0 = from_pure(basis_state(2, 1))
        trajectory = evolve_lindblad(amplitude_damping_model(gamma), rho0, [0.0, 1.0, 2.0], dt_max=0.001)
        for t, state in zip(trajectory.times, trajectory.states):
            self.assertAlmostEqual(state.matrix[1, 1].real, math.exp(-gamma * t), places=8)

    def test_unstable_step_raises(self):
        """步长过大时报 IntegrationError"""
        with self.assertRaises(IntegrationError):
            evolve_lindblad(dephasing_model(50.0), _plus_state(), [0.0, 1.0], dt_max=0.5)

    def test_bad_grid(self):
        model = dephasing_model(0.5)
        with self.assertRaises(StateValidationError):
            evolve_lindblad(model, _plus_state(), [0.0, 0.0], dt_max=0.1)
        with self.assertRaises(StateValidationError):
            evolve_lindblad(model, _plus_state(), [0.0, 1.0], dt_max=0.0)
        with self.assertRaises(StateValidationError):
            evolve_lindblad(model, maximally_mixed(3), [0.0, 1.0], dt_max=0.1)

    def test_operator_shape_mismatch(self):
        with self.assertRaises(StateValidationError):
            LindbladModel(np.eye(2), (np.eye(3),))
        with self.assertRaises(StateValidationError):
            dephasing_model(-1.0)


class TestTrajectory(unittest.TestCase):
    """轨迹导出测试类"""

    def test_csv_layout(self):
        trajectory = evolve_lindblad(dephasing_model(0.5), _plus_state(), [0.0, 0.5], dt_max=0.1)
        lines = trajectory.to_csv().splitlines()
        self.assertEqual(lines[0], 't,S,rho_re_00,rho_im_00,rho_re_01,rho_im_01,'
                                   'rho_re_10,rho_im_10,rho_re_11,rho_im_11')
        self.assertEqual(len(lines), 3)
        first = [float(v) for v in lines[1].split(',')]
        self.assertEqual(first[0], 0.0)
        self.assertAlmostEqual(first[1], 0.0, places=12)
        self.assertAlmostEqual(first[2], 0.5, places=12)

    def test_length_mismatch(self):
        with self.assertRaises(StateValidationError):
            Trajectory([0.0, 1.0], [maximally_mixed(2)])


class TestEnvironment(unittest.TestCase):
    """环境退相干与坍缩时间测试类"""

    def test_system_entropy_matches_environment(self):
        """整体纯态演化后 S_sys = S_env，宇宙熵为0"""
        rng = make_rng(31)
        layout = SpaceLayout((2, 3))
        for _ in range(10):
            report = environmental_decoherence(random_pure_state(rng, 6), random_hermitian(rng, 6), layout, 1.3)
            self.assertLess(abs(report.system_entropy - report.environment_entropy), 1e-10)
            self.assertLess(report.universe_entropy, 1e-10)

    def test_requires_two_factors(self):
        with self.assertRaises(StateValidationError):
            environmental_decoherence(basis_state(2, 0), np.eye(2), SpaceLayout((2,)), 1.0)

    def test_collapse_time(self):
        """τ = ħ/ΔE"""
        self.assertEqual(dp_collapse_time(2.0), 0.5)
        self.assertEqual(dp_collapse_time(4.0, hbar=2.0), 0.5)
        with self.assertRaises(StateValidationError):
            dp_collapse_time(0.0)


if __name__ == '__main__':
    unittest.main()
