#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""测试K介子模型与 CP 破坏量 Λ

对称性检查、有效哈密顿量、微扰结果与精确投影结果的一致性
"""

import os
import sys
import math
import unittest

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.cptest import (
    KaonModel, SymmetryMaps, build_full_hamiltonian, cp_check, cpt_check, default_delta,
    effective_hamiltonian_oracle, effective_hamiltonian_perturbative, kaon_basis, kaon_model_from_phases,
    lambda_from_heff, lambda_oracle, lambda_perturbative, random_kaon_model, symmetry_maps, violation_scan
)
from app.utils.errors import SingularityError, StateValidationError
from app.utils.tools import make_rng


def _simple_model(epsilon=0.1, phi=(0.0,), h_int=(0.5 + 0.3j,), n_E=1, **kwargs):
    return kaon_model_from_phases(n_f=1, n_E=n_E, m0=1.0, E_f=[-0.5], g=[0.8], phi_f=list(phi),
                                  h_int=list(h_int), epsilon=epsilon, **kwargs)


class TestKaonModel(unittest.TestCase):
    """模型构造测试类"""

    def test_dimensions(self):
        model = _simple_model(n_E=2, h_int=(0.5, 0.4))
        self.assertEqual(model.n_sys, 4)
        self.assertEqual(model.dim, 8)
        self.assertEqual(build_full_hamiltonian(model).shape, (8, 8))
        self.assertEqual(model.E0, 1.0)

    def test_full_hamiltonian_hermitian(self):
        rng = make_rng(41)
        for _ in range(20):
            h_u = build_full_hamiltonian(random_kaon_model(rng, cp_violating=bool(rng.integers(0, 2))))
            self.assertLessEqual(float(np.max(np.abs(h_u - h_u.conj().T))), 1e-12)

    def test_validation(self):
        """ε 超出 [0, 0.2]、δ ≤ 0、环境能级重复都被拒绝"""
        with self.assertRaises(StateValidationError):
            _simple_model(epsilon=0.3)
        with self.assertRaises(StateValidationError):
            _simple_model(delta=0.0)
        with self.assertRaises(StateValidationError):
            _simple_model(n_E=2, h_int=(0.5, 0.4), E_env=[1.0, 1.0])
        with self.assertRaises(StateValidationError):
            KaonModel(n_f=1, n_E=1, m0=1.0, g=[0.8], E_f=[-0.5], h_int=[[0.5]], epsilon=0.1, delta=1e-4)

    def test_model_is_read_only(self):
        model = _simple_model()
        with self.assertRaises(ValueError):
            model.g[0] = 1.0

    def test_default_delta(self):
        """δ 默认为 delta_scale 乘以最小非零能隙"""
        self.assertAlmostEqual(default_delta(1.0, [0.0, -1.0, 1.0], scale=1e-4), 1e-4, places=18)
        self.assertAlmostEqual(_simple_model().delta, 1.5e-4, places=15)

    def test_kaon_basis(self):
        k_s, k_l = kaon_basis()
        s = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(k_s.amplitudes, [s, s])
        np.testing.assert_allclose(k_l.amplitudes, [s, -s])
        self.assertAlmostEqual(abs(np.vdot(k_s.amplitudes, k_l.amplitudes)), 0.0, places=15)


class TestSymmetry(unittest.TestCase):
    """CP 与 CPT 检查测试类"""

    def test_pairing_is_involution(self):
        pairing = SymmetryMaps(n_f=3).cp_pairing
        self.assertEqual([pairing[p] for p in pairing], list(range(8)))
        with self.assertRaises(StateValidationError):
            SymmetryMaps(n_f=1, n_E=2).permutation_matrix(5)

    def test_cp_preserving_model(self):
        """实 g 且 φ = 0 时 H_U 满足 CP"""
        model = _simple_model(n_E=2, h_int=(0.5 + 0.3j, 0.2 - 0.1j))
        self.assertTrue(cp_check(build_full_hamiltonian(model), symmetry_maps(model)))

    def test_cp_violating_model(self):
        """φ ≠ 0 时 H_w 破坏 CP 但满足 CPT"""
        model = _simple_model(phi=(1.0,))
        maps = symmetry_maps(model)
        self.assertFalse(cp_check(model.weak_hamiltonian(), maps))
        self.assertTrue(cpt_check(model.weak_hamiltonian(), maps))
        self.assertTrue(cp_check(model.interaction_block(0), maps))
        self.assertFalse(cp_check(build_full_hamiltonian(model), maps))

    def test_cpt_invariant_universe(self):
        """实的 H_int 使整体 H_U 满足 CPT，此时两种 Λ 都为0"""
        model = _simple_model(phi=(1.0,), h_int=(0.5,), h_ff=[0.3])
        self.assertTrue(cpt_check(build_full_hamiltonian(model), symmetry_maps(model)))
        self.assertEqual(lambda_perturbative(model, 0), 0)
        self.assertLess(abs(lambda_oracle(model, 0)), 1e-10)

    def test_complex_g_phase_folds_into_cp_phase(self):
        """复数 g 时 H_w 仍满足 CPT，φ = 2·arg g 时 CP 守恒"""
        alpha = 0.3
        g = 0.8 * complex(math.cos(alpha), math.sin(alpha))
        for phi, cp_expected in ((2 * alpha, True), (0.0, False)):
            model = kaon_model_from_phases(n_f=1, n_E=1, m0=1.0, E_f=[-0.5], g=[g], phi_f=[phi],
                                           h_int=[0.5 + 0.3j], epsilon=0.1)
            maps = symmetry_maps(model)
            self.assertTrue(cpt_check(model.weak_hamiltonian(), maps))
            self.assertEqual(cp_check(model.weak_hamiltonian(), maps), cp_expected)

    def test_violation_is_apparent(self):
        """Λ ≠ 0 时系统自身的 H_s + ε·H_w 仍满足 CPT"""
        model = _simple_model(phi=(math.pi / 2,), h_ff=[0.3])
        maps = symmetry_maps(model)
        intrinsic = model.strong_hamiltonian() + model.epsilon * model.weak_hamiltonian()
        self.assertTrue(cpt_check(intrinsic, maps))
        self.assertFalse(cp_check(intrinsic, maps))
        self.assertGreater(abs(lambda_perturbative(model, 0)), 1e-6)
        self.assertGreater(abs(lambda_oracle(model, 0)), 1e-6)


class TestEffectiveHamiltonian(unittest.TestCase):
    """有效哈密顿量与 Λ 测试类"""

    def test_zero_epsilon(self):
        """ε = 0 时 H_eff = diag(m0, m0)，Λ = 0"""
        model = _simple_model(epsilon=0.0, n_E=2, h_int=(0.5, 0.4), E_env=[0.0, 1.5])
        for beta in range(2):
            np.testing.assert_allclose(effective_hamiltonian_perturbative(model, beta), np.eye(2), atol=1e-15)
            np.testing.assert_allclose(effective_hamiltonian_oracle(model, beta), np.eye(2), atol=1e-12)
            self.assertEqual(lambda_perturbative(model, beta), 0)
            self.assertLess(abs(lambda_oracle(model, beta)), 1e-12)

    def test_lambda_equals_diagonal_difference(self):
        """Λ 公式与微扰 H_eff 对角元之差一致"""
        rng = make_rng(42)
        for _ in range(20):
            model = random_kaon_model(rng, cp_violating=True)
            for beta in range(model.n_E):
                direct = lambda_perturbative(model, beta)
                from_heff = lambda_from_heff(effective_hamiltonian_perturbative(model, beta))
                self.assertLess(abs(direct - from_heff), 1e-12 * max(1.0, abs(direct)))

    def test_cp_preserving_gives_zero_lambda(self):
        """50 个 CP 守恒模型，两种 Λ 都不超过 1e-10"""
        rng = make_rng(43)
        for _ in range(50):
            model = random_kaon_model(rng, cp_violating=False)
            self.assertTrue(cp_check(build_full_hamiltonian(model), symmetry_maps(model)))
            for beta in range(model.n_E):
                self.assertLessEqual(abs(lambda_perturbative(model, beta)), 1e-10)
                self.assertLessEqual(abs(lambda_oracle(model, beta)), 1e-10)

    def test_cp_violating_third_order_agreement(self):
        """20 个 CP 破坏模型，Λ 非零且误差按 ε³ 缩小（ratio ≥ 6）"""
        rng = make_rng(44)
        for _ in range(20):
            model = random_kaon_model(rng, cp_violating=True, epsilon=0.1)
            for report in violation_scan(model, range(model.n_E), [0.1, 0.05], max_workers=2):
                self.assertGreater(abs(report.lambda_pert), 1e-6)
                self.assertGreaterEqual(report.ratio, 6.0)
                self.assertLessEqual(report.ratio, 10.0)

    def test_lambda_scales_as_epsilon_squared(self):
        """微扰 Λ 严格正比于 ε²，精确 Λ 在 5% 内"""
        model = random_kaon_model(make_rng(45), cp_violating=True)
        ratio = lambda_perturbative(model.with_epsilon(0.1), 0) / lambda_perturbative(model.with_epsilon(0.05), 0)
        self.assertAlmostEqual(abs(ratio), 4.0, places=10)
        ratio = lambda_oracle(model.with_epsilon(0.1), 0) / lambda_oracle(model.with_epsilon(0.05), 0)
        self.assertLess(abs(abs(ratio) - 4.0), 0.2)

    def test_oracle_close_to_perturbative(self):
        """两种有效哈密顿量相差 O(ε³)"""
        model = random_kaon_model(make_rng(46), cp_violating=True, epsilon=0.05)
        diff = effective_hamiltonian_oracle(model, 0) - effective_hamiltonian_perturbative(model, 0)
        self.assertLess(float(np.max(np.abs(diff))), 1e-2)

    def test_decay_part_nonpositive(self):
        """δ > 0 时 H_eff 反厄米部分的对角元不为正（衰减）"""
        rng = make_rng(47)
        for _ in range(20):
            model = random_kaon_model(rng, cp_violating=bool(rng.integers(0, 2)))
            for beta in range(model.n_E):
                for h_eff in (effective_hamiltonian_perturbative(model, beta), effective_hamiltonian_oracle(model, beta)):
                    decay = (h_eff - h_eff.conj().T) / 2j
                    self.assertTrue(np.all(np.real(np.diag(decay)) <= 1e-14))

    def test_singular_denominators(self):
        """E_f = m0 时：δ = 0 的微扰分母为零，δ 极小时预解式病态"""
        model = kaon_model_from_phases(n_f=1, n_E=1, m0=1.0, E_f=[1.0], g=[0.8], phi_f=[1.0],
                                       h_int=[0.5 + 0.3j], epsilon=0.1, delta=1e-14)
        with self.assertRaises(SingularityError):
            effective_hamiltonian_perturbative(model, 0, delta=0.0)
        with self.assertRaises(SingularityError):
            lambda_perturbative(model, 0, delta=0.0)
        with self.assertRaises(SingularityError):
            effective_hamiltonian_oracle(model, 0)

    def test_beta_out_of_range(self):
        with self.assertRaises(StateValidationError):
            lambda_oracle(_simple_model(), 1)


class TestViolationScan(unittest.TestCase):
    """Λ 扫描测试类"""

    def test_order_and_fields(self):
        """结果按 β 外层、ε 内层排列"""
        model = _simple_model(phi=(1.0,), n_E=2, h_int=(0.5 - 0.3j, 0.2 - 0.4j), h_ff=[0.3, 0.2],
                              E_env=[0.0, 1.5])
        reports = violation_scan(model, [1, 0], [0.1, 0.05], max_workers=3)
        self.assertEqual([(r.beta, r.epsilon) for r in reports], [(1, 0.1), (1, 0.05), (0, 0.1), (0, 0.05)])
        self.assertEqual(list(reports[0].to_dict())[:2], ['beta', 'epsilon'])
        self.assertEqual(len(reports[0].csv_row()), 7)

    def test_empty_beta_list(self):
        self.assertEqual(violation_scan(_simple_model(phi=(1.0,)), [], [0.1, 0.05], max_workers=2), [])

    def test_lambda_grows_with_cp_phase(self):
        """φ 取 0, π/4, π/2 时 |Λ| 随 |sin φ| 单调增大"""
        pert, oracle = [], []
        for phi in (0.0, math.pi / 4, math.pi / 2):
            model = _simple_model(phi=(phi,), h_ff=[0.3])
            pert.append(abs(lambda_perturbative(model, 0)))
            oracle.append(abs(lambda_oracle(model, 0)))
        self.assertEqual(pert[0], 0.0)
        self.assertLess(oracle[0], 1e-10)
        self.assertTrue(pert[0] < pert[1] < pert[2])
        self.assertTrue(oracle[0] < oracle[1] < oracle[2])

    def test_zero_error_gives_nan_ratio(self):
        """误差为0时 ratio 为 nan"""
        model = _simple_model(epsilon=0.0)
        report = violation_scan(model, [0], [0.0], max_workers=1)[0]
        self.assertTrue(math.isnan(report.ratio))
        self.assertEqual(report.error, 0.0)


if __name__ == '__main__':
    unittest.main()
