#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""测试工具函数与配置管理器"""

import os
import sys
import json
import shutil
import tempfile
import unittest

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.config.config_manager import ConfigManager
from app.utils.errors import ConfigError, StateValidationError
from app.utils.tools import (
    format_complex, format_float, make_rng, matrix_to_pairs, parse_complex_pairs,
    parse_flat_config, render_csv, render_json, split_list
)


class TestFlatConfig(unittest.TestCase):
    """扁平配置解析测试类"""

    def test_parse(self):
        text = "# 注释\nc_up = 0.6\n\nphase_mode = analytic  # 行尾注释\npsi = 1, 1\n"
        self.assertEqual(parse_flat_config(text), {'c_up': '0.6', 'phase_mode': 'analytic', 'psi': '1, 1'})

    def test_errors_carry_line(self):
        """重复键、缺少等号、非法键名、空值都报出行号"""
        cases = {
            "a = 1\na = 2\n": 2,
            "a = 1\n\nb\n": 3,
            "1a = 2\n": 1,
            "a =\n": 1,
        }
        for text, line in cases.items():
            with self.assertRaises(ConfigError) as ctx:
                parse_flat_config(text)
            self.assertEqual(ctx.exception.line, line)
            self.assertEqual(ctx.exception.exit_code, 2)

    def test_lists(self):
        self.assertEqual(split_list(" 0.1, 0.2  0.3,"), ['0.1', '0.2', '0.3'])
        self.assertEqual(parse_complex_pairs("0.1,0.2 0.3,-0.4"), [0.1 + 0.2j, 0.3 - 0.4j])
        with self.assertRaises(ValueError):
            parse_complex_pairs("0.1,0.2,0.3")


class TestFormatting(unittest.TestCase):
    """数值格式化测试类"""

    def test_format_float(self):
        self.assertEqual(format_float(0.5), '0.5')
        self.assertEqual(format_float(0.1), '0.10000000000000001')
        self.assertEqual(float(format_float(np.log(2))), float(np.log(2)))
        self.assertEqual(format_float(1.0 / 3.0, digits=4), '0.3333')

    def test_format_complex(self):
        self.assertEqual(format_complex(0.5 - 0.25j), '0.5-0.25j')
        self.assertEqual(format_complex(1j), '0+1j')

    def test_render_csv(self):
        text = render_csv(['id', 'value'], [('W0', 0.25), ('W1', 1)])
        self.assertEqual(text, 'id,value\nW0,0.25\nW1,1\n')

    def test_render_json(self):
        """numpy 类型与复数可以序列化，nan 输出为 NaN"""
        text = render_json({'a': np.float64(0.5), 'b': np.int64(3), 'c': 1 + 2j, 'd': float('nan'),
                            'e': np.array([1.0, 2.0]), 'f': np.bool_(True)})
        data = json.loads(text)
        self.assertEqual(data['a'], 0.5)
        self.assertEqual(data['b'], 3)
        self.assertEqual(data['c'], [1.0, 2.0])
        self.assertIn('NaN', text)
        self.assertEqual(data['e'], [1.0, 2.0])
        self.assertIs(data['f'], True)

    def test_matrix_pairs(self):
        matrix = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
        self.assertEqual(matrix_to_pairs(matrix), [[0.5, 0.0], [0.0, 0.5], [-0.0, -0.5], [0.5, 0.0]])

    def test_render_json_float_form(self):
        """JSON 浮点数为17位有效数字舍入后的最短往返表示"""
        value = 1.0 / 3.0
        data = json.loads(render_json({'x': value, 'y': 0.1}))
        self.assertEqual(data['x'], float(format_float(value)))
        self.assertEqual(data['y'], 0.1)
        self.assertEqual(render_json({'y': 0.1}), '{\n  "y": 0.1\n}\n')

    def test_rng_streams(self):
        """同一种子产生相同的随机数流"""
        self.assertEqual(make_rng(7).random(), make_rng(7).random())
        self.assertNotEqual(make_rng(7).random(), make_rng(8).random())


class TestConfigManager(unittest.TestCase):
    """配置管理器测试类"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_path = os.path.join(self.temp_dir, 'config.yaml')

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_partial_file_merged_with_defaults(self):
        with open(self.config_path, 'w', encoding='utf-8') as f:
            f.write("numerics:\n  trace_tol: 1.0e-8\nledger:\n  merge_tol: 0.001\nlogging:\n  file: 'logs/run.log'\n")
        manager = ConfigManager(self.config_path)
        self.assertEqual(manager.get_tolerance('trace_tol'), 1e-8)
        self.assertEqual(manager.get_tolerance('hermitian_tol'), 1e-10)
        self.assertEqual(manager.get_merge_tol(), 0.001)
        self.assertEqual(manager.get_hbar(), 1.0)
        self.assertEqual(manager.get_significant_digits(), 17)
        self.assertEqual(manager.get_logging_file(), os.path.join(self.temp_dir, 'logs', 'run.log'))

    def test_missing_file_uses_defaults(self):
        manager = ConfigManager(os.path.join(self.temp_dir, 'absent.yaml'))
        self.assertEqual(manager.get_detectability_ratio(), 10.0)
        self.assertEqual(manager.get_tolerance('resolvent_cond_max'), 1e12)
        with self.assertRaises(KeyError):
            manager.get_tolerance('nonexistent_tol')

    def test_reload(self):
        with open(self.config_path, 'w', encoding='utf-8') as f:
            f.write("parallel:\n  max_workers: 2\n")
        manager = ConfigManager(self.config_path)
        self.assertEqual(manager.get_max_workers(), 2)
        with open(self.config_path, 'w', encoding='utf-8') as f:
            f.write("parallel:\n  max_workers: 0\n")
        manager.reload_config()
        self.assertEqual(manager.get_max_workers(), 1)


if __name__ == '__main__':
    unittest.main()
