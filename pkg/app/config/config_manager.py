# -*- coding: utf-8 -*-
"""配置管理模块

负责读取和管理应用程序配置（数值容差、单位、日志等）
"""

import os
import copy
import yaml
import logging
from typing import Dict, Any, Optional

# 配置日志
logger = logging.getLogger(__name__)

# 默认配置
DEFAULT_CONFIG: Dict[str, Any] = {
    'logging': {
        'level': 'INFO',
        'file': 'timeprimer.log'
    },
    'numerics': {
        'hermitian_tol': 1e-10,
        'trace_tol': 1e-10,
        'psd_tol': 1e-10,
        'normalization_tol': 1e-9,
        'zero_eigen_tol': 1e-12,
        'positivity_abort_tol': 1e-7,
        'trace_drift_per_time': 1e-9,
        'resolvent_cond_max': 1e12
    },
    'units': {
        'boltzmann': 1.0,
        'hbar': 1.0
    },
    'measurement': {
        'detectability_ratio': 10.0
    },
    'ledger': {
        'merge_tol': 1e-8
    },
    'kaon': {
        'delta_scale': 1e-4
    },
    'output': {
        'significant_digits': 17
    },
    'parallel': {
        'max_workers': 4
    }
}


class ConfigManager:
    """配置管理器类"""

    def __init__(self, config_file_path: Optional[str] = None):
        """初始化配置管理器

        Args:
            config_file_path: 配置文件路径，默认使用项目根目录下的config.yaml
        """
        self.config: Dict[str, Any] = {}
        self.config_file_path: Optional[str] = config_file_path
        self._load_config()

    def _load_config(self) -> None:
        """加载配置文件"""
        if self.config_file_path is None:
            project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
            self.config_file_path = os.path.join(project_root, 'config.yaml')

        default_config = copy.deepcopy(DEFAULT_CONFIG)

        # 加载配置文件
        if os.path.exists(self.config_file_path):
            try:
                with open(self.config_file_path, 'r', encoding='utf-8') as f:
                    self.config = yaml.safe_load(f) or {}
                    logger.debug(f"成功加载配置文件: {self.config_file_path}")
            except Exception as e:
                logger.error(f"加载配置文件失败: {str(e)}")
                self.config = default_config
        else:
            logger.warning(f"配置文件不存在: {self.config_file_path}，使用默认配置")
            self.config = default_config

        # 合并默认配置
        for key, value in default_config.items():
            if key not in self.config or self.config[key] is None:
                self.config[key] = value
            elif isinstance(value, dict):
                for sub_key, sub_value in value.items():
                    if sub_key not in self.config[key]:
                        self.config[key][sub_key] = sub_value

    def get_tolerance(self, name: str) -> float:
        """获取数值容差

        Args:
            name: 容差名称，如 'hermitian_tol'

        Returns:
            容差值
        """
        if name not in DEFAULT_CONFIG['numerics']:
            raise KeyError(f"未知的容差名称: {name}")
        return float(self.config['numerics'].get(name, DEFAULT_CONFIG['numerics'][name]))

    def get_logging_level(self) -> str:
        """获取日志级别"""
        return str(self.config.get('logging', {}).get('level', 'INFO')).upper()

    def get_logging_file(self) -> Optional[str]:
        """获取日志文件路径

        Returns:
            日志文件的绝对路径，未配置时返回None
        """
        log_file = self.config.get('logging', {}).get('file')
        if not log_file:
            return None

        # 转换为绝对路径
        if not os.path.isabs(log_file):
            project_root = os.path.dirname(os.path.abspath(self.config_file_path))
            log_file = os.path.join(project_root, log_file)

        return os.path.abspath(log_file)

    def get_boltzmann(self) -> float:
        """获取输出熵的缩放常数 k_B"""
        return float(self.config['units'].get('boltzmann', 1.0))

    def get_hbar(self) -> float:
        """获取约化普朗克常数 ħ"""
        return float(self.config['units'].get('hbar', 1.0))

    def get_detectability_ratio(self) -> float:
        """获取可探测性判据中的倍数 R"""
        return float(self.config['measurement'].get('detectability_ratio', 10.0))

    def get_merge_tol(self) -> float:
        """获取世界合并的迹距离阈值"""
        return float(self.config['ledger'].get('merge_tol', 1e-8))

    def get_delta_scale(self) -> float:
        """获取K介子模型中 δ 的默认比例"""
        return float(self.config['kaon'].get('delta_scale', 1e-4))

    def get_significant_digits(self) -> int:
        """获取浮点输出的有效数字位数"""
        return int(self.config['output'].get('significant_digits', 17))

    def get_max_workers(self) -> int:
        """获取并行扫描的最大线程数"""
        return max(1, int(self.config['parallel'].get('max_workers', 4)))

    def reload_config(self) -> None:
        """重新加载配置文件"""
        self._load_config()


# 创建全局配置管理器实例
config_manager = ConfigManager()
