"""Pydantic模型定义模块

包含各子命令的运行配置以及运行摘要的数据验证模型
"""
from .measurement import MeasurementConfig
from .dynamics import LindbladConfig
from .kaon import KaonConfig
from .mixing import MixingConfig
from .ledger import LedgerConfig
from .run import COMMANDS, RunConfig, RunSummary

__all__ = [
    'MeasurementConfig', 'LindbladConfig', 'KaonConfig', 'MixingConfig', 'LedgerConfig',
    'COMMANDS', 'RunConfig', 'RunSummary'
]
