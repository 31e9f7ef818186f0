# -*- coding: utf-8 -*-
"""配置模块

提供全局配置管理器"""
from .config_manager import config_manager, ConfigManager

__all__ = ['config_manager', 'ConfigManager']
