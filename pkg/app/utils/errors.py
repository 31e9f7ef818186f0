# -*- coding: utf-8 -*-
"""异常定义模块

所有模拟相关的异常都继承自 SimulationError，并携带命令行退出码
"""
from typing import Optional


class SimulationError(Exception):
    """模拟异常基类"""
    exit_code = 3


class UsageError(SimulationError):
    """命令行用法错误"""
    exit_code = 1


class ConfigError(SimulationError):
    """配置文件解析或校验错误

    Args:
        message: 错误描述
        line: 出错的行号（解析错误时）
        key: 出错的配置键（校验错误时）
    """
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"第{line}行: {message}"
        elif key is not None:
            message = f"配置项 {key}: {message}"
        super().__init__(message)


class IntegrationError(SimulationError):
    """数值积分失败（正定性或迹守恒被破坏）"""
    exit_code = 3


class SingularityError(SimulationError):
    """分母为零或预解式病态"""
    exit_code = 3


class StateValidationError(SimulationError, ValueError):
    """量子态或参数不满足约束"""
    exit_code = 4


class SequencingError(SimulationError):
    """测量阶段顺序错误"""
    exit_code = 4


class SplitRejectedError(SimulationError):
    """世界分裂被拒绝"""
    exit_code = 4


class ScriptError(SimulationError):
    """账本脚本执行失败

    Args:
        index: 出错命令的序号（从0开始）
        command: 出错的命令文本
        message: 错误描述
    """
    exit_code = 4

    def __init__(self, index: int, command: str, message: str):
        self.index = index
        self.command = command
        super().__init__(f"脚本第{index}条命令 '{command}' 失败: {message}")
