# -*- coding: utf-8 -*-
"""命令行批处理包"""
from .loader import CONFIG_MODELS, build_parser, parse_args, load_config
from .runner import RUNNERS, execute, main, summary_target

__all__ = ['CONFIG_MODELS', 'build_parser', 'parse_args', 'load_config',
           'RUNNERS', 'execute', 'main', 'summary_target']
