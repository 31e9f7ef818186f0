# -*- coding: utf-8 -*-
"""命令行参数解析与运行配置加载"""

import os
import argparse
import logging
from typing import Dict, Optional, Sequence, Type

from pydantic import BaseModel, ValidationError

from app.schemas import (
    COMMANDS, KaonConfig, LedgerConfig, LindbladConfig, MeasurementConfig, MixingConfig, RunConfig
)
from app.utils.errors import ConfigError, UsageError
from app.utils.tools import parse_flat_config

logger = logging.getLogger(__name__)

CONFIG_MODELS: Dict[str, Type[BaseModel]] = {
    'measure': MeasurementConfig,
    'lindblad': LindbladConfig,
    'kaon': KaonConfig,
    'mix': MixingConfig,
    'ledger': LedgerConfig,
}


class _ArgumentParser(argparse.ArgumentParser):
    """出错时抛出 UsageError 而不是直接退出"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='timeprimer',
        description='时间之矢数值实验：测量流程、Lindblad 演化、K介子 CPT 检验、相空间混合与世界账本',
    )
    parser.add_argument('command', choices=COMMANDS, help='子命令')
    parser.add_argument('--config', required=True, help='扁平 key = value 配置文件')
    parser.add_argument('--seed', type=int, default=0, help='随机数种子（默认0）')
    parser.add_argument('--out', default=None, help="输出文件，缺省或 '-' 为标准输出")
    parser.add_argument('--format', choices=('csv', 'json'), default='csv', help='输出格式（默认csv）')
    parser.add_argument('--log-level', default=None, help='日志级别，覆盖 config.yaml')
    parser.add_argument('--summary', default=None, help='运行摘要JSON路径')
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """解析命令行参数

    Raises:
        UsageError: 未知子命令或参数、缺少 --config、参数取值非法
    """
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    out_path = None if args.out in (None, '-') else args.out
    try:
        return RunConfig(command=args.command, config_path=args.config, seed=args.seed,
                         out_path=out_path, format=args.format, log_level=args.log_level,
                         summary_path=args.summary)
    except ValidationError as e:
        raise UsageError(_first_error(e)) from e


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    key = '.'.join(str(part) for part in first['loc'])
    return f"{key}: {first['msg']}" if key else first['msg']


def load_config(path: str, command: str) -> BaseModel:
    """加载并校验子命令的运行配置

    Raises:
        ConfigError: 文件不可读、解析错误（带行号）或校验失败（带键名）
    """
    if command not in CONFIG_MODELS:
        raise UsageError(f"未知子命令: {command}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {str(e)}") from e

    values = parse_flat_config(text)
    if command == 'ledger' and 'script' in values and not os.path.isabs(values['script']):
        values['script'] = os.path.join(os.path.dirname(os.path.abspath(path)), values['script'])

    try:
        config = CONFIG_MODELS[command](**values)
    except ValidationError as e:
        first = e.errors()[0]
        key = '.'.join(str(part) for part in first['loc']) or None
        raise ConfigError(first['msg'], key=key) from e
    logger.debug(f"已加载 {command} 配置: {path}")
    return config
