# -*- coding: utf-8 -*-
"""工具函数模块

包含项目中使用的各种工具函数：日志初始化、浮点数格式化、矩阵文本编解码、
扁平配置解析以及CSV/JSON输出
"""

import os
import io
import re
import sys
import csv
import json
import logging
import contextlib
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO

import numpy as np

from app.config.config_manager import config_manager
from app.utils.errors import ConfigError, StateValidationError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """初始化日志

    标准输出保留给数据产物，因此控制台日志写到标准错误

    参数:
        level: 日志级别，默认取配置文件
        log_file: 日志文件路径，默认取配置文件，为空时不写文件
    """
    level = (level or config_manager.get_logging_level()).upper()
    if log_file is None:
        log_file = config_manager.get_logging_file()

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        try:
            ensure_dir_exists(os.path.dirname(log_file))
            handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
        except OSError as e:
            logger.warning(f"无法创建日志文件 {log_file}: {str(e)}")

    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT,
                        handlers=handlers, force=True)


def ensure_dir_exists(dir_path: str) -> None:
    """确保指定的目录存在，如果不存在则创建

    参数:
        dir_path: 目录路径
    """
    if dir_path and not os.path.exists(dir_path):
        os.makedirs(dir_path)


def make_rng(seed: int) -> np.random.Generator:
    """根据种子创建唯一的伪随机数流"""
    return np.random.default_rng(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))


def format_float(value: float, digits: Optional[int] = None) -> str:
    """按固定有效数字格式化浮点数，保证重复运行字节一致"""
    digits = digits or config_manager.get_significant_digits()
    return format(float(value), f'.{digits}g')


def format_complex(value: complex, digits: Optional[int] = None) -> str:
    """格式化复数为 're+imj' 形式"""
    value = complex(value)
    re_part = format_float(value.real, digits)
    im_part = format_float(value.imag, digits)
    sign = '' if im_part.startswith('-') else '+'
    return f'{re_part}{sign}{im_part}j'


def format_matrix(matrix: np.ndarray, digits: Optional[int] = None) -> str:
    """矩阵转文本：每行一个矩阵行，元素以空白分隔"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    return '\n'.join(' '.join(format_complex(v, digits) for v in row) for row in matrix) + '\n'


def parse_matrix(text: str) -> np.ndarray:
    """解析矩阵文本格式

    Raises:
        StateValidationError: 行长度不一致或元素不可解析
    """
    rows: List[List[complex]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([complex(token) for token in line.split()])
        except ValueError as e:
            raise StateValidationError(f"矩阵第{line_no}行无法解析: {str(e)}")
    if not rows:
        raise StateValidationError("矩阵文本为空")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise StateValidationError("矩阵各行长度不一致")
    matrix = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(matrix)):
        raise StateValidationError("矩阵包含 NaN 或 Inf")
    return matrix


_KEY_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


def parse_flat_config(text: str) -> Dict[str, str]:
    """解析扁平的 'key = value' 配置文本

    支持 '#' 注释和空行；重复键、缺少等号、非法键名均报错并给出行号

    Returns:
        键到原始字符串值的映射
    """
    result: Dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("缺少 '='", line=line_no)
        key, value = (part.strip() for part in line.split('=', 1))
        if not _KEY_PATTERN.match(key):
            raise ConfigError(f"非法的键名 '{key}'", line=line_no)
        if key in result:
            raise ConfigError(f"重复的键 '{key}'", line=line_no)
        if value == '':
            raise ConfigError(f"键 '{key}' 缺少取值", line=line_no)
        result[key] = value
    return result


def split_list(value: str) -> List[str]:
    """把逗号或空白分隔的列表拆成元素"""
    return [token for token in re.split(r'[,\s]+', value.strip()) if token]


def parse_complex_pairs(value: str) -> List[complex]:
    """解析 're,im' 成对列表，如 '0.1,0.2 0.3,-0.4' 或 '0.1,0.2,0.3,-0.4'"""
    numbers = [float(token) for token in split_list(value)]
    if len(numbers) % 2 != 0:
        raise ValueError("复数列表需要成对的实部和虚部")
    return [complex(numbers[i], numbers[i + 1]) for i in range(0, len(numbers), 2)]


@contextlib.contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """打开输出目标，路径为空或 '-' 时使用标准输出"""
    if not path or path == '-':
        yield sys.stdout
        return
    ensure_dir_exists(os.path.dirname(os.path.abspath(path)))
    with open(path, 'w', encoding='utf-8', newline='') as f:
        yield f


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """生成CSV文本，浮点数按固定有效数字输出"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def _to_jsonable(obj: Any) -> Any:
    """把numpy类型和复数转换为JSON可表示的对象"""
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_to_jsonable(obj.real), _to_jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        # 先按有效数字舍入，json 再输出该值的最短往返表示
        return float(format_float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render_json(obj: Any) -> str:
    """生成JSON文本（键顺序固定）"""
    return json.dumps(_to_jsonable(obj), indent=2, ensure_ascii=False) + '\n'


def matrix_to_pairs(matrix: np.ndarray) -> List[List[float]]:
    """矩阵按行优先展开为 [实部, 虚部] 对列表"""
    flat = np.asarray(matrix, dtype=complex).reshape(-1)
    return [[float(v.real), float(v.imag)] for v in flat]

