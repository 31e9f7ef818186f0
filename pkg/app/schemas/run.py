"""命令行运行配置与运行摘要的Pydantic模型"""
from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

COMMANDS = ('measure', 'lindblad', 'kaon', 'mix', 'ledger')

Command = Literal['measure', 'lindblad', 'kaon', 'mix', 'ledger']


class RunConfig(BaseModel):
    """一次命令行运行"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    command: Command = Field(..., description="子命令")
    config_path: str = Field(..., min_length=1, description="配置文件路径")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="随机数种子")
    out_path: Optional[str] = Field(None, description="输出路径，None 表示标准输出")
    format: Literal['csv', 'json'] = Field('csv', description="输出格式")
    log_level: Optional[str] = Field(None, description="日志级别")
    summary_path: Optional[str] = Field(None, description="运行摘要路径")


class RunSummary(BaseModel):
    """运行摘要"""
    model_config = ConfigDict(extra='forbid')

    schema_version: Literal[1] = Field(1, description="摘要格式版本")
    command: Command = Field(..., description="子命令")
    seed: int = Field(..., description="随机数种子")
    wall_time: float = Field(..., ge=0, description="耗时（秒）")
    key_metrics: Dict[str, Union[int, float, str, bool, None]] = Field(default_factory=dict,
                                                                       description="命令相关的关键指标")
