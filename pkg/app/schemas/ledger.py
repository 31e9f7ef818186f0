"""世界账本运行配置的Pydantic模型"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class LedgerConfig(BaseModel):
    """世界账本配置，script 为相对配置文件所在目录的路径"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    script: str = Field(..., min_length=1, description="脚本文件路径")
    merge_tol: Optional[float] = Field(None, ge=0, description="合并阈值，缺省取全局配置")
    strong: bool = Field(False, description="是否采用强版本（允许不可区分的分裂）")
