"""相空间混合配置的Pydantic模型"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MixingConfig(BaseModel):
    """面包师变换混合配置"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    N: int = Field(64, ge=2, le=4096, description="格点边长（2的幂）")
    steps: int = Field(30, ge=0, description="步数")
    block: int = Field(2, ge=0, description="粗粒化块大小，0 表示不粗粒化")
    coarsen_every: int = Field(1, ge=1, description="粗粒化间隔")
    x0: int = Field(0, ge=0, description="初始格点 x")
    y0: int = Field(0, ge=0, description="初始格点 y")
    x1: Optional[int] = Field(None, ge=0, description="第二个初始格点 x（可追溯性对比）")
    y1: Optional[int] = Field(None, ge=0, description="第二个初始格点 y")

    @model_validator(mode='after')
    def _check_grid(self) -> 'MixingConfig':
        if self.N & (self.N - 1):
            raise ValueError(f"N 必须是2的幂: {self.N}")
        if self.block and self.N % self.block:
            raise ValueError(f"block={self.block} 必须整除 N={self.N}")
        if (self.x1 is None) != (self.y1 is None):
            raise ValueError("x1 与 y1 必须同时给出")
        for name in ('x0', 'y0', 'x1', 'y1'):
            value = getattr(self, name)
            if value is not None and value >= self.N:
                raise ValueError(f"{name}={value} 超出 0..{self.N - 1}")
        return self

    @property
    def has_second_start(self) -> bool:
        return self.x1 is not None
