"""Lindblad 演化运行配置的Pydantic模型"""
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.utils.tools import split_list


class LindbladConfig(BaseModel):
    """Lindblad 演化配置模型"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    dim: int = Field(2, ge=1, le=128, description="希尔伯特空间维数")
    model: Literal['dephasing', 'amplitude_damping', 'unitary'] = Field('dephasing', description="模型类型")
    gamma: float = Field(0.5, ge=0, description="耗散速率 γ")
    omega: float = Field(0.0, description="驱动频率 ω")
    psi: List[complex] = Field(default_factory=list, description="初始纯态振幅（自动归一），缺省为等权叠加")
    t_end: float = Field(1.0, gt=0, description="终止时刻")
    n_steps: int = Field(10, ge=1, description="记录时刻数（不含初始时刻）")
    dt_max: float = Field(0.01, gt=0, description="积分最大步长")

    @field_validator('psi', mode='before')
    @classmethod
    def _split_psi(cls, value):
        if isinstance(value, str):
            return [complex(token) for token in split_list(value)]
        return value

    @model_validator(mode='after')
    def _check_psi(self) -> 'LindbladConfig':
        if self.psi and len(self.psi) != self.dim:
            raise ValueError(f"psi 的长度 {len(self.psi)} 与 dim={self.dim} 不符")
        if self.psi and not any(abs(c) > 0 for c in self.psi):
            raise ValueError("psi 不能全为0")
        return self
