"""K介子 CP/CPT 检验配置的Pydantic模型"""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.utils.tools import parse_complex_pairs, split_list


class KaonConfig(BaseModel):
    """K介子模型配置

    g 与 h_int 以 're,im' 成对给出；h_int 按 β 行优先，共 n_E·n_f 个
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    n_f: int = Field(..., ge=1, le=8, description="末态对数目")
    n_E: int = Field(..., ge=1, le=16, description="环境维数")
    m0: float = Field(..., description="K/K̄ 强作用能量")
    E_f: List[float] = Field(..., description="末态能量")
    g: List[complex] = Field(..., description="弱作用基本振幅")
    phi_f: List[float] = Field(..., description="CP 破坏相位")
    h_int: List[complex] = Field(..., description="环境耦合 ⟨Kβ|H_int|fβ⟩")
    epsilon: float = Field(..., gt=0, le=0.2, description="小参数 ε")
    delta: Optional[float] = Field(None, gt=0, description="正则化参数 δ，缺省按 delta_scale 计算")
    h_ff: Optional[List[float]] = Field(None, description="末态的环境对角能移")
    E_env: Optional[List[float]] = Field(None, description="环境能级")
    betas: Optional[List[int]] = Field(None, description="扫描的环境序号，缺省为全部")
    epsilons: Optional[List[float]] = Field(None, description="扫描的 ε 值，缺省为 [epsilon]")

    @field_validator('E_f', 'phi_f', 'h_ff', 'E_env', 'epsilons', mode='before')
    @classmethod
    def _split_floats(cls, value):
        if isinstance(value, str):
            return [float(token) for token in split_list(value)]
        return value

    @field_validator('betas', mode='before')
    @classmethod
    def _split_ints(cls, value):
        if isinstance(value, str):
            return [int(token) for token in split_list(value)]
        return value

    @field_validator('g', 'h_int', mode='before')
    @classmethod
    def _split_pairs(cls, value):
        if isinstance(value, str):
            return parse_complex_pairs(value)
        return value

    @field_validator('epsilons')
    @classmethod
    def _check_epsilons(cls, value):
        if value is not None and any(not 0 < e <= 0.2 for e in value):
            raise ValueError("epsilons 中每个值都必须在 (0, 0.2] 内")
        return value

    @model_validator(mode='after')
    def _check_lengths(self) -> 'KaonConfig':
        expected = {'E_f': self.n_f, 'g': self.n_f, 'phi_f': self.n_f, 'h_int': self.n_f * self.n_E}
        if self.h_ff is not None:
            expected['h_ff'] = self.n_f * self.n_E
        if self.E_env is not None:
            expected['E_env'] = self.n_E
        for name, length in expected.items():
            actual = len(getattr(self, name))
            if actual != length:
                raise ValueError(f"{name} 的长度应为 {length}，实际为 {actual}")
        if self.E_env is not None and len(set(self.E_env)) != self.n_E:
            raise ValueError("E_env 的各个能级必须互不相同")
        if self.betas is not None and any(not 0 <= b < self.n_E for b in self.betas):
            raise ValueError(f"betas 必须在 0..{self.n_E - 1} 内")
        return self

    def beta_list(self) -> List[int]:
        return list(self.betas) if self.betas is not None else list(range(self.n_E))

    def epsilon_list(self) -> List[float]:
        return list(self.epsilons) if self.epsilons is not None else [self.epsilon]
