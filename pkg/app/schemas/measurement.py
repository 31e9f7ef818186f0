"""测量流程相关的Pydantic模型"""
import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MeasurementConfig(BaseModel):
    """测量流程配置模型

    振幅以实部/虚部分别给出，如 c_up = 0.6、c_down_im = 0.8
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    c_up: float = Field(0.0, description="|↑⟩ 振幅实部")
    c_up_im: float = Field(0.0, description="|↑⟩ 振幅虚部")
    c_down: float = Field(0.0, description="|↓⟩ 振幅实部")
    c_down_im: float = Field(0.0, description="|↓⟩ 振幅虚部")
    T_a: float = Field(1.0, gt=0, description="仪器温度（k_B = 1）")
    delta_E1: float = Field(1.0, description="传递给仪器的能量 ΔE1")
    delta_E2: float = Field(10.0, description="放大后的宏观能量 ΔE2")
    phase_mode: Literal['analytic', 'monte_carlo'] = Field('analytic', description="退相干方式")
    mc_samples: int = Field(1000, ge=1, description="蒙特卡洛随机相位样本数 M")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="随机数种子")
    repetitions: int = Field(1, ge=1, description="重复观测次数")
    detectability_ratio: Optional[float] = Field(None, gt=0, description="可探测性倍数 R，缺省取全局配置")

    @model_validator(mode='after')
    def _check_amplitudes(self) -> 'MeasurementConfig':
        norm = self.p_up + self.p_down
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|c_up|² + |c_down|² 必须为1，实际为 {norm!r}")
        if self.amp_up == 0 or self.amp_down == 0:
            raise ValueError("c_up 与 c_down 都不能为0（平凡情形）")
        return self

    @property
    def amp_up(self) -> complex:
        return complex(self.c_up, self.c_up_im)

    @property
    def amp_down(self) -> complex:
        return complex(self.c_down, self.c_down_im)

    @property
    def p_up(self) -> float:
        return abs(self.amp_up) ** 2

    @property
    def p_down(self) -> float:
        return abs(self.amp_down) ** 2

    def branch_entropy(self) -> float:
        """−Σ p ln p（按 p↑ + p↓ 归一）"""
        total = self.p_up + self.p_down
        return -math.fsum(p / total * math.log(p / total) for p in (self.p_up, self.p_down) if p > 0)
