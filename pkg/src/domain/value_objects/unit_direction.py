"""
Value Object: UnitDirection
DESCRIÇÃO: Direção canônica de uma reta ajustada
REGRAS DE NEGÓCIO:
    - theta em (−π/2, π/2]; vector = (cos θ, sin θ)
    - Orientação canônica: cos θ >= 0; se cos θ = 0 então vector = (0, 1)
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np


def canonical_angle(theta: float) -> float:
    """Dobra um ângulo de reta (período π) para (−π/2, π/2]"""
    dobrado = math.remainder(theta, math.pi)
    if dobrado <= -math.pi / 2:
        dobrado += math.pi
    return dobrado


@dataclass(frozen=True)
class UnitDirection:
    """Direção unitária canônica"""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, 'theta', canonical_angle(float(self.theta)))

    @property
    def vector(self) -> Tuple[float, float]:
        if self.theta == math.pi / 2:
            return 0.0, 1.0
        return math.cos(self.theta), math.sin(self.theta)

    @property
    def normal(self) -> Tuple[float, float]:
        """Derivada de vector em relação a theta: (−sin θ, cos θ)"""
        return -math.sin(self.theta), math.cos(self.theta)

    def as_array(self) -> np.ndarray:
        return np.array(self.vector, dtype=np.float64)

    def dot(self, other: 'UnitDirection') -> float:
        ax, ay = self.vector
        bx, by = other.vector
        return ax * bx + ay * by
