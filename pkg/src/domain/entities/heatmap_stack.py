"""
Entity: HeatmapStack
DESCRIÇÃO: Canais de heatmap (um por landmark) sobre a mesma grade W×H
REGRAS DE NEGÓCIO:
    - Array (C, H, W) float64 somente leitura, ordem row-major
    - Todos os canais compartilham dimensões e papel
    - Papel PROBABILITIES exige valores >= 0 somando 1 por canal
"""

from dataclasses import dataclass

import numpy as np

from ..value_objects import HeatmapRole
from src.utils.exceptions import DimensionError, NonFiniteInputError, ParameterError


@dataclass(frozen=True, eq=False)
class HeatmapStack:
    """Pilha imutável de heatmaps"""

    values: np.ndarray
    role: HeatmapRole

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 3:
            raise DimensionError("HeatmapStack", "(C, H, W)", arr.shape)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInputError("HeatmapStack")
        role = HeatmapRole(self.role)
        if role is HeatmapRole.PROBABILITIES:
            somas = arr.sum(axis=(1, 2))
            if np.any(arr < 0) or np.any(np.abs(somas - 1.0) > 1e-12):
                raise ParameterError("values", "probabilidades", "canais devem somar 1")
        arr.setflags(write=False)
        object.__setattr__(self, 'values', arr)
        object.__setattr__(self, 'role', role)

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]

    def channel(self, indice: int) -> np.ndarray:
        return self.values[int(indice)]


@dataclass(frozen=True, eq=False)
class ProbabilityMap:
    """Mapa de probabilidades M(p) de um canal, obtido por softmax com temperatura T"""

    values: np.ndarray
    temperature: float

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, 'values', arr)

    @property
    def total(self) -> float:
        return float(self.values.sum())
