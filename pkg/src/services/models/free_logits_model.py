"""
Modelo de logits livres
DESCRIÇÃO: Cada imagem possui seus próprios logits (C, H, W), iniciados em zero
REGRAS DE NEGÓCIO:
    - Sem parâmetros compartilhados: treino e validação são ajustados juntos,
      cada imagem só recebe gradiente da própria perda
    - Isola a geometria da perda de qualquer aprendizado de representação
"""

from typing import Dict, List, Sequence

import numpy as np

from src.services.training.lora import ModelDescription
from .base_model import BaseHeatmapModel


class FreeLogitsModel(BaseHeatmapModel):
    """Logits por imagem como parâmetros"""

    def __init__(self, image_ids: Sequence[str], channels: int, height: int, width: int):
        super().__init__(image_ids, channels, height, width)
        self._logits = np.zeros((len(self.image_ids), channels, height, width), dtype=np.float64)

    @property
    def nome_modelo(self) -> str:
        return "free_logits"

    def parameters(self) -> Dict[str, np.ndarray]:
        return {'logits': self._logits}

    def forward(self, indices: Sequence[int]) -> np.ndarray:
        return self._logits[list(indices)]

    def backward(self, indices: Sequence[int], grad_logits: np.ndarray) -> Dict[str, np.ndarray]:
        grad = np.zeros_like(self._logits)
        grad[list(indices)] = grad_logits
        return {'logits': grad}

    def describe(self) -> ModelDescription:
        return ModelDescription(head_params=self._logits.size, name=self.nome_modelo)

    def fit_indices(self, n_train: int) -> List[int]:
        return list(range(len(self.image_ids)))
