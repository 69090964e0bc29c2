"""
Interface abstrata para modelos de heatmap treináveis
"""

from abc import ABC, abstractmethod
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.services.training.lora import ModelDescription


class BaseHeatmapModel(ABC):
    """Produz logits (B, C, H, W) para amostras indexadas e devolve gradientes por parâmetro"""

    def __init__(self, image_ids: Sequence[str], channels: int, height: int, width: int):
        self.image_ids = list(image_ids)
        self.channels = channels
        self.height = height
        self.width = width

    @property
    def output_shape(self) -> Tuple[int, int, int]:
        return self.channels, self.height, self.width

    @property
    def d_out(self) -> int:
        return self.channels * self.height * self.width

    @property
    @abstractmethod
    def nome_modelo(self) -> str:
        """Nome identificador do modo ('free_logits', 'lora_linear')"""
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, np.ndarray]:
        """
        Parâmetros treináveis por nome.

        Os arrays devolvidos são os próprios parâmetros: atualizá-los no lugar
        atualiza o modelo.
        """
        pass

    @abstractmethod
    def forward(self, indices: Sequence[int]) -> np.ndarray:
        """Logits (len(indices), C, H, W)"""
        pass

    @abstractmethod
    def backward(self, indices: Sequence[int], grad_logits: np.ndarray) -> Dict[str, np.ndarray]:
        """Gradientes dos parâmetros dado ∂L/∂logits das amostras"""
        pass

    @abstractmethod
    def describe(self) -> ModelDescription:
        """Descrição para contagem de parâmetros"""
        pass

    @abstractmethod
    def fit_indices(self, n_train: int) -> List[int]:
        """
        Amostras usadas na otimização.

        Args:
            n_train: As primeiras n_train amostras são de treino; o restante é validação
        """
        pass
