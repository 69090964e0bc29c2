"""
Factory para criar o modelo de heatmap apropriado ao modo de treino
"""

import logging
from typing import Sequence

from .base_model import BaseHeatmapModel
from .free_logits_model import FreeLogitsModel
from .lora_linear_model import LoraLinearModel
from src.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

MODOS = ("free_logits", "lora_linear")


class ModelFactory:
    """Factory de modelos de heatmap"""

    @staticmethod
    def criar_modelo(mode: str, image_ids: Sequence[str], channels: int, height: int, width: int,
                     rank: int = 4, alpha: float = 4.0, feature_dim: int = 32,
                     base_scale: float = 0.01, seed: int = 0) -> BaseHeatmapModel:
        """
        Cria o modelo pelo nome do modo.

        Raises:
            ParameterError: Se o modo for desconhecido
        """
        logger.debug(f"Criando modelo {mode} para {len(image_ids)} amostras ({channels}x{height}x{width})")
        if mode == "free_logits":
            return FreeLogitsModel(image_ids, channels, height, width)
        if mode == "lora_linear":
            return LoraLinearModel(image_ids, channels, height, width, rank=rank, alpha=alpha,
                                   feature_dim=feature_dim, base_scale=base_scale, seed=seed)
        raise ParameterError("mode", mode, f"modos válidos: {', '.join(MODOS)}")
