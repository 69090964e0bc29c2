"""
Modelos de heatmap treináveis
"""

from .base_model import BaseHeatmapModel
from .free_logits_model import FreeLogitsModel
from .lora_linear_model import LoraLinearModel, image_features
from .model_factory import ModelFactory, MODOS

__all__ = ['BaseHeatmapModel', 'FreeLogitsModel', 'LoraLinearModel', 'image_features', 'ModelFactory', 'MODOS']
