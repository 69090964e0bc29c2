"""
Entity: AnnotationRecord
DESCRIÇÃO: Uma imagem anotada (ou predita) com tamanho e espaçamento em mm/px
REGRAS DE NEGÓCIO:
    - width, height > 0
    - spacing_mm_per_px > 0 (obrigatório, sem valor padrão implícito)
"""

import math
from dataclasses import dataclass

from .landmark_set import LandmarkSet
from src.utils.exceptions import ParameterError


@dataclass(frozen=True)
class AnnotationRecord:
    """Registro imutável de anotação"""

    image_id: str
    width: int
    height: int
    spacing_mm_per_px: float
    landmarks: LandmarkSet

    def __post_init__(self):
        """Valida invariantes após criação"""
        if not isinstance(self.width, int) or isinstance(self.width, bool) or self.width <= 0:
            raise ParameterError("width", self.width, "inteiro > 0")
        if not isinstance(self.height, int) or isinstance(self.height, bool) or self.height <= 0:
            raise ParameterError("height", self.height, "inteiro > 0")
        spacing = self.spacing_mm_per_px
        if not isinstance(spacing, (int, float)) or not math.isfinite(spacing) or spacing <= 0:
            raise ParameterError("spacing_mm_per_px", spacing, "deve ser > 0")

    def with_landmarks(self, landmarks: LandmarkSet) -> 'AnnotationRecord':
        return AnnotationRecord(
            image_id=self.image_id,
            width=self.width,
            height=self.height,
            spacing_mm_per_px=self.spacing_mm_per_px,
            landmarks=landmarks,
        )

    def to_dict(self) -> dict:
        """Converte para o formato JSON do arquivo de anotações"""
        return {
            'image_id': self.image_id,
            'width': self.width,
            'height': self.height,
            'spacing_mm_per_px': float(self.spacing_mm_per_px),
            'landmarks': self.landmarks.to_mapping(),
        }
