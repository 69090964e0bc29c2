"""
Entities
DESCRIÇÃO: Tipos do domínio de landmarks
    - LandmarkSet: 16 coordenadas de uma imagem
    - AnnotationRecord: imagem anotada com tamanho e espaçamento
    - LineGroupSchema: eixo e retas de nível da perda geométrica
    - HeatmapStack: canais de heatmap sobre uma grade comum
    - ProbabilityMap: softmax de um canal com temperatura
"""

from .landmark_set import LandmarkSet
from .annotation_record import AnnotationRecord
from .line_group_schema import LineGroupSchema, LEVEL_LINE_NAMES
from .heatmap_stack import HeatmapStack, ProbabilityMap

__all__ = ['LandmarkSet', 'AnnotationRecord', 'LineGroupSchema', 'LEVEL_LINE_NAMES', 'HeatmapStack',
           'ProbabilityMap']
