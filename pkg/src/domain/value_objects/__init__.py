"""
Value Objects
DESCRIÇÃO: Objetos imutáveis que representam conceitos do domínio
"""

from .landmark_id import LandmarkId, N_LANDMARKS
from .loss_mode import LossMode
from .heatmap_role import HeatmapRole
from .unit_direction import UnitDirection, canonical_angle
from .geo_loss_value import GeoLossValue
from .loss_breakdown import LossBreakdown

__all__ = [
    'LandmarkId', 'N_LANDMARKS', 'LossMode', 'HeatmapRole',
    'UnitDirection', 'canonical_angle', 'GeoLossValue', 'LossBreakdown',
]
