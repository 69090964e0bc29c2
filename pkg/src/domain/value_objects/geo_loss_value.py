"""
Value Object: GeoLossValue
DESCRIÇÃO: Valor da perda geométrica e seus termos
REGRAS DE NEGÓCIO:
    - perpendicular_terms: produtos escalares crus v_perp·v_j (j = 1..3)
    - parallel_terms: 1 − |v_j·v_k| para os pares (1,2), (1,3), (2,3), cada um em [0, 1]
    - total = (Σ contribuições perpendiculares + Σ parallel_terms) / 6
"""

from dataclasses import dataclass
from typing import Tuple

from .loss_mode import LossMode


@dataclass(frozen=True)
class GeoLossValue:
    """Perda geométrica avaliada"""

    total: float
    perpendicular_terms: Tuple[float, float, float]
    parallel_terms: Tuple[float, float, float]
    loss_mode: LossMode = LossMode.PAPER_LITERAL

    @property
    def perpendicular_contributions(self) -> Tuple[float, ...]:
        return tuple(self.loss_mode.contribution(d)[0] for d in self.perpendicular_terms)

    def to_dict(self) -> dict:
        return {
            'total': self.total,
            'perpendicular_terms': list(self.perpendicular_terms),
            'parallel_terms': list(self.parallel_terms),
            'loss_mode': self.loss_mode.value,
        }
