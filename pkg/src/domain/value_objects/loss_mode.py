"""
Value Object: LossMode
DESCRIÇÃO: Forma do termo de perpendicularidade da perda geométrica
REGRAS DE NEGÓCIO:
    - PAPER_LITERAL usa o produto escalar cru v_perp·v_j (pode ser negativo)
    - ABSOLUTE usa |v_perp·v_j|
    - SQUARED usa (v_perp·v_j)²
    - O termo de paralelismo é sempre 1 − |v_j·v_k|
"""

from enum import Enum
from typing import Tuple


class LossMode(Enum):
    """Enum dos modos da perda geométrica"""

    PAPER_LITERAL = "paper_literal"
    ABSOLUTE = "absolute"
    SQUARED = "squared"

    @classmethod
    def from_string(cls, modo: str) -> 'LossMode':
        """Converte string para LossMode

        Raises:
            ValueError: Se o modo não for válido
        """
        valor = modo.strip().lower()
        try:
            return cls(valor)
        except ValueError:
            raise ValueError(
                f"Modo de perda inválido: '{modo}'. "
                f"Modos válidos: {', '.join(m.value for m in cls)}"
            )

    def contribution(self, dot: float) -> Tuple[float, float]:
        """Contribuição de perpendicularidade e sua derivada em relação ao produto escalar"""
        if self is LossMode.PAPER_LITERAL:
            return dot, 1.0
        if self is LossMode.ABSOLUTE:
            sinal = 1.0 if dot > 0 else (-1.0 if dot < 0 else 0.0)
            return abs(dot), sinal
        return dot * dot, 2.0 * dot

    def __str__(self) -> str:
        return self.value
