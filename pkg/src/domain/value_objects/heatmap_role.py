"""
Value Object: HeatmapRole
DESCRIÇÃO: Papel dos valores de um heatmap (gravado como u8 no contêiner GHMP)
"""

from enum import IntEnum


class HeatmapRole(IntEnum):
    """Enum do papel de um HeatmapStack"""

    LOGITS = 0
    PROBABILITIES = 1
    TARGET = 2

    @classmethod
    def from_code(cls, codigo: int) -> 'HeatmapRole':
        """Converte o byte do cabeçalho GHMP

        Raises:
            ValueError: Se o código for desconhecido
        """
        try:
            return cls(codigo)
        except ValueError:
            raise ValueError(
                f"Papel de heatmap inválido: {codigo}. "
                f"Códigos válidos: {', '.join(str(r.value) for r in cls)}"
            )
