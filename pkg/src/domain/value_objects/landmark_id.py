"""
Value Object: LandmarkId
DESCRIÇÃO: Vocabulário fixo dos 16 landmarks de um dente anterior
REGRAS DE NEGÓCIO:
    - Exatamente 16 identificadores distintos
    - O índice é uma bijeção sobre 0..15 (ordem dos canais dos heatmaps)
    - CP, AP, CEJ e cristas são anotados manualmente; os 10 pontos restantes
      ficam nas retas perpendiculares ao eixo (ápice, 1/3 e 1/2 da raiz)
"""

from enum import IntEnum
from typing import List


class LandmarkId(IntEnum):
    """Enum dos landmarks; o valor é o índice do canal"""

    CP = 0
    AP = 1
    CEJ_A = 2
    CEJ_P = 3
    A_crest = 4
    P_crest = 5
    AB_AP = 6
    PB_AP = 7
    AB_13 = 8
    AR_13 = 9
    PR_13 = 10
    PB_13 = 11
    AB_12 = 12
    AR_12 = 13
    PR_12 = 14
    PB_12 = 15

    @classmethod
    def from_string(cls, nome: str) -> 'LandmarkId':
        """Converte nome do arquivo de anotações para LandmarkId

        Args:
            nome: Nome exato do landmark ('CP', 'AB_13', ...)

        Returns:
            LandmarkId correspondente

        Raises:
            ValueError: Se o nome não pertence ao vocabulário
        """
        try:
            return cls[nome.strip()]
        except KeyError:
            raise ValueError(
                f"Landmark desconhecido: '{nome}'. "
                f"Nomes válidos: {', '.join(cls.nomes())}"
            )

    @classmethod
    def nomes(cls) -> List[str]:
        """Nomes na ordem dos índices"""
        return [landmark.name for landmark in cls]

    @classmethod
    def total(cls) -> int:
        return len(cls)

    def __str__(self) -> str:
        return self.name


N_LANDMARKS = len(LandmarkId)
