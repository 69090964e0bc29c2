"""
Entity: LineGroupSchema
DESCRIÇÃO: Quais landmarks formam o eixo do dente e as três retas de nível
REGRAS DE NEGÓCIO:
    - Eixo: dois landmarks distintos (CP, AP por padrão)
    - Exatamente três retas de nível, cada uma com >= 2 membros
    - Nenhuma reta de nível contém CP
    - CEJ e cristas não participam de nenhum grupo
"""

from dataclasses import dataclass, replace
from typing import FrozenSet, Tuple

from ..value_objects import LandmarkId, LossMode
from src.utils.exceptions import ParameterError

LEVEL_LINE_NAMES = ("root_apex_level", "apical_third_level", "mid_root_level")


@dataclass(frozen=True)
class LineGroupSchema:
    """Esquema de grupos de retas usado pela perda geométrica"""

    axis: Tuple[LandmarkId, LandmarkId]
    level_lines: Tuple[Tuple[LandmarkId, ...], ...]
    loss_mode: LossMode = LossMode.PAPER_LITERAL

    def __post_init__(self):
        object.__setattr__(self, 'axis', tuple(LandmarkId(l) for l in self.axis))
        object.__setattr__(
            self, 'level_lines',
            tuple(tuple(LandmarkId(l) for l in linha) for linha in self.level_lines)
        )
        if len(self.axis) != 2 or self.axis[0] == self.axis[1]:
            raise ParameterError("axis", [l.name for l in self.axis], "dois landmarks distintos")
        if len(self.level_lines) != len(LEVEL_LINE_NAMES):
            raise ParameterError("level_lines", len(self.level_lines), "exatamente 3 retas de nível")
        for nome, membros in zip(LEVEL_LINE_NAMES, self.level_lines):
            if len(membros) < 2:
                raise ParameterError(nome, [m.name for m in membros], ">= 2 membros")
            if len(set(membros)) != len(membros):
                raise ParameterError(nome, [m.name for m in membros], "membros repetidos")
            if LandmarkId.CP in membros:
                raise ParameterError(nome, [m.name for m in membros], "não pode conter CP")

    @property
    def groups(self) -> Tuple[Tuple[LandmarkId, ...], ...]:
        """Eixo seguido das retas de nível"""
        return (tuple(self.axis),) + self.level_lines

    @property
    def group_names(self) -> Tuple[str, ...]:
        return ("axis",) + LEVEL_LINE_NAMES

    def constrained_ids(self) -> FrozenSet[LandmarkId]:
        """Landmarks que participam de algum grupo"""
        return frozenset(l for grupo in self.groups for l in grupo)

    def with_loss_mode(self, loss_mode: LossMode) -> 'LineGroupSchema':
        return replace(self, loss_mode=loss_mode)
