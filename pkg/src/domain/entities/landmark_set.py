"""
Entity: LandmarkSet
DESCRIÇÃO: Coordenadas (x = coluna, y = linha) dos 16 landmarks de uma imagem
RESPONSABILIDADES:
    - Guardar as coordenadas como array (16, 2) float64 somente leitura, sempre finitas
    - Indexar por LandmarkId
    - Marcar conjuntos de predição (unchecked) que podem sair da imagem
"""

from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from ..value_objects import LandmarkId, N_LANDMARKS
from src.utils.exceptions import DimensionError, NonFiniteInputError


class LandmarkSet:
    """Conjunto imutável de 16 landmarks em pixels (precisão sub-pixel)"""

    __slots__ = ('_coords', 'unchecked')

    def __init__(self, coords: Union[np.ndarray, Sequence[Sequence[float]]], unchecked: bool = False):
        arr = np.array(coords, dtype=np.float64)
        if arr.shape != (N_LANDMARKS, 2):
            raise DimensionError("LandmarkSet", (N_LANDMARKS, 2), arr.shape)
        if not np.isfinite(arr).all():
            raise NonFiniteInputError("LandmarkSet")
        arr.setflags(write=False)
        self._coords = arr
        self.unchecked = bool(unchecked)

    @property
    def coords(self) -> np.ndarray:
        """Array (16, 2) somente leitura"""
        return self._coords

    def __getitem__(self, landmark: LandmarkId) -> Tuple[float, float]:
        x, y = self._coords[int(landmark)]
        return float(x), float(y)

    def points(self, landmarks: Sequence[LandmarkId]) -> np.ndarray:
        """Coordenadas de um subconjunto, na ordem pedida"""
        return self._coords[[int(lid) for lid in landmarks]]

    def as_array(self) -> np.ndarray:
        """Cópia gravável das coordenadas"""
        return self._coords.copy()

    def with_coords(self, coords: np.ndarray) -> 'LandmarkSet':
        return LandmarkSet(coords, unchecked=self.unchecked)

    def to_mapping(self) -> Dict[str, list]:
        """Forma do arquivo de anotações: nome -> [x, y]"""
        return {
            lid.name: [float(self._coords[lid][0]), float(self._coords[lid][1])]
            for lid in LandmarkId
        }

    @classmethod
    def from_mapping(cls, mapping: Mapping[LandmarkId, Sequence[float]], unchecked: bool = False) -> 'LandmarkSet':
        arr = np.empty((N_LANDMARKS, 2), dtype=np.float64)
        for lid in LandmarkId:
            arr[int(lid)] = mapping[lid]
        return cls(arr, unchecked=unchecked)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LandmarkSet):
            return NotImplemented
        return self.unchecked == other.unchecked and np.array_equal(self._coords, other._coords)

    __hash__ = None

    def __repr__(self) -> str:
        return f"LandmarkSet(unchecked={self.unchecked}, coords={self._coords.tolist()})"
