"""
Service de heatmaps (codec)
DESCRIÇÃO: Conversão entre coordenadas de landmarks e heatmaps por landmark
REGRAS DE NEGÓCIO:
    - Convenção p = (x = coluna, y = linha), centros de pixel em coordenadas inteiras
    - Alvo gaussiano de amplitude 1: G(p) = exp(−‖p − c‖² / (2σ²))
    - Argmax com desempate pela menor linha e depois menor coluna
    - Softmax com temperatura estabilizado subtraindo o máximo do canal
    - Soft-argmax = esperança das coordenadas sob o softmax, limitado a [0, W−1] x [0, H−1]
    - Jacobiano fechado: ∂p̂/∂H(q) = (1/T)·M(q)·(q − p̂)
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.domain.entities import HeatmapStack, LandmarkSet, ProbabilityMap
from src.domain.value_objects import HeatmapRole
from src.utils.exceptions import DimensionError, NonFiniteInputError, ParameterError, require_positive

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, HeatmapStack]


def _as_coords(coords: Union[LandmarkSet, np.ndarray]) -> np.ndarray:
    if isinstance(coords, LandmarkSet):
        return coords.coords
    arr = np.asarray(coords, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionError("coordenadas", "(C, 2)", arr.shape)
    return arr


def _check_temperature(temperature: float) -> float:
    if not (isinstance(temperature, (int, float)) and math.isfinite(temperature) and temperature > 0):
        raise ParameterError("temperature", temperature, "T deve ser > 0 e finito")
    return float(temperature)


def _as_logits(values: ArrayLike, ndim: int) -> np.ndarray:
    arr = values.values if isinstance(values, HeatmapStack) else np.asarray(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise DimensionError("heatmap", f"{ndim} dimensões", arr.shape)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError("logits do heatmap")
    return arr


def _grid(height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """Coordenadas x (coluna) e y (linha) de cada pixel"""
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


# ============================================
# TRANSFORMAÇÃO IMAGEM <-> GRADE
# ============================================

@dataclass(frozen=True)
class LatticeTransform:
    """
    Mapeamento isotrópico e centralizado entre pixels da imagem e a grade do heatmap.

    lattice = image * scale + offset, com a mesma escala nos dois eixos para
    preservar ângulos.
    """

    scale: float
    offset_x: float
    offset_y: float

    @classmethod
    def fit(cls, image_width: int, image_height: int,
            lattice_width: int, lattice_height: int) -> 'LatticeTransform':
        """Maior escala que cabe a imagem inteira na grade, centralizada"""
        for nome, valor in (("image_width", image_width), ("image_height", image_height),
                            ("lattice_width", lattice_width), ("lattice_height", lattice_height)):
            require_positive(nome, valor)
        scale = min(lattice_width / image_width, lattice_height / image_height)
        offset_x = ((lattice_width - 1) - (image_width - 1) * scale) / 2.0
        offset_y = ((lattice_height - 1) - (image_height - 1) * scale) / 2.0
        return cls(scale=scale, offset_x=offset_x, offset_y=offset_y)

    @classmethod
    def identity(cls) -> 'LatticeTransform':
        return cls(scale=1.0, offset_x=0.0, offset_y=0.0)

    def to_lattice(self, coords: np.ndarray) -> np.ndarray:
        arr = np.asarray(coords, dtype=np.float64)
        return arr * self.scale + np.array([self.offset_x, self.offset_y])

    def to_image(self, coords: np.ndarray) -> np.ndarray:
        arr = np.asarray(coords, dtype=np.float64)
        return (arr - np.array([self.offset_x, self.offset_y])) / self.scale


# ============================================
# CODIFICAÇÃO GAUSSIANA
# ============================================

def gaussian_heatmaps(coords: Union[LandmarkSet, np.ndarray], width: int, height: int,
                      sigma: float) -> np.ndarray:
    """Array (C, H, W) com uma gaussiana de amplitude 1 por coordenada"""
    sigma = require_positive("sigma", sigma)
    pontos = _as_coords(coords)
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(height, dtype=np.float64)
    dx2 = (xs[None, :] - pontos[:, 0:1]) ** 2
    dy2 = (ys[None, :] - pontos[:, 1:2]) ** 2
    return np.exp(-(dy2[:, :, None] + dx2[:, None, :]) / (2.0 * sigma * sigma))


def encode_gaussian(coords: Union[LandmarkSet, np.ndarray], width: int, height: int,
                    sigma: float) -> HeatmapStack:
    """
    Codifica landmarks como heatmaps alvo.

    Args:
        coords: Coordenadas na grade do heatmap
        width: Largura da grade
        height: Altura da grade
        sigma: Desvio padrão em pixels da grade (> 0)

    Returns:
        HeatmapStack com papel TARGET

    Raises:
        ParameterError: Se sigma <= 0
    """
    return HeatmapStack(gaussian_heatmaps(coords, width, height, sigma), HeatmapRole.TARGET)


# ============================================
# DECODIFICAÇÃO
# ============================================

def decode_argmax(stack: ArrayLike) -> LandmarkSet:
    """Posição do máximo de cada canal (menor linha, depois menor coluna)"""
    values = stack.values if isinstance(stack, HeatmapStack) else np.asarray(stack, dtype=np.float64)
    channels, _, width = values.shape
    flat = np.argmax(values.reshape(channels, -1), axis=1)
    coords = np.stack([flat % width, flat // width], axis=1).astype(np.float64)
    return LandmarkSet(coords, unchecked=True)


def softmax_stack(values: ArrayLike, temperature: float) -> np.ndarray:
    """Softmax por canal de um array (C, H, W)"""
    temperature = _check_temperature(temperature)
    logits = _as_logits(values, 3)
    maximos = logits.max(axis=(1, 2), keepdims=True)
    e = np.exp((logits - maximos) / temperature)
    return e / e.sum(axis=(1, 2), keepdims=True)


def softmax_probabilities(h: np.ndarray, temperature: float) -> ProbabilityMap:
    """
    M(p) = exp(H(p)/T) / Σ_q exp(H(q)/T) para um canal (H, W).

    Raises:
        ParameterError: Se T <= 0
        NonFiniteInputError: Se algum logit não for finito
    """
    logits = _as_logits(h, 2)
    probs = softmax_stack(logits[None], temperature)[0]
    return ProbabilityMap(probs, float(temperature))


def _expectation(probs: np.ndarray) -> np.ndarray:
    _, height, width = probs.shape
    xs, ys = _grid(height, width)
    x_hat = np.sum(probs * xs, axis=(1, 2))
    y_hat = np.sum(probs * ys, axis=(1, 2))
    return np.stack([x_hat, y_hat], axis=1)


def soft_argmax_stack(values: ArrayLike, temperature: float) -> np.ndarray:
    """Coordenadas (C, 2) esperadas de cada canal, limitadas à grade"""
    probs = softmax_stack(values, temperature)
    _, height, width = probs.shape
    pontos = _expectation(probs)
    pontos[:, 0] = np.clip(pontos[:, 0], 0.0, width - 1)
    pontos[:, 1] = np.clip(pontos[:, 1], 0.0, height - 1)
    return pontos


def soft_argmax(h: np.ndarray, temperature: float) -> Tuple[float, float]:
    """Esperança (x̂, ŷ) de um canal (H, W) sob o softmax com temperatura T"""
    logits = _as_logits(h, 2)
    x_hat, y_hat = soft_argmax_stack(logits[None], temperature)[0]
    return float(x_hat), float(y_hat)


def decode_soft_argmax(stack: ArrayLike, temperature: float) -> LandmarkSet:
    """Decodifica todos os canais por soft-argmax"""
    return LandmarkSet(soft_argmax_stack(stack, temperature), unchecked=True)


def soft_argmax_with_jacobian(values: ArrayLike, temperature: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Coordenadas (C, 2) e jacobiano (C, 2, H, W) numa única passada.

    jac[c, 0] = ∂x̂_c/∂H_c e jac[c, 1] = ∂ŷ_c/∂H_c; canais não interagem.
    """
    temperature = _check_temperature(temperature)
    probs = softmax_stack(values, temperature)
    channels, height, width = probs.shape
    pontos = _expectation(probs)
    xs, ys = _grid(height, width)
    jac = np.empty((channels, 2, height, width), dtype=np.float64)
    jac[:, 0] = probs * (xs[None] - pontos[:, 0, None, None]) / temperature
    jac[:, 1] = probs * (ys[None] - pontos[:, 1, None, None]) / temperature
    pontos[:, 0] = np.clip(pontos[:, 0], 0.0, width - 1)
    pontos[:, 1] = np.clip(pontos[:, 1], 0.0, height - 1)
    return pontos, jac


def soft_argmax_jacobian_stack(values: ArrayLike, temperature: float) -> np.ndarray:
    return soft_argmax_with_jacobian(values, temperature)[1]


def soft_argmax_jacobian(h: np.ndarray, temperature: float) -> np.ndarray:
    """
    Gradiente de (x̂, ŷ) em relação a cada logit de um canal.

    Returns:
        Array (2, H, W): [∂x̂/∂H, ∂ŷ/∂H]
    """
    logits = _as_logits(h, 2)
    return soft_argmax_jacobian_stack(logits[None], temperature)[0]
