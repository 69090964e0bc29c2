"""
Service de perdas
DESCRIÇÃO: MSE dos heatmaps, perda geométrica acoplada ao soft-argmax e a combinação ponderada
REGRAS DE NEGÓCIO:
    - MSE é a média sobre todos os canais e pixels
    - A perda geométrica consome as coordenadas do soft-argmax dos logits preditos
    - total = mse + lambda·geo; gradiente = grad_mse + lambda·(grad_geo ∘ jacobiano do soft-argmax)
    - Ajuste degenerado durante o treino: geo e seu gradiente valem 0 para a amostra,
      e a amostra é marcada como degenerada (a geometria em si continua estrita)
"""

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from src.domain.entities import HeatmapStack, LandmarkSet, LineGroupSchema
from src.domain.value_objects import LossBreakdown
from .geometry_service import EPS_ABS, EPS_ISO, geometric_loss_and_grad
from .heatmap_service import gaussian_heatmaps, soft_argmax_with_jacobian
from src.utils.exceptions import DegenerateDirectionError, DimensionError, ParameterError

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, HeatmapStack]


def _values(stack: ArrayLike) -> np.ndarray:
    return stack.values if isinstance(stack, HeatmapStack) else np.asarray(stack, dtype=np.float64)


def _check_shapes(pred: np.ndarray, target: np.ndarray):
    if pred.shape != target.shape:
        raise DimensionError("mse_heatmap", pred.shape, target.shape)


def mse_heatmap(pred: ArrayLike, target: ArrayLike) -> float:
    """
    Erro quadrático médio sobre todos os canais e pixels.

    Raises:
        DimensionError: Se as formas diferirem
    """
    p = _values(pred)
    t = _values(target)
    _check_shapes(p, t)
    diff = p - t
    return float(np.mean(diff * diff))


def mse_heatmap_grad(pred: ArrayLike, target: ArrayLike) -> np.ndarray:
    """∂mse/∂pred = 2·(pred − target)/N, com N = canais·pixels"""
    p = _values(pred)
    t = _values(target)
    _check_shapes(p, t)
    return 2.0 * (p - t) / p.size


def geo_loss_on_logits(values: np.ndarray, schema: LineGroupSchema, temperature: float,
                       eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS
                       ) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Perda geométrica das coordenadas decodificadas por soft-argmax e seu gradiente nos logits.

    Returns:
        (geo, gradiente (C, H, W), coordenadas decodificadas (C, 2))

    Raises:
        DegenerateDirectionError: Se algum grupo decodificado for degenerado
    """
    coords, jac = soft_argmax_with_jacobian(values, temperature)
    value, grad_coords = geometric_loss_and_grad(coords, schema, eps_iso, eps_abs)
    grad = grad_coords[:, 0, None, None] * jac[:, 0] + grad_coords[:, 1, None, None] * jac[:, 1]
    return value.total, grad, coords


def compute_total_loss(values: np.ndarray, target_coords: np.ndarray, schema: LineGroupSchema,
                       temperature: float, sigma: float, lam: float,
                       target_values: Optional[np.ndarray] = None,
                       eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS
                       ) -> Tuple[LossBreakdown, np.ndarray]:
    """
    Perda total de uma amostra sobre arrays crus.

    Args:
        values: Logits (C, H, W)
        target_coords: Coordenadas alvo (C, 2) na grade
        target_values: Alvos gaussianos já calculados (opcional)

    Returns:
        (LossBreakdown, gradiente (C, H, W))
    """
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam >= 0):
        raise ParameterError("lambda", lam, "deve ser >= 0 e finito")
    channels, height, width = values.shape
    if target_values is None:
        target_values = gaussian_heatmaps(target_coords, width, height, sigma)

    mse = mse_heatmap(values, target_values)
    grad = mse_heatmap_grad(values, target_values)

    try:
        geo, geo_grad, _ = geo_loss_on_logits(values, schema, temperature, eps_iso, eps_abs)
    except DegenerateDirectionError as e:
        logger.debug(f"Ajuste degenerado, termo geométrico zerado: {e.message}")
        return LossBreakdown.combine(mse, 0.0, float(lam), degenerate=True), grad

    if lam != 0:
        grad = grad + lam * geo_grad
    return LossBreakdown.combine(mse, geo, float(lam)), grad


def total_loss(pred: ArrayLike, target_coords: Union[LandmarkSet, np.ndarray], schema: LineGroupSchema,
               temperature: float, sigma: float, lam: float,
               eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS) -> Tuple[LossBreakdown, np.ndarray]:
    """
    L_total = L_MSE + λ·L_geo com gradiente unificado em relação aos logits.

    Args:
        pred: Logits preditos (C, H, W)
        target_coords: Coordenadas alvo na grade do heatmap
        schema: Grupos de retas e modo da perda
        temperature: Temperatura do soft-argmax (> 0)
        sigma: Desvio padrão do alvo gaussiano (> 0)
        lam: Peso da perda geométrica (>= 0)

    Returns:
        (LossBreakdown, gradiente com a forma de pred)

    Raises:
        ParameterError: Se T, sigma ou lambda forem inválidos
    """
    coords = target_coords.coords if isinstance(target_coords, LandmarkSet) else np.asarray(target_coords)
    return compute_total_loss(_values(pred), coords, schema, temperature, sigma, lam,
                              eps_iso=eps_iso, eps_abs=eps_abs)
