"""
Service de geometria
DESCRIÇÃO: Ajuste de direção por grupo de landmarks e perda geométrica com gradiente exato
REGRAS DE NEGÓCIO:
    - Ajuste ortogonal (mínimos quadrados totais): eixo principal da matriz de
      segundos momentos centrada, θ = ½·atan2(2·Sxy, Sxx − Syy)
    - Grupos isotrópicos (traço <= eps_abs ou anisotropia <= eps_iso·traço) são degenerados
    - Perda: (Σ contribuições v_perp·v_j + Σ (1 − |v_j·v_k|)) / 6, contribuição conforme LossMode
    - Gradiente pela cadeia pontos -> S -> θ -> v -> produtos escalares -> perda
    - Landmarks fora de qualquer grupo recebem gradiente zero
"""

import logging
import math
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.domain.entities import LandmarkSet, LineGroupSchema
from src.domain.value_objects import GeoLossValue, LossMode, N_LANDMARKS, UnitDirection
from src.utils.exceptions import ArityError, DegenerateDirectionError, DimensionError, NonFiniteInputError

logger = logging.getLogger(__name__)

EPS_ISO = 1e-9
EPS_ABS = 1e-12

PARALLEL_PAIRS = tuple(combinations(range(3), 2))

DirectionLike = Union[UnitDirection, Sequence[float], np.ndarray]


# ============================================
# AJUSTE DE RETA
# ============================================

def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionError("fit_direction", "(n, 2)", arr.shape)
    if arr.shape[0] < 2:
        raise ArityError(arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError("fit_direction")
    return arr


def fit_direction_with_grad(points, eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS,
                            grupo: Optional[str] = None) -> Tuple[UnitDirection, np.ndarray]:
    """
    Ajusta a direção e devolve também ∂θ/∂(x_i, y_i).

    Returns:
        (UnitDirection, array (n, 2) com as derivadas de θ)

    Raises:
        ArityError: Se n < 2
        DegenerateDirectionError: Se o conjunto for isotrópico
    """
    arr = _as_points(points)
    n = arr.shape[0]
    centrado = arr - arr.mean(axis=0)
    dx = centrado[:, 0]
    dy = centrado[:, 1]
    sxx = float(np.dot(dx, dx)) / n
    syy = float(np.dot(dy, dy)) / n
    sxy = float(np.dot(dx, dy)) / n

    u = 2.0 * sxy
    w = sxx - syy
    traco = sxx + syy
    anisotropia = math.hypot(w, u)
    if traco <= eps_abs or anisotropia <= eps_iso * traco:
        raise DegenerateDirectionError(anisotropia, traco, grupo)

    direcao = UnitDirection(0.5 * math.atan2(u, w))

    d = anisotropia * anisotropia * n
    grad = np.empty_like(arr)
    grad[:, 0] = (w * dy - u * dx) / d
    grad[:, 1] = (w * dx + u * dy) / d
    return direcao, grad


def fit_direction(points, eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS,
                  grupo: Optional[str] = None) -> UnitDirection:
    """
    Direção do primeiro eixo principal de um conjunto de pontos.

    Args:
        points: Sequência de (x, y) com n >= 2
        eps_iso: Limiar relativo de isotropia
        eps_abs: Limiar absoluto do traço

    Returns:
        UnitDirection canônica

    Raises:
        ArityError: Se n < 2
        DegenerateDirectionError: Se o conjunto for isotrópico
    """
    return fit_direction_with_grad(points, eps_iso, eps_abs, grupo)[0]


# ============================================
# PERDA GEOMÉTRICA
# ============================================

def _as_vector(direcao: DirectionLike) -> np.ndarray:
    if isinstance(direcao, UnitDirection):
        return direcao.as_array()
    return np.asarray(direcao, dtype=np.float64)


def _loss_terms(v_axis: np.ndarray, v_levels: List[np.ndarray], loss_mode: LossMode):
    """Valor da perda e gradientes em relação aos vetores (eixo, níveis)"""
    if len(v_levels) != 3:
        raise DimensionError("perda geométrica", "3 retas de nível", len(v_levels))

    dots = [float(np.dot(v_axis, v)) for v in v_levels]
    contribs = [loss_mode.contribution(d) for d in dots]

    g_axis = np.zeros(2)
    g_levels = [np.zeros(2) for _ in v_levels]
    for j, (_, derivada) in enumerate(contribs):
        g_axis += derivada * v_levels[j]
        g_levels[j] += derivada * v_axis

    parallel = []
    for j, k in PARALLEL_PAIRS:
        s = float(np.dot(v_levels[j], v_levels[k]))
        parallel.append(1.0 - abs(s))
        sinal = math.copysign(1.0, s) if s != 0.0 else 0.0
        g_levels[j] -= sinal * v_levels[k]
        g_levels[k] -= sinal * v_levels[j]

    total = (sum(c for c, _ in contribs) + sum(parallel)) / 6.0
    value = GeoLossValue(
        total=total,
        perpendicular_terms=tuple(dots),
        parallel_terms=tuple(parallel),
        loss_mode=loss_mode,
    )
    return value, g_axis / 6.0, [g / 6.0 for g in g_levels]


def geometric_loss_from_directions(v_axis: DirectionLike, v_levels: Sequence[DirectionLike],
                                   loss_mode: LossMode = LossMode.PAPER_LITERAL) -> GeoLossValue:
    """Perda geométrica avaliada sobre vetores unitários já conhecidos"""
    value, _, _ = _loss_terms(_as_vector(v_axis), [_as_vector(v) for v in v_levels], loss_mode)
    return value


def fit_groups(landmarks: Union[LandmarkSet, np.ndarray], schema: LineGroupSchema,
               eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS
               ) -> List[Tuple[UnitDirection, np.ndarray]]:
    """Ajusta eixo e retas de nível; cada item é (direção, ∂θ/∂pontos do grupo)"""
    coords = landmarks.coords if isinstance(landmarks, LandmarkSet) else np.asarray(landmarks)
    return [
        fit_direction_with_grad(coords[[int(l) for l in membros]], eps_iso, eps_abs, grupo=nome)
        for nome, membros in zip(schema.group_names, schema.groups)
    ]


def geometric_loss_and_grad(landmarks: Union[LandmarkSet, np.ndarray], schema: LineGroupSchema,
                            eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS
                            ) -> Tuple[GeoLossValue, np.ndarray]:
    """
    Perda geométrica e gradiente (16, 2) em relação às coordenadas.

    Raises:
        DegenerateDirectionError: Se algum grupo for degenerado
    """
    ajustes = fit_groups(landmarks, schema, eps_iso, eps_abs)
    direcoes = [d for d, _ in ajustes]
    value, g_axis, g_levels = _loss_terms(
        direcoes[0].as_array(), [d.as_array() for d in direcoes[1:]], schema.loss_mode
    )

    grad = np.zeros((N_LANDMARKS, 2), dtype=np.float64)
    for (direcao, dtheta), g_vec, membros in zip(ajustes, [g_axis] + g_levels, schema.groups):
        dl_dtheta = float(np.dot(g_vec, direcao.normal))
        for linha, landmark in enumerate(membros):
            grad[int(landmark)] += dl_dtheta * dtheta[linha]
    return value, grad


def geometric_loss(landmarks: Union[LandmarkSet, np.ndarray], schema: LineGroupSchema,
                   eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS) -> GeoLossValue:
    """
    Perda de perpendicularidade (eixo x retas de nível) e paralelismo (entre retas de nível).

    Raises:
        DegenerateDirectionError: Se algum grupo for degenerado
    """
    direcoes = [d for d, _ in fit_groups(landmarks, schema, eps_iso, eps_abs)]
    return geometric_loss_from_directions(direcoes[0], direcoes[1:], schema.loss_mode)


def geometric_loss_grad(landmarks: Union[LandmarkSet, np.ndarray], schema: LineGroupSchema,
                        eps_iso: float = EPS_ISO, eps_abs: float = EPS_ABS) -> np.ndarray:
    """Gradiente (16, 2) da perda geométrica: colunas (∂L/∂x, ∂L/∂y)"""
    return geometric_loss_and_grad(landmarks, schema, eps_iso, eps_abs)[1]
