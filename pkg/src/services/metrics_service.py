"""
Service de métricas
DESCRIÇÃO: MRE, SDR por limiar em mm, SDR médio e resíduo geométrico das predições
REGRAS DE NEGÓCIO:
    - Distância em mm = spacing_mm_per_px · distância euclidiana em pixels
    - Detecção conta quando distância <= limiar (fronteira fechada)
    - MRE agrega todas as instâncias de landmark (não média de médias por imagem)
    - Registros ordenados por image_id e somas com math.fsum: permutar o corpus não muda nenhum bit
    - Resíduo geométrico = média da perda geométrica (modo absoluto) das predições,
      conjuntos degenerados são pulados e contados
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.application.dtos import MetricsReport
from src.domain.entities import AnnotationRecord, LandmarkSet, LineGroupSchema
from src.domain.value_objects import LossMode, N_LANDMARKS
from .annotation_service import line_groups_default, parse_dataset
from .geometry_service import geometric_loss
from src.utils.exceptions import (
    DegenerateDirectionError,
    DimensionError,
    PairingError,
    ParameterError,
    ValidationError,
    require_positive,
)

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = (0.5, 1.0, 2.0)


def _distances_px(pred: LandmarkSet, gt: LandmarkSet) -> np.ndarray:
    diff = pred.coords - gt.coords
    return np.hypot(diff[:, 0], diff[:, 1])


def mre(pred: LandmarkSet, gt: LandmarkSet, spacing: float) -> float:
    """
    Erro radial médio em mm de uma imagem.

    Raises:
        ParameterError: Se spacing <= 0
    """
    spacing = require_positive("spacing", spacing)
    distancias = spacing * _distances_px(pred, gt)
    return math.fsum(distancias) / N_LANDMARKS


def sdr(preds: Sequence[LandmarkSet], gts: Sequence[LandmarkSet],
        spacings: Sequence[float], threshold: float) -> float:
    """
    Percentual de landmarks com erro <= threshold mm.

    Raises:
        DimensionError: Se as sequências tiverem comprimentos diferentes
        ParameterError: Se threshold <= 0
    """
    if not (len(preds) == len(gts) == len(spacings)):
        raise DimensionError("sdr", len(gts), (len(preds), len(spacings)))
    threshold = require_positive("threshold", threshold)
    if not preds:
        raise ValidationError("SDR de corpus vazio")
    detectados = 0
    for pred, gt, spacing in zip(preds, gts, spacings):
        mm = require_positive("spacing", spacing) * _distances_px(pred, gt)
        detectados += int(np.count_nonzero(mm <= threshold))
    return 100.0 * detectados / (N_LANDMARKS * len(preds))


def _check_thresholds(thresholds: Sequence[float]) -> Tuple[float, ...]:
    if not thresholds:
        raise ParameterError("thresholds", thresholds, "ao menos um limiar")
    return tuple(require_positive("threshold", t) for t in thresholds)


def pair_records(preds: Sequence[AnnotationRecord], gts: Sequence[AnnotationRecord]
                 ) -> List[Tuple[AnnotationRecord, AnnotationRecord]]:
    """
    Pareia predições e anotações por image_id, em ordem de image_id.

    Raises:
        PairingError: Se algum image_id não tiver par
    """
    def indexar(records: Sequence[AnnotationRecord], origem: str) -> Dict[str, AnnotationRecord]:
        indice: Dict[str, AnnotationRecord] = {}
        for record in records:
            if record.image_id in indice:
                raise ValidationError(
                    f"image_id duplicado em {origem}: {record.image_id}",
                    details={'image_id': record.image_id, 'origem': origem}
                )
            indice[record.image_id] = record
        return indice

    por_pred = indexar(preds, "predições")
    por_gt = indexar(gts, "anotações")
    sem_anotacao = sorted(set(por_pred) - set(por_gt))
    sem_predicao = sorted(set(por_gt) - set(por_pred))
    if sem_anotacao or sem_predicao:
        raise PairingError(sem_anotacao, sem_predicao)
    return [(por_pred[i], por_gt[i]) for i in sorted(por_gt)]


def _image_terms(pred: AnnotationRecord, gt: AnnotationRecord, spacing: float,
                 schema: LineGroupSchema) -> Tuple[np.ndarray, Optional[float]]:
    """Distâncias em mm e resíduo geométrico (None se degenerado) de uma imagem"""
    mm = spacing * _distances_px(pred.landmarks, gt.landmarks)
    try:
        residual = geometric_loss(pred.landmarks, schema).total
    except DegenerateDirectionError:
        residual = None
    return mm, residual


def evaluate_records(preds: Sequence[AnnotationRecord], gts: Sequence[AnnotationRecord],
                     thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
                     spacing: Optional[float] = None, threads: int = 1) -> MetricsReport:
    """
    Avalia predições contra anotações em memória.

    Args:
        preds: Registros preditos
        gts: Registros anotados
        thresholds: Limiares do SDR em mm
        spacing: Espaçamento fixo; None usa o spacing de cada anotação
        threads: Trabalhadores para o cálculo por imagem (redução sempre ordenada)

    Returns:
        MetricsReport

    Raises:
        PairingError: Se os image_id não se correspondem
    """
    thresholds = _check_thresholds(thresholds)
    if spacing is not None:
        spacing = require_positive("spacing", spacing)
    pares = pair_records(preds, gts)
    if not pares:
        raise ValidationError("Corpus vazio: nada a avaliar")

    schema = line_groups_default(LossMode.ABSOLUTE)

    def calcular(par):
        pred, gt = par
        return _image_terms(pred, gt, spacing if spacing is not None else gt.spacing_mm_per_px, schema)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            termos = list(pool.map(calcular, pares))
    else:
        termos = [calcular(par) for par in pares]

    n_images = len(termos)
    n_points = n_images * N_LANDMARKS
    distancias = np.stack([mm for mm, _ in termos])

    mre_mm = math.fsum(distancias.ravel()) / n_points
    per_landmark = tuple(math.fsum(distancias[:, k]) / n_images for k in range(N_LANDMARKS))
    sdr_values = {
        t: 100.0 * int(np.count_nonzero(distancias <= t)) / n_points
        for t in thresholds
    }
    sdr_average = sum(sdr_values[t] for t in thresholds) / len(thresholds)

    residuos = [r for _, r in termos if r is not None]
    degenerados = n_images - len(residuos)
    residual = math.fsum(residuos) / len(residuos) if residuos else math.nan
    if degenerados:
        logger.warning(f"{degenerados} predições com ajuste degenerado fora do resíduo geométrico")

    logger.info(f"Avaliação: {n_images} imagens, MRE={mre_mm:.4f} mm, SDR médio={sdr_average:.2f}%")
    return MetricsReport(
        thresholds=thresholds,
        sdr=sdr_values,
        sdr_average=sdr_average,
        mre_mm=mre_mm,
        geometric_residual=residual,
        per_landmark_mre_mm=per_landmark,
        n_points=n_points,
        n_images=n_images,
        degenerate_count=degenerados,
    )


def evaluate_corpus(pred_content: bytes, gt_content: bytes,
                    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
                    spacing: Optional[float] = None, threads: int = 1) -> MetricsReport:
    """Avalia arquivos de predição e anotação (conteúdo bruto)"""
    preds = parse_dataset(pred_content, check_bounds=False)
    gts = parse_dataset(gt_content, check_bounds=True)
    return evaluate_records(preds, gts, thresholds, spacing=spacing, threads=threads)
