"""
Service de anotações (esquema de 16 landmarks)
DESCRIÇÃO: Leitura, escrita e validação dos arquivos de anotação/predição
REGRAS DE NEGÓCIO:
    - Arquivo UTF-8 JSON: lista de registros, ou objeto {"_meta": {...}, "records": [...]}
    - Cada registro precisa dos 16 landmarks nomeados por LandmarkId
    - spacing_mm_per_px obrigatório e > 0
    - Anotações devem ficar dentro de [0, W) x [0, H); predições só precisam ser finitas
    - write_dataset usa repr de float, então parse(write(x)) reproduz x bit a bit
"""

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.domain.entities import AnnotationRecord, LandmarkSet, LineGroupSchema
from src.domain.value_objects import LandmarkId, LossMode, N_LANDMARKS
from src.utils.exceptions import (
    DimensionError,
    NonFiniteInputError,
    ParseError,
    SchemaError,
    ValidationError,
)

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ('image_id', 'width', 'height', 'spacing_mm_per_px', 'landmarks')


# ============================================
# ESQUEMA DE GRUPOS DE RETAS
# ============================================

def line_groups_default(loss_mode: LossMode = LossMode.PAPER_LITERAL) -> LineGroupSchema:
    """
    Esquema padrão: eixo CP-AP e três retas perpendiculares a ele.

    A reta do ápice passa pelo próprio AP, por isso AP é membro dela.
    CEJ e cristas ficam fora de qualquer grupo.
    """
    L = LandmarkId
    return LineGroupSchema(
        axis=(L.CP, L.AP),
        level_lines=(
            (L.AB_AP, L.AP, L.PB_AP),
            (L.AB_13, L.AR_13, L.PR_13, L.PB_13),
            (L.AB_12, L.AR_12, L.PR_12, L.PB_12),
        ),
        loss_mode=loss_mode,
    )


# ============================================
# VALIDAÇÃO
# ============================================

class FailureKind(Enum):
    NON_FINITE = "non_finite"
    OUT_OF_BOUNDS = "out_of_bounds"


@dataclass(frozen=True)
class LandmarkFailure:
    """Falha de validação de um landmark"""
    landmark: LandmarkId
    kind: FailureKind
    motivo: str

    def __str__(self) -> str:
        return f"{self.landmark.name}: {self.motivo}"


@dataclass(frozen=True)
class ValidationVerdict:
    """Resultado de validate_landmark_set; lista vazia significa válido"""
    failures: Tuple[LandmarkFailure, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.failures

    @property
    def landmarks(self) -> Tuple[LandmarkId, ...]:
        return tuple(f.landmark for f in self.failures)


def validate_landmark_set(landmarks: Union[LandmarkSet, np.ndarray], width: int, height: int
                          ) -> ValidationVerdict:
    """
    Lista todo landmark não finito ou fora de [0, width) x [0, height).

    Args:
        landmarks: Conjunto a validar, ou array (16, 2) cru ainda não convertido em LandmarkSet
        width: Largura da imagem em pixels
        height: Altura da imagem em pixels

    Returns:
        ValidationVerdict (coordenadas inválidas não lançam exceção)

    Raises:
        DimensionError: Se o array cru não tiver forma (16, 2)
    """
    coords = landmarks.coords if isinstance(landmarks, LandmarkSet) else np.asarray(landmarks, dtype=np.float64)
    if coords.shape != (N_LANDMARKS, 2):
        raise DimensionError("validate_landmark_set", (N_LANDMARKS, 2), coords.shape)
    failures: List[LandmarkFailure] = []
    for lid in LandmarkId:
        x, y = (float(v) for v in coords[int(lid)])
        if not (math.isfinite(x) and math.isfinite(y)):
            failures.append(LandmarkFailure(lid, FailureKind.NON_FINITE, f"coordenada não finita ({x}, {y})"))
        elif not (0.0 <= x < width and 0.0 <= y < height):
            failures.append(LandmarkFailure(lid, FailureKind.OUT_OF_BOUNDS,
                                            f"fora da imagem {width}x{height}: ({x!r}, {y!r})"))
    return ValidationVerdict(tuple(failures))


# ============================================
# PARSE
# ============================================

def _parse_landmarks(raw: Any, indice: int) -> np.ndarray:
    if not isinstance(raw, dict):
        raise ParseError("'landmarks' deve ser um objeto", registro=indice)

    desconhecidos = sorted(set(raw) - set(LandmarkId.nomes()))
    if desconhecidos:
        raise SchemaError(
            f"Landmark desconhecido no registro {indice}: {desconhecidos[0]}",
            landmark=desconhecidos[0], registro=indice
        )

    coords = np.empty((N_LANDMARKS, 2), dtype=np.float64)
    for lid in LandmarkId:
        if lid.name not in raw:
            raise SchemaError(
                f"Landmark ausente no registro {indice}: {lid.name}",
                landmark=lid.name, registro=indice
            )
        par = raw[lid.name]
        if (not isinstance(par, list) or len(par) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in par)):
            raise ParseError(f"{lid.name} deve ser [x, y] numérico", registro=indice)
        coords[int(lid)] = (float(par[0]), float(par[1]))
    return coords


def _parse_record(raw: Any, indice: int, check_bounds: bool) -> AnnotationRecord:
    if not isinstance(raw, dict):
        raise ParseError("registro deve ser um objeto", registro=indice)

    for campo in REQUIRED_FIELDS:
        if campo not in raw:
            raise SchemaError(f"Campo ausente no registro {indice}: {campo}", registro=indice)

    if not isinstance(raw['image_id'], str) or not raw['image_id']:
        raise ParseError("image_id deve ser texto não vazio", registro=indice)

    coords = _parse_landmarks(raw['landmarks'], indice)
    nao_finitos = [f for f in validate_landmark_set(coords, math.inf, math.inf).failures
                   if f.kind is FailureKind.NON_FINITE]
    for falha in nao_finitos:
        raise ValidationError(
            f"Registro {indice} ({raw['image_id']}) inválido: {falha}",
            details={'registro': indice, 'landmark': falha.landmark.name, 'motivo': falha.motivo}
        )
    landmarks = LandmarkSet(coords, unchecked=not check_bounds)

    try:
        record = AnnotationRecord(
            image_id=raw['image_id'],
            width=raw['width'],
            height=raw['height'],
            spacing_mm_per_px=raw['spacing_mm_per_px'],
            landmarks=landmarks,
        )
    except ValidationError as e:
        e.details['registro'] = indice
        raise

    if not check_bounds:
        return record
    for falha in validate_landmark_set(landmarks, record.width, record.height).failures:
        raise ValidationError(
                f"Registro {indice} ({record.image_id}) inválido: {falha}",
                details={'registro': indice, 'landmark': falha.landmark.name, 'motivo': falha.motivo}
            )
    return record


def parse_dataset_container(content: bytes, check_bounds: bool = True
                            ) -> Tuple[List[AnnotationRecord], Optional[Dict[str, Any]]]:
    """
    Lê um arquivo de anotações e devolve (registros, _meta).

    Args:
        content: Conteúdo bruto do arquivo
        check_bounds: False para arquivos de predição

    Returns:
        Registros na ordem do arquivo e o objeto _meta (ou None)

    Raises:
        ParseError: JSON malformado (com linha) ou estrutura inesperada
        SchemaError: Landmark ou campo ausente
        ValidationError: Espaçamento, dimensões ou coordenadas inválidas
    """
    try:
        texto = content.decode('utf-8')
    except UnicodeDecodeError as e:
        raise ParseError(f"conteúdo não é UTF-8 (byte {e.start})")

    try:
        dados = json.loads(texto)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, linha=e.lineno)

    meta = None
    if isinstance(dados, dict):
        if 'records' not in dados:
            raise ParseError("objeto de nível superior sem 'records'")
        extras = sorted(set(dados) - {'records', '_meta'})
        if extras:
            raise ParseError(f"chave inesperada no nível superior: {extras[0]}")
        meta = dados.get('_meta')
        dados = dados['records']

    if not isinstance(dados, list):
        raise ParseError("nível superior deve ser uma lista de registros")

    records = [_parse_record(raw, i, check_bounds) for i, raw in enumerate(dados)]
    logger.debug(f"{len(records)} registros lidos (check_bounds={check_bounds})")
    return records, meta


def parse_dataset(content: bytes, check_bounds: bool = True) -> List[AnnotationRecord]:
    """Lê um arquivo de anotações (ver parse_dataset_container)"""
    records, _ = parse_dataset_container(content, check_bounds=check_bounds)
    return records


# ============================================
# ESCRITA
# ============================================

def write_dataset(records: Sequence[AnnotationRecord], meta: Optional[Dict[str, Any]] = None) -> bytes:
    """
    Serializa registros no formato de anotações.

    Args:
        records: Registros na ordem desejada
        meta: Se fornecido, gera o contêiner {"_meta", "records"}

    Returns:
        Bytes UTF-8 terminados em newline
    """
    corpo: Any = [record.to_dict() for record in records]
    if meta is not None:
        corpo = {'_meta': meta, 'records': corpo}
    try:
        texto = json.dumps(corpo, indent=2, ensure_ascii=False, allow_nan=False)
    except ValueError:
        raise NonFiniteInputError("write_dataset")
    return (texto + "\n").encode('utf-8')
