"""
Service de dados sintéticos
DESCRIÇÃO: Gera configurações de 16 landmarks que satisfazem exatamente a construção
           geométrica (eixo CP-AP e três retas perpendiculares), com ruído controlado
REGRAS DE NEGÓCIO:
    - axis_dir = (cos a, sin a) aponta do ápice (AP) para a coroa (CP)
    - CP = AP + (root_length + crown_offset)·axis_dir
    - Âncoras das retas: AP, AP + L/3·axis_dir, AP + L/2·axis_dir
    - Membros deslocados ao longo de n = (−sin a, cos a); lado A negativo, lado P positivo
    - CEJ e cristas ficam em frações fixas do eixo, sem restrição geométrica
    - Ruído gaussiano com numpy Philox (contador, portável); semente por registro
      derivada de SeedSequence([seed, índice])
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.domain.entities import LEVEL_LINE_NAMES, AnnotationRecord, LandmarkSet
from src.domain.value_objects import LandmarkId, N_LANDMARKS
from src.infrastructure.storage import write_bytes
from src.version import __version__
from .annotation_service import write_dataset
from src.utils.exceptions import ParameterError, require_positive

logger = logging.getLogger(__name__)

RNG_NAME = "numpy.Philox"
SPLIT_NAMES = ("train", "val", "test")

SeedLike = Union[int, np.random.SeedSequence]

L = LandmarkId


# ============================================
# PARÂMETROS
# ============================================

@dataclass(frozen=True)
class ToothConfigParams:
    """Parâmetros de uma configuração sintética de dente"""
    axis_angle: float
    root_length: float
    crown_offset: float
    apex: Tuple[float, float]
    half_widths: Dict[str, Dict[LandmarkId, float]]
    cej_half_width: float = 12.0
    crest_fraction: float = 0.85
    crest_half_width: float = 14.0
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        require_positive("root_length", self.root_length)
        require_positive("crown_offset", self.crown_offset)
        require_positive("cej_half_width", self.cej_half_width)
        require_positive("crest_half_width", self.crest_half_width)
        if not (0.0 < self.crest_fraction < 1.0):
            raise ParameterError("crest_fraction", self.crest_fraction, "deve estar em (0, 1)")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma", self.noise_sigma, "deve ser >= 0")
        if not all(math.isfinite(v) for v in (self.axis_angle, *self.apex)):
            raise ParameterError("apex/axis_angle", (self.apex, self.axis_angle), "devem ser finitos")
        if set(self.half_widths) != set(LEVEL_LINE_NAMES):
            raise ParameterError("half_widths", sorted(self.half_widths), f"retas {LEVEL_LINE_NAMES}")
        for nome, membros in self.half_widths.items():
            offsets = list(membros.values())
            if len(set(offsets)) != len(offsets):
                raise ParameterError(nome, offsets, "offsets de uma reta devem ser distintos")
            for landmark, offset in membros.items():
                if landmark is not L.AP and abs(offset) <= 0:
                    raise ParameterError(f"{nome}.{landmark.name}", offset, "|offset| deve ser > 0")

    @property
    def axis_dir(self) -> np.ndarray:
        return np.array([math.cos(self.axis_angle), math.sin(self.axis_angle)])

    @property
    def normal_dir(self) -> np.ndarray:
        return np.array([-math.sin(self.axis_angle), math.cos(self.axis_angle)])


def default_half_widths(apex_bone: float = 6.0, root_13: float = 5.0, bone_13: float = 5.0,
                        root_12: float = 8.0, bone_12: float = 6.0) -> Dict[str, Dict[LandmarkId, float]]:
    """Offsets ao longo de cada reta de nível (A negativo, P positivo)"""
    return {
        "root_apex_level": {L.AB_AP: -apex_bone, L.AP: 0.0, L.PB_AP: apex_bone},
        "apical_third_level": {
            L.AB_13: -(root_13 + bone_13), L.AR_13: -root_13, L.PR_13: root_13, L.PB_13: root_13 + bone_13,
        },
        "mid_root_level": {
            L.AB_12: -(root_12 + bone_12), L.AR_12: -root_12, L.PR_12: root_12, L.PB_12: root_12 + bone_12,
        },
    }


@dataclass(frozen=True)
class SynthRanges:
    """Faixas uniformes de sorteio dos parâmetros (pixels da imagem)"""
    apex_x: Tuple[float, float] = (380.0, 580.0)
    apex_y: Tuple[float, float] = (380.0, 460.0)
    axis_angle: Tuple[float, float] = (-math.pi / 2 - 0.35, -math.pi / 2 + 0.35)
    root_length: Tuple[float, float] = (120.0, 220.0)
    crown_offset: Tuple[float, float] = (60.0, 100.0)
    apex_bone: Tuple[float, float] = (4.0, 10.0)
    root_13: Tuple[float, float] = (4.0, 8.0)
    root_12: Tuple[float, float] = (6.0, 12.0)
    bone_margin: Tuple[float, float] = (3.0, 10.0)
    cej_half_width: Tuple[float, float] = (10.0, 16.0)
    crest_extra: Tuple[float, float] = (1.0, 3.0)


# ============================================
# GERAÇÃO
# ============================================

def level_anchors(params: ToothConfigParams) -> Dict[str, np.ndarray]:
    """Pontos onde cada reta de nível cruza o eixo"""
    ap = np.array(params.apex, dtype=np.float64)
    eixo = params.axis_dir
    comprimento = params.root_length
    return {
        "root_apex_level": ap,
        "apical_third_level": ap + (comprimento / 3.0) * eixo,
        "mid_root_level": ap + (comprimento / 2.0) * eixo,
    }


def generate_tooth_config(params: ToothConfigParams) -> LandmarkSet:
    """
    Configuração exata: eixo perpendicular a três retas mutuamente paralelas.

    Args:
        params: Parâmetros validados

    Returns:
        LandmarkSet sem ruído
    """
    coords = np.empty((N_LANDMARKS, 2), dtype=np.float64)
    ap = np.array(params.apex, dtype=np.float64)
    eixo = params.axis_dir
    normal = params.normal_dir

    coords[L.AP] = ap
    coords[L.CP] = ap + (params.root_length + params.crown_offset) * eixo

    for nome, ancora in level_anchors(params).items():
        for landmark, offset in params.half_widths[nome].items():
            if landmark is L.AP:
                continue
            coords[landmark] = ancora + offset * normal

    cej = ap + params.root_length * eixo
    coords[L.CEJ_A] = cej - params.cej_half_width * normal
    coords[L.CEJ_P] = cej + params.cej_half_width * normal
    crista = ap + params.crest_fraction * params.root_length * eixo
    coords[L.A_crest] = crista - params.crest_half_width * normal
    coords[L.P_crest] = crista + params.crest_half_width * normal
    return LandmarkSet(coords)


def perturb(landmarks: LandmarkSet, noise_sigma: float, seed: SeedLike) -> LandmarkSet:
    """
    Soma ruído gaussiano independente N(0, noise_sigma²) a cada coordenada.

    Args:
        landmarks: Conjunto original
        noise_sigma: Desvio padrão em pixels (>= 0); 0 devolve o conjunto intacto
        seed: Semente do gerador Philox
    """
    if noise_sigma < 0:
        raise ParameterError("noise_sigma", noise_sigma, "deve ser >= 0")
    if noise_sigma == 0:
        return landmarks
    rng = np.random.Generator(np.random.Philox(seed))
    ruido = rng.normal(0.0, noise_sigma, size=(N_LANDMARKS, 2))
    return landmarks.with_coords(landmarks.coords + ruido)


def sample_params(rng: np.random.Generator, ranges: SynthRanges, noise_sigma: float = 0.0,
                  seed: int = 0) -> ToothConfigParams:
    """Sorteia parâmetros dentro das faixas"""
    def u(faixa: Tuple[float, float]) -> float:
        return float(rng.uniform(*faixa))

    apex = (u(ranges.apex_x), u(ranges.apex_y))
    axis_angle = u(ranges.axis_angle)
    root_length = u(ranges.root_length)
    crown_offset = u(ranges.crown_offset)
    half_widths = default_half_widths(
        apex_bone=u(ranges.apex_bone),
        root_13=u(ranges.root_13),
        bone_13=u(ranges.bone_margin),
        root_12=u(ranges.root_12),
        bone_12=u(ranges.bone_margin),
    )
    cej = u(ranges.cej_half_width)
    return ToothConfigParams(
        axis_angle=axis_angle,
        root_length=root_length,
        crown_offset=crown_offset,
        apex=apex,
        half_widths=half_widths,
        cej_half_width=cej,
        crest_half_width=cej + u(ranges.crest_extra),
        noise_sigma=noise_sigma,
        seed=seed,
    )


def record_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, index])


@dataclass(frozen=True)
class SynthOptions:
    """Opções de um conjunto sintético"""
    n_images: int = 347
    split: Tuple[int, int, int] = (36, 149, 162)
    seed: int = 0
    noise_sigma: float = 0.0
    width: int = 957
    height: int = 555
    spacing_mm_per_px: float = 0.1
    ranges: SynthRanges = field(default_factory=SynthRanges)

    def __post_init__(self):
        if len(self.split) != 3 or any(c < 0 for c in self.split):
            raise ParameterError("split", self.split, "três contagens >= 0")
        if sum(self.split) != self.n_images:
            raise ParameterError("split", self.split, f"deve somar n_images={self.n_images}")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma", self.noise_sigma, "deve ser >= 0")
        require_positive("spacing_mm_per_px", self.spacing_mm_per_px)


def synth_record(options: SynthOptions, index: int) -> AnnotationRecord:
    """Gera o registro de índice global `index` (determinístico dado seed e índice)"""
    params_seed, noise_seed = record_seed(options.seed, index).spawn(2)
    rng = np.random.Generator(np.random.Philox(params_seed))
    params = sample_params(rng, options.ranges, options.noise_sigma, options.seed)
    landmarks = perturb(generate_tooth_config(params), options.noise_sigma, noise_seed)

    coords = landmarks.as_array()
    coords[:, 0] = np.clip(coords[:, 0], 0.0, options.width - 1)
    coords[:, 1] = np.clip(coords[:, 1], 0.0, options.height - 1)
    return AnnotationRecord(
        image_id=f"synth_{index:04d}",
        width=options.width,
        height=options.height,
        spacing_mm_per_px=options.spacing_mm_per_px,
        landmarks=LandmarkSet(coords),
    )


def build_dataset(options: SynthOptions, threads: int = 1) -> Dict[str, List[AnnotationRecord]]:
    """Registros de cada divisão (train, val, test) na ordem dos índices"""
    indices = range(options.n_images)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda i: synth_record(options, i), indices))
    else:
        records = [synth_record(options, i) for i in indices]

    divisoes: Dict[str, List[AnnotationRecord]] = {}
    inicio = 0
    for nome, contagem in zip(SPLIT_NAMES, options.split):
        divisoes[nome] = records[inicio:inicio + contagem]
        inicio += contagem
    return divisoes


def dataset_meta(options: SynthOptions, split_name: str) -> Dict[str, object]:
    return {
        'generator_version': __version__,
        'seed': options.seed,
        'noise_sigma': options.noise_sigma,
        'rng_name': RNG_NAME,
        'split': split_name,
        'spacing_mm_per_px': options.spacing_mm_per_px,
    }


def generate_dataset(out_dir: Union[str, Path], options: Optional[SynthOptions] = None,
                     threads: int = 1) -> Dict[str, Path]:
    """
    Grava train.json, val.json e test.json em out_dir.

    Returns:
        Caminho de cada divisão

    Raises:
        ArtifactWriteError: Se o destino não puder ser gravado
    """
    options = options or SynthOptions()
    divisoes = build_dataset(options, threads=threads)
    caminhos: Dict[str, Path] = {}
    for nome, records in divisoes.items():
        conteudo = write_dataset(records, meta=dataset_meta(options, nome))
        caminhos[nome] = write_bytes(Path(out_dir) / f"{nome}.json", conteudo)
    logger.info(
        f"Conjunto sintético gerado: {options.split} registros, seed={options.seed}, "
        f"noise_sigma={options.noise_sigma}"
    )
    return caminhos


def split_counts(texto: Sequence[int]) -> Tuple[int, int, int]:
    """Normaliza a divisão informada na CLI ('36,149,162')"""
    valores = tuple(int(v) for v in texto)
    if len(valores) != 3:
        raise ParameterError("split", texto, "três contagens a,b,c")
    return valores  # type: ignore[return-value]
