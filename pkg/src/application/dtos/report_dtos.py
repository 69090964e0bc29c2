"""
DTOs de relatórios
DESCRIÇÃO: Resultados de avaliação, treino, gradcheck e experimentos, prontos para CSV
REGRAS DE NEGÓCIO:
    - Tabelas saem como pandas.DataFrame com colunas fixas e ordem determinística
    - Nenhum campo carrega horário ou caminho absoluto (artefatos reproduzíveis)
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from src.domain.value_objects import LandmarkId

REFERENCE_TABLE_ROW = "63.19 / 84.14 / 93.36 / 80.23 / 0.747"
REFERENCE_PARAM_REDUCTION = "330M -> 24M trainable parameters (92.73% reduction)"


def format_threshold(threshold: float) -> str:
    """Nome da métrica SDR: sdr_0.5, sdr_1.0, sdr_2.0"""
    return f"sdr_{float(threshold)!r}"


# ============================================
# AVALIAÇÃO
# ============================================

@dataclass(frozen=True)
class MetricsReport:
    """MRE, SDR por limiar, SDR médio, resíduo geométrico e MRE por landmark"""
    thresholds: Tuple[float, ...]
    sdr: Dict[float, float]
    sdr_average: float
    mre_mm: float
    geometric_residual: float
    per_landmark_mre_mm: Tuple[float, ...]
    n_points: int
    n_images: int
    degenerate_count: int = 0

    def to_dataframe(self) -> pd.DataFrame:
        linhas = [(format_threshold(t), self.sdr[t]) for t in self.thresholds]
        linhas += [
            ('sdr_average', self.sdr_average),
            ('mre_mm', self.mre_mm),
            ('geometric_residual', self.geometric_residual),
        ]
        return pd.DataFrame(linhas, columns=['metric', 'value'])

    def per_landmark_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(lid.name, self.per_landmark_mre_mm[int(lid)]) for lid in LandmarkId],
            columns=['landmark', 'mre_mm']
        )

    def table_row(self) -> str:
        """Linha no layout da tabela comparativa: SDR por limiar / SDR médio / MRE"""
        partes = [f"{self.sdr[t]:.2f}" for t in self.thresholds]
        partes.append(f"{self.sdr_average:.2f}")
        partes.append(f"{self.mre_mm:.3f}")
        return " / ".join(partes)


# ============================================
# TREINAMENTO
# ============================================

TRAIN_COLUMNS = [
    'epoch', 'step', 'lr_factor', 'loss_total', 'loss_mse', 'loss_geo',
    'geo_residual_val', 'mre_val_px', 'degenerate_count',
]


@dataclass(frozen=True)
class EpochRecord:
    """Uma linha do relatório de treino"""
    epoch: int
    step: int
    lr_factor: float
    loss_total: float
    loss_mse: float
    loss_geo: float
    geo_residual_val: float
    mre_val_px: float
    degenerate_count: int

    def as_row(self) -> List[Any]:
        return [getattr(self, coluna) for coluna in TRAIN_COLUMNS]


@dataclass
class TrainReport:
    """Relatório de treino: eco da configuração, épocas, curva geo e predições de validação"""
    config: Dict[str, Any]
    epochs: List[EpochRecord] = field(default_factory=list)
    geo_curve: List[Tuple[int, float]] = field(default_factory=list)
    predictions_val: List[Any] = field(default_factory=list)
    trainable_params: int = 0
    total_params: int = 0

    @property
    def final(self) -> Optional[EpochRecord]:
        return self.epochs[-1] if self.epochs else None

    def header_lines(self) -> List[str]:
        """Linhas '# key=value' na ordem da configuração"""
        linhas = [f"# {chave}={valor}" for chave, valor in self.config.items()]
        linhas.append(f"# trainable_params={self.trainable_params}")
        linhas.append(f"# total_params={self.total_params}")
        return linhas

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([e.as_row() for e in self.epochs], columns=TRAIN_COLUMNS)

    def curve_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.geo_curve, columns=['step', 'loss_geo'])


# ============================================
# GRADCHECK
# ============================================

STATUS_OK = "ok"
STATUS_FAIL = "FAIL"
STATUS_NOT_EXERCISED = "not exercised"
STATUS_FALLBACK = "fallback path: zero gradient verified"


@dataclass(frozen=True)
class GradcheckEntry:
    """Erro relativo máximo de um componente"""
    component: str
    max_rel_err: float
    status: str

    @property
    def passed(self) -> bool:
        return self.status != STATUS_FAIL


@dataclass
class GradcheckReport:
    """Resultado do gradcheck por componente"""
    entries: List[GradcheckEntry]
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, component: str) -> GradcheckEntry:
        for e in self.entries:
            if e.component == component:
                return e
        raise KeyError(component)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(e.component, e.max_rel_err, e.status) for e in self.entries],
            columns=['component', 'max_rel_err', 'status']
        )


# ============================================
# EXPERIMENTOS
# ============================================

@dataclass(frozen=True)
class RunSummary:
    """Métricas finais de uma execução de treino"""
    label: str
    mode: str
    lam: float
    loss_total: float
    geo_residual_val: float
    mre_val_px: float
    trainable_params: int
    total_params: int

    @property
    def reduction_percent(self) -> float:
        if self.total_params == 0:
            return 0.0
        return 100.0 * (1.0 - self.trainable_params / self.total_params)


SUMMARY_COLUMNS = [
    'label', 'mode', 'lambda', 'loss_total', 'geo_residual_val', 'mre_val_px',
    'trainable_params', 'total_params', 'reduction_percent',
]


def _summary_rows(runs: List[RunSummary]) -> List[List[Any]]:
    return [
        [r.label, r.mode, r.lam, r.loss_total, r.geo_residual_val, r.mre_val_px,
         r.trainable_params, r.total_params, r.reduction_percent]
        for r in runs
    ]


@dataclass
class SweepReport:
    """Varredura de lambda com execuções gêmeas (mesma semente)"""
    runs: List[RunSummary]
    best_lambda: float
    residual_reduction_percent: float
    mre_degradation_percent: float

    @property
    def baseline(self) -> RunSummary:
        return next(r for r in self.runs if r.lam == 0.0)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(_summary_rows(self.runs), columns=SUMMARY_COLUMNS)

    def header_lines(self) -> List[str]:
        return [
            f"# best_lambda={self.best_lambda!r}",
            f"# residual_reduction_percent={self.residual_reduction_percent!r}",
            f"# mre_degradation_percent={self.mre_degradation_percent!r}",
        ]


@dataclass
class AblationReport:
    """Matriz 2x2: {full, LoRA} x {sem, com perda geométrica}"""
    runs: List[RunSummary]

    def run(self, label: str) -> RunSummary:
        return next(r for r in self.runs if r.label == label)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(_summary_rows(self.runs), columns=SUMMARY_COLUMNS)

    def header_lines(self) -> List[str]:
        return [f"# reference: {REFERENCE_PARAM_REDUCTION}"]


def relative_change_percent(novo: float, base: float) -> float:
    """100·(novo − base)/base; nan quando base é zero"""
    if base == 0:
        return math.nan
    return 100.0 * (novo - base) / base
