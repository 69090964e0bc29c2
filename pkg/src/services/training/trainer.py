"""
Treinador
DESCRIÇÃO: Otimização em escala de bancada da perda total (MSE + λ·geo) sobre heatmaps
REGRAS DE NEGÓCIO:
    - Coordenadas de imagem vão para a grade do heatmap por LatticeTransform isotrópico
    - Lote 0 (ou >= amostras) = conjunto inteiro, sem embaralhar; senão ordem embaralhada por época
    - Perda do lote = média das perdas por amostra, somadas em ordem fixa de amostra
    - Ajuste degenerado: termo geométrico zerado para a amostra e contado na época
    - Perda não finita -> DivergenceError com a última época finita
    - Mesma configuração e semente -> trajetória idêntica bit a bit
"""

import logging
import math
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from src.application.dtos import EpochRecord, TrainReport
from src.domain.entities import AnnotationRecord, LandmarkSet, LineGroupSchema
from src.domain.value_objects import LossBreakdown, LossMode, N_LANDMARKS
from src.infrastructure.logging import get_metrics_collector
from src.services.annotation_service import line_groups_default
from src.services.geometry_service import EPS_ABS, EPS_ISO, geometric_loss
from src.services.heatmap_service import LatticeTransform, gaussian_heatmaps, soft_argmax_stack
from src.services.loss_service import compute_total_loss
from src.services.models import BaseHeatmapModel, ModelFactory
from .lora import trainable_param_count
from .optimizer import AdamWState, adamw_step
from .schedule import LrSchedule, lr_factor
from src.utils.exceptions import DegenerateDirectionError, DivergenceError, ParameterError, require_positive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Configuração de uma execução de treino"""
    mode: str = "free_logits"
    lam: float = 1e-5
    temperature: float = 0.1
    sigma: float = 2.0
    loss_mode: LossMode = LossMode.PAPER_LITERAL
    epochs: int = 300
    batch: int = 0
    seed: int = 0
    width: int = 64
    height: int = 64
    schedule: LrSchedule = field(default_factory=LrSchedule)
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01
    lora_rank: int = 4
    lora_alpha: float = 4.0
    feature_dim: int = 32
    base_scale: float = 0.01
    eps_iso: float = EPS_ISO
    eps_abs: float = EPS_ABS
    threads: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ParameterError("lambda", self.lam, "deve ser >= 0 e finito")
        require_positive("temperature", self.temperature)
        require_positive("sigma", self.sigma)
        for nome, valor in (("epochs", self.epochs), ("width", self.width), ("height", self.height),
                            ("lora_rank", self.lora_rank), ("feature_dim", self.feature_dim),
                            ("threads", self.threads)):
            if not isinstance(valor, int) or valor <= 0:
                raise ParameterError(nome, valor, "inteiro > 0")
        if not isinstance(self.batch, int) or self.batch < 0:
            raise ParameterError("batch", self.batch, "inteiro >= 0 (0 = conjunto inteiro)")
        object.__setattr__(self, 'loss_mode', LossMode(self.loss_mode))

    def schema(self) -> LineGroupSchema:
        return line_groups_default(self.loss_mode)

    def header(self) -> "OrderedDict[str, Any]":
        """Eco da configuração para o cabeçalho do relatório"""
        s = self.schedule
        return OrderedDict([
            ('mode', self.mode),
            ('lambda', repr(self.lam)),
            ('temperature', repr(self.temperature)),
            ('sigma', repr(self.sigma)),
            ('loss_mode', self.loss_mode.value),
            ('epochs', self.epochs),
            ('batch', self.batch),
            ('seed', self.seed),
            ('width', self.width),
            ('height', self.height),
            ('lr', repr(s.base_lr)),
            ('warmup_steps', s.warmup_steps),
            ('warmup_start_factor', repr(s.warmup_start_factor)),
            ('milestones', ",".join(str(m) for m in s.milestones)),
            ('gamma', repr(s.gamma)),
            ('beta1', repr(self.beta1)),
            ('beta2', repr(self.beta2)),
            ('eps', repr(self.eps)),
            ('weight_decay', repr(self.weight_decay)),
            ('lora_rank', self.lora_rank),
            ('lora_alpha', repr(self.lora_alpha)),
            ('feature_dim', self.feature_dim),
            ('base_scale', repr(self.base_scale)),
        ])


@dataclass
class TrainState:
    """Parâmetros, momentos do otimizador e contadores"""
    model: BaseHeatmapModel
    optimizer: AdamWState
    step: int = 0
    epoch: int = 0


@dataclass
class _Samples:
    """Amostras na grade do heatmap: treino primeiro, depois validação"""
    records: List[AnnotationRecord]
    n_train: int
    transforms: List[LatticeTransform]
    target_coords: np.ndarray
    target_values: np.ndarray


def _prepare_samples(train: Sequence[AnnotationRecord], val: Sequence[AnnotationRecord],
                     config: TrainConfig) -> _Samples:
    records = list(train) + list(val)
    transforms = [
        LatticeTransform.fit(r.width, r.height, config.width, config.height) for r in records
    ]
    if records:
        target_coords = np.stack([t.to_lattice(r.landmarks.coords) for r, t in zip(records, transforms)])
    else:
        target_coords = np.zeros((0, N_LANDMARKS, 2))
    target_values = np.stack([
        gaussian_heatmaps(c, config.width, config.height, config.sigma) for c in target_coords
    ]) if records else np.zeros((0, N_LANDMARKS, config.height, config.width))
    return _Samples(records, len(train), transforms, target_coords, target_values)


def _require_finite(logits: np.ndarray, epoch: int, ultima_finita: Optional[int]):
    """Logits não finitos significam parâmetros divergidos"""
    if not np.isfinite(logits).all():
        raise DivergenceError(epoch, ultima_finita)


class Trainer:
    """Laço de otimização determinístico sobre um modelo de heatmap"""

    def __init__(self, config: TrainConfig):
        self.config = config
        self.schema = config.schema()
        self._metrics = get_metrics_collector()

    # ----------------------------------------
    # Perdas por amostra
    # ----------------------------------------

    def _sample_loss(self, logits: np.ndarray, samples: _Samples, indice: int
                     ) -> Tuple[LossBreakdown, np.ndarray]:
        c = self.config
        return compute_total_loss(
            logits, samples.target_coords[indice], self.schema, c.temperature, c.sigma, c.lam,
            target_values=samples.target_values[indice], eps_iso=c.eps_iso, eps_abs=c.eps_abs,
        )

    def batch_losses(self, logits: np.ndarray, samples: _Samples, indices: Sequence[int]
                     ) -> List[Tuple[LossBreakdown, np.ndarray]]:
        """Perdas por amostra na ordem de `indices` (paralelas se threads > 1)"""
        trabalhos = list(zip(logits, indices))
        if self.config.threads > 1 and len(trabalhos) > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                return list(pool.map(lambda t: self._sample_loss(t[0], samples, t[1]), trabalhos))
        return [self._sample_loss(l, samples, i) for l, i in trabalhos]

    # ----------------------------------------
    # Validação
    # ----------------------------------------

    def _decode(self, model: BaseHeatmapModel, samples: _Samples, indices: Sequence[int],
                epoch: int, ultima_finita: Optional[int]) -> List[np.ndarray]:
        """Coordenadas decodificadas em pixels de imagem"""
        if not indices:
            return []
        logits = model.forward(indices)
        _require_finite(logits, epoch, ultima_finita)
        return [
            samples.transforms[i].to_image(soft_argmax_stack(l, self.config.temperature))
            for l, i in zip(logits, indices)
        ]

    def _validation_metrics(self, decoded: List[np.ndarray], samples: _Samples,
                            indices: Sequence[int]) -> Tuple[float, float]:
        """(resíduo geométrico médio em modo absoluto, MRE médio em pixels de imagem)"""
        if not indices:
            return math.nan, math.nan
        schema_abs = line_groups_default(LossMode.ABSOLUTE)
        residuos = []
        distancias = []
        for coords, i in zip(decoded, indices):
            try:
                residuos.append(geometric_loss(coords, schema_abs, self.config.eps_iso,
                                               self.config.eps_abs).total)
            except DegenerateDirectionError:
                pass
            diff = coords - samples.records[i].landmarks.coords
            distancias.extend(np.hypot(diff[:, 0], diff[:, 1]))
        residuo = math.fsum(residuos) / len(residuos) if residuos else math.nan
        return residuo, math.fsum(distancias) / len(distancias)

    # ----------------------------------------
    # Treino
    # ----------------------------------------

    def build_state(self, samples: _Samples) -> TrainState:
        c = self.config
        model = ModelFactory.criar_modelo(
            c.mode, [r.image_id for r in samples.records], N_LANDMARKS, c.height, c.width,
            rank=c.lora_rank, alpha=c.lora_alpha, feature_dim=c.feature_dim,
            base_scale=c.base_scale, seed=c.seed,
        )
        optimizer = AdamWState(beta1=c.beta1, beta2=c.beta2, eps=c.eps, weight_decay=c.weight_decay)
        return TrainState(model=model, optimizer=optimizer)

    def _batches(self, fit: List[int], rng: np.random.Generator) -> List[List[int]]:
        tamanho = self.config.batch
        if tamanho == 0 or tamanho >= len(fit):
            return [list(fit)]
        ordem = [fit[i] for i in rng.permutation(len(fit))]
        return [ordem[i:i + tamanho] for i in range(0, len(ordem), tamanho)]

    def train(self, train: Sequence[AnnotationRecord], val: Sequence[AnnotationRecord]) -> TrainReport:
        """
        Executa o treino completo.

        Args:
            train: Registros de treino
            val: Registros de validação

        Returns:
            TrainReport com uma linha por época, curva geo por passo e predições de validação

        Raises:
            ParameterError: Se não houver amostras a otimizar
            DivergenceError: Se a perda deixar de ser finita
        """
        c = self.config
        logger.info(
            f"Treino {c.mode}: T={c.temperature!r}, lambda={c.lam!r}, loss_mode={c.loss_mode.value}, "
            f"épocas={c.epochs}, lote={c.batch}, semente={c.seed}"
        )
        samples = _prepare_samples(train, val, c)
        state = self.build_state(samples)
        fit = state.model.fit_indices(samples.n_train)
        if not fit:
            raise ParameterError("train", len(train), "nenhuma amostra para otimizar")
        val_indices = list(range(samples.n_train, len(samples.records)))

        treinaveis, total, reducao = trainable_param_count(state.model.describe())
        logger.info(f"Parâmetros treináveis: {treinaveis} de {total} (redução {reducao:.2f}%)")

        report = TrainReport(config=c.header(), trainable_params=treinaveis, total_params=total)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([c.seed, 2])))
        params = state.model.parameters()
        ultima_finita: Optional[int] = None

        for epoch in range(c.epochs):
            state.epoch = epoch
            perdas: List[LossBreakdown] = []
            for lote in self._batches(fit, rng):
                fator = lr_factor(state.step, epoch, c.schedule)
                logits = state.model.forward(lote)
                _require_finite(logits, epoch, ultima_finita)
                resultados = self.batch_losses(logits, samples, lote)
                breakdowns = [b for b, _ in resultados]
                loss_lote = math.fsum(b.total for b in breakdowns) / len(lote)
                if not math.isfinite(loss_lote):
                    raise DivergenceError(epoch, ultima_finita)

                grads_logits = np.stack([g for _, g in resultados]) / len(lote)
                grads = state.model.backward(lote, grads_logits)
                adamw_step(params, grads, state.optimizer, c.schedule.base_lr * fator, inplace=True)

                report.geo_curve.append((state.step, math.fsum(b.geo for b in breakdowns) / len(lote)))
                state.step += 1
                perdas.extend(breakdowns)

            degenerados = sum(1 for b in perdas if b.degenerate)
            if self._metrics and degenerados:
                self._metrics.increment("ajustes_degenerados", degenerados)

            decoded = self._decode(state.model, samples, val_indices, epoch, ultima_finita)
            residuo, mre_px = self._validation_metrics(decoded, samples, val_indices)
            n = len(perdas)
            registro = EpochRecord(
                epoch=epoch,
                step=state.step,
                lr_factor=fator,
                loss_total=math.fsum(b.total for b in perdas) / n,
                loss_mse=math.fsum(b.mse for b in perdas) / n,
                loss_geo=math.fsum(b.geo for b in perdas) / n,
                geo_residual_val=residuo,
                mre_val_px=mre_px,
                degenerate_count=degenerados,
            )
            report.epochs.append(registro)
            ultima_finita = epoch
            logger.debug(
                f"Época {epoch}: total={registro.loss_total:.6g} mse={registro.loss_mse:.6g} "
                f"geo={registro.loss_geo:.6g} resíduo_val={residuo:.6g} mre_val={mre_px:.4g}px "
                f"degenerados={degenerados}"
            )

        decoded = self._decode(state.model, samples, val_indices, c.epochs - 1, ultima_finita)
        report.predictions_val = [
            samples.records[i].with_landmarks(LandmarkSet(coords, unchecked=True))
            for coords, i in zip(decoded, val_indices)
        ]
        final = report.final
        logger.info(
            f"Treino concluído: perda={final.loss_total:.6g}, resíduo_val={final.geo_residual_val:.6g}, "
            f"mre_val={final.mre_val_px:.4g}px"
        )
        return report


def train(train_records: Sequence[AnnotationRecord], val_records: Sequence[AnnotationRecord],
          config: Optional[TrainConfig] = None) -> TrainReport:
    """Atalho funcional para Trainer(config).train(...)"""
    return Trainer(config or TrainConfig()).train(train_records, val_records)
