"""
Experimentos de treino
DESCRIÇÃO: Varredura de lambda com execuções gêmeas e ablação 2x2 {full, LoRA} x {sem, com geo}
REGRAS DE NEGÓCIO:
    - Execuções gêmeas compartilham configuração e semente, mudando só lambda (ou modo)
    - lambda* = valor positivo com menor resíduo geométrico de validação entre os que degradam
      o MRE em no máximo mre_tolerance_percent; sem nenhum dentro da tolerância, vale o menor resíduo
    - O valor de referência 1e-5 entra na varredura mesmo que o efeito seja desprezível na escala de bancada
"""

import logging
import math
from dataclasses import replace
from typing import List, Sequence

from src.application.dtos import AblationReport, RunSummary, SweepReport, TrainReport
from src.application.dtos.report_dtos import relative_change_percent
from src.domain.entities import AnnotationRecord
from .trainer import TrainConfig, Trainer
from src.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

REFERENCE_LAMBDA = 1e-5
DEFAULT_SWEEP = (0.0, 1e-5, 1e-3, 1e-2, 1e-1)
MRE_TOLERANCE_PERCENT = 10.0


def summarize(label: str, config: TrainConfig, report: TrainReport) -> RunSummary:
    final = report.final
    return RunSummary(
        label=label,
        mode=config.mode,
        lam=config.lam,
        loss_total=final.loss_total,
        geo_residual_val=final.geo_residual_val,
        mre_val_px=final.mre_val_px,
        trainable_params=report.trainable_params,
        total_params=report.total_params,
    )


def run_lambda_sweep(train: Sequence[AnnotationRecord], val: Sequence[AnnotationRecord],
                     config: TrainConfig, lambdas: Sequence[float] = DEFAULT_SWEEP,
                     mre_tolerance_percent: float = MRE_TOLERANCE_PERCENT) -> SweepReport:
    """
    Treina uma execução por lambda com a mesma semente e compara com lambda = 0.

    Args:
        mre_tolerance_percent: Degradação máxima do MRE aceita na escolha de lambda*

    Returns:
        SweepReport com lambda*, redução percentual do resíduo e degradação percentual do MRE

    Raises:
        ParameterError: Se a varredura não tiver lambda = 0 e ao menos um lambda > 0
    """
    valores = sorted(set(float(l) for l in lambdas))
    if 0.0 not in valores or len(valores) < 2:
        raise ParameterError("lambdas", list(lambdas), "precisa de 0 e ao menos um valor > 0")

    runs: List[RunSummary] = []
    for lam in valores:
        cfg = replace(config, lam=lam)
        logger.info(f"Varredura: treinando lambda={lam!r}")
        runs.append(summarize(f"lambda={lam!r}", cfg, Trainer(cfg).train(train, val)))

    base = runs[0]
    candidatos = [r for r in runs if r.lam > 0 and math.isfinite(r.geo_residual_val)]
    toleraveis = [
        r for r in candidatos
        if relative_change_percent(r.mre_val_px, base.mre_val_px) <= mre_tolerance_percent
    ]
    if toleraveis:
        melhor = min(toleraveis, key=lambda r: (r.geo_residual_val, r.lam))
    elif candidatos:
        melhor = min(candidatos, key=lambda r: (r.geo_residual_val, r.lam))
    else:
        melhor = runs[1]

    reducao = -relative_change_percent(melhor.geo_residual_val, base.geo_residual_val)
    degradacao = relative_change_percent(melhor.mre_val_px, base.mre_val_px)
    logger.info(
        f"lambda*={melhor.lam!r}: resíduo {base.geo_residual_val:.6g} -> {melhor.geo_residual_val:.6g} "
        f"({reducao:.2f}% menor), MRE {degradacao:+.2f}%"
    )
    return SweepReport(
        runs=runs,
        best_lambda=melhor.lam,
        residual_reduction_percent=reducao,
        mre_degradation_percent=degradacao,
    )


def run_ablation(train: Sequence[AnnotationRecord], val: Sequence[AnnotationRecord],
                 config: TrainConfig) -> AblationReport:
    """
    Matriz 2x2: modelo completo (free_logits) e LoRA (lora_linear), cada um sem e com L_geo.

    A variante "com L_geo" usa o lambda de config (deve ser > 0).
    """
    if config.lam <= 0:
        raise ParameterError("lambda", config.lam, "a ablação precisa de lambda > 0")

    variantes = [
        ("full", "free_logits", 0.0),
        ("full+geo", "free_logits", config.lam),
        ("lora", "lora_linear", 0.0),
        ("lora+geo", "lora_linear", config.lam),
    ]
    runs: List[RunSummary] = []
    for label, mode, lam in variantes:
        cfg = replace(config, mode=mode, lam=lam)
        logger.info(f"Ablação: treinando {label}")
        runs.append(summarize(label, cfg, Trainer(cfg).train(train, val)))
    return AblationReport(runs=runs)
