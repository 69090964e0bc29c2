"""
Agenda da taxa de aprendizado
DESCRIÇÃO: Warm-up linear por passo seguido de decaimento multiplicativo por época
REGRAS DE NEGÓCIO:
    - warmup = start + (1 − start)·min(step, warmup_steps)/warmup_steps
    - decaimento = gamma^(número de milestones <= época)
    - fator = warmup·decaimento; lr efetiva = base_lr·fator
"""

import math
from dataclasses import dataclass
from typing import Tuple

from src.utils.exceptions import ParameterError, require_positive


@dataclass(frozen=True)
class LrSchedule:
    """Parâmetros da agenda (padrões: 5e-4, 500 passos a partir de 0.001, épocas 170 e 200, gamma 0.1)"""
    base_lr: float = 5e-4
    warmup_steps: int = 500
    warmup_start_factor: float = 0.001
    milestones: Tuple[int, ...] = (170, 200)
    gamma: float = 0.1

    def __post_init__(self):
        require_positive("base_lr", self.base_lr)
        if not isinstance(self.warmup_steps, int) or self.warmup_steps < 0:
            raise ParameterError("warmup_steps", self.warmup_steps, "inteiro >= 0")
        if not (0.0 < self.warmup_start_factor <= 1.0):
            raise ParameterError("warmup_start_factor", self.warmup_start_factor, "deve estar em (0, 1]")
        if not (0.0 < self.gamma < 1.0):
            raise ParameterError("gamma", self.gamma, "deve estar em (0, 1)")
        marcos = tuple(int(m) for m in self.milestones)
        if any(b <= a for a, b in zip(marcos, marcos[1:])):
            raise ParameterError("milestones", marcos, "devem ser estritamente crescentes")
        object.__setattr__(self, 'milestones', marcos)

    def learning_rate(self, step: int, epoch: int) -> float:
        return self.base_lr * lr_factor(step, epoch, self)


def lr_factor(step: int, epoch: int, sched: LrSchedule) -> float:
    """
    Fator multiplicativo da lr no passo/época dados.

    Args:
        step: Passos de otimização já executados (>= 0)
        epoch: Época corrente (>= 0)
        sched: Agenda

    Returns:
        warmup_factor·gamma^(#milestones <= epoch)
    """
    if step < 0 or epoch < 0:
        raise ParameterError("step/epoch", (step, epoch), "devem ser >= 0")
    if sched.warmup_steps == 0 or step >= sched.warmup_steps:
        aquecimento = 1.0
    else:
        inicio = sched.warmup_start_factor
        aquecimento = inicio + (1.0 - inicio) * step / sched.warmup_steps
    passados = sum(1 for marco in sched.milestones if marco <= epoch)
    return aquecimento * math.pow(sched.gamma, passados)
