"""
Otimizador AdamW
DESCRIÇÃO: Adam com decaimento de peso desacoplado sobre dicionários de arrays numpy
REGRAS DE NEGÓCIO:
    - m <- β1·m + (1−β1)·g ; v <- β2·v + (1−β2)·g²
    - m̂ = m/(1−β1^t) ; v̂ = v/(1−β2^t)
    - param <- param − lr·m̂/(√v̂ + ε) − lr·wd·param (param anterior ao passo)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from src.utils.exceptions import DimensionError, ParameterError, require_positive

logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]


@dataclass
class AdamWState:
    """Momentos por parâmetro e contador de passos"""
    first_moment: Params = field(default_factory=dict)
    second_moment: Params = field(default_factory=dict)
    step_count: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01

    def __post_init__(self):
        for nome, beta in (("beta1", self.beta1), ("beta2", self.beta2)):
            if not (0.0 <= beta < 1.0):
                raise ParameterError(nome, beta, "deve estar em [0, 1)")
        require_positive("eps", self.eps)
        if self.weight_decay < 0:
            raise ParameterError("weight_decay", self.weight_decay, "deve ser >= 0")

    def copy(self) -> 'AdamWState':
        return AdamWState(
            first_moment={k: v.copy() for k, v in self.first_moment.items()},
            second_moment={k: v.copy() for k, v in self.second_moment.items()},
            step_count=self.step_count,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            weight_decay=self.weight_decay,
        )


def adamw_step(params: Params, grads: Params, state: AdamWState, lr: float,
               inplace: bool = False) -> Tuple[Params, AdamWState]:
    """
    Um passo AdamW.

    Args:
        params: Parâmetros por nome
        grads: Gradientes com as mesmas chaves e formas
        state: Estado do otimizador
        lr: Taxa de aprendizado efetiva (> 0)
        inplace: Atualiza params e state sem cópias (usado no laço de treino)

    Returns:
        (params atualizados, estado atualizado)

    Raises:
        DimensionError: Se chaves ou formas não coincidirem
    """
    require_positive("lr", lr)
    if set(params) != set(grads):
        raise DimensionError("adamw_step", sorted(params), sorted(grads))
    for nome, valor in params.items():
        if grads[nome].shape != valor.shape:
            raise DimensionError(f"adamw_step[{nome}]", valor.shape, grads[nome].shape)

    novo_estado = state if inplace else state.copy()
    novo_estado.step_count += 1
    t = novo_estado.step_count
    b1, b2 = novo_estado.beta1, novo_estado.beta2
    correcao1 = 1.0 - b1 ** t
    correcao2 = 1.0 - b2 ** t

    novos: Params = params if inplace else {}
    for nome in sorted(params):
        g = grads[nome]
        m = novo_estado.first_moment.get(nome)
        v = novo_estado.second_moment.get(nome)
        if m is None:
            m = np.zeros_like(params[nome])
            v = np.zeros_like(params[nome])
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        novo_estado.first_moment[nome] = m
        novo_estado.second_moment[nome] = v

        passo = lr * (m / correcao1) / (np.sqrt(v / correcao2) + novo_estado.eps)
        decaimento = lr * novo_estado.weight_decay * params[nome]
        if inplace:
            params[nome] -= passo + decaimento
        else:
            novos[nome] = params[nome] - passo - decaimento
    return novos, novo_estado
