"""
Adaptação de baixo posto (LoRA)
DESCRIÇÃO: Mapa linear congelado com correção treinável (alpha/r)·B·A e contagem de parâmetros
REGRAS DE NEGÓCIO:
    - y = W·x + (alpha/r)·B·(A·x)
    - B começa em zero: na inicialização o mapa adaptado é exatamente W
    - A começa uniforme em ±1/√d_in
    - Parâmetros treináveis por mapa adaptado: r·(d_in + d_out)
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.utils.exceptions import DimensionError, NonFiniteInputError, ParameterError



@dataclass
class LoraLinear:
    """Camada linear com adaptador de baixo posto"""
    weight: np.ndarray
    a: np.ndarray
    b: np.ndarray
    alpha: float
    rank: int

    def __post_init__(self):
        d_out, d_in = self.weight.shape
        if self.rank <= 0:
            raise ParameterError("rank", self.rank, "deve ser >= 1")
        if self.a.shape != (self.rank, d_in):
            raise DimensionError("LoraLinear.A", (self.rank, d_in), self.a.shape)
        if self.b.shape != (d_out, self.rank):
            raise DimensionError("LoraLinear.B", (d_out, self.rank), self.b.shape)

    @classmethod
    def initialize(cls, weight: np.ndarray, rank: int, alpha: float,
                   rng: np.random.Generator) -> 'LoraLinear':
        """A uniforme em ±1/√d_in, B zero"""
        d_out, d_in = weight.shape
        limite = 1.0 / math.sqrt(d_in)
        a = rng.uniform(-limite, limite, size=(rank, d_in))
        b = np.zeros((d_out, rank), dtype=np.float64)
        return cls(weight=weight, a=a, b=b, alpha=float(alpha), rank=int(rank))

    @property
    def d_in(self) -> int:
        return self.weight.shape[1]

    @property
    def d_out(self) -> int:
        return self.weight.shape[0]

    @property
    def scaling(self) -> float:
        return self.alpha / self.rank

    @property
    def trainable_count(self) -> int:
        return self.rank * (self.d_in + self.d_out)

    def effective_weight(self) -> np.ndarray:
        return self.weight + self.scaling * (self.b @ self.a)


def lora_forward(layer: LoraLinear, x: np.ndarray) -> np.ndarray:
    """
    y = W·x + (alpha/r)·B·(A·x) para um vetor (d_in,) ou lote (n, d_in).

    Raises:
        DimensionError: Se x não tiver d_in componentes
        NonFiniteInputError: Se x não for finito
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape[-1] != layer.d_in:
        raise DimensionError("lora_forward", layer.d_in, arr.shape)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError("lora_forward")
    base = arr @ layer.weight.T
    return base + layer.scaling * ((arr @ layer.a.T) @ layer.b.T)


def lora_backward(layer: LoraLinear, x: np.ndarray, grad_y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Gradientes (dA, dB) para entradas (n, d_in) e gradientes de saída (n, d_out)"""
    ax = x @ layer.a.T
    grad_b = layer.scaling * (grad_y.T @ ax)
    grad_a = layer.scaling * ((grad_y @ layer.b).T @ x)
    return grad_a, grad_b


# ============================================
# CONTAGEM DE PARÂMETROS
# ============================================

@dataclass(frozen=True)
class AdapterSpec:
    """Mapa linear adaptado por LoRA"""
    name: str
    d_in: int
    d_out: int
    rank: int
    alpha: float

    @property
    def adapter_params(self) -> int:
        return self.rank * (self.d_in + self.d_out)

    @property
    def base_params(self) -> int:
        return self.d_in * self.d_out


@dataclass(frozen=True)
class ModelDescription:
    """Mapas adaptados, parâmetros congelados restantes e parâmetros de cabeça treináveis"""
    adapters: Tuple[AdapterSpec, ...] = ()
    frozen_params: int = 0
    head_params: int = 0
    name: str = "model"


def trainable_param_count(description: ModelDescription) -> Tuple[int, int, float]:
    """
    Conta parâmetros treináveis e totais.

    Returns:
        (treináveis, total, redução percentual = 100·(1 − treináveis/total))
    """
    treinaveis = sum(a.adapter_params for a in description.adapters) + description.head_params
    total = sum(a.base_params for a in description.adapters) + description.frozen_params \
        + description.head_params
    reducao = 100.0 * (1.0 - treinaveis / total) if total else 0.0
    return treinaveis, total, reducao


def transformer_adapter_description(depth: int = 24, width: int = 1024,
                                    frozen_other: int = 0, head_params: int = 0,
                                    qkv: Tuple[int, float] = (4, 4.0),
                                    proj: Tuple[int, float] = (8, 8.0),
                                    name: Optional[str] = None) -> ModelDescription:
    """
    Adaptadores de um encoder transformer: qkv (width -> 3·width) e projeção (width -> width)
    por bloco, com (rank, alpha) configuráveis.
    """
    adapters: List[AdapterSpec] = []
    for bloco in range(depth):
        adapters.append(AdapterSpec(f"block{bloco}.attn.qkv", width, 3 * width, qkv[0], qkv[1]))
        adapters.append(AdapterSpec(f"block{bloco}.attn.proj", width, width, proj[0], proj[1]))
    return ModelDescription(
        adapters=tuple(adapters),
        frozen_params=frozen_other,
        head_params=head_params,
        name=name or f"transformer_d{depth}_w{width}",
    )
