"""
Modelo linear com LoRA
DESCRIÇÃO: Mapa linear congelado de um vetor de features por imagem para os logits,
           com adaptador de baixo posto e bias de cabeça treináveis
REGRAS DE NEGÓCIO:
    - Features: vetor gaussiano semeado pelo sha256 do image_id (determinístico)
    - Mapa base W (d_out x d_in) sorteado pela semente do treino e multiplicado por base_scale
    - logits = W·f + (alpha/r)·B·(A·f) + bias
    - Treina só nas amostras de treino; validação fica de fora
"""

import hashlib
from typing import Dict, List, Sequence

import numpy as np

from src.services.training.lora import AdapterSpec, LoraLinear, ModelDescription, lora_backward, lora_forward
from .base_model import BaseHeatmapModel


def image_features(image_id: str, feature_dim: int) -> np.ndarray:
    """Vetor de features determinístico a partir do image_id"""
    digest = hashlib.sha256(image_id.encode('utf-8')).digest()
    semente = int.from_bytes(digest[:8], 'little')
    rng = np.random.Generator(np.random.Philox(semente))
    return rng.standard_normal(feature_dim)


class LoraLinearModel(BaseHeatmapModel):
    """Cabeça linear congelada adaptada por LoRA"""

    def __init__(self, image_ids: Sequence[str], channels: int, height: int, width: int,
                 rank: int, alpha: float, feature_dim: int, base_scale: float, seed: int):
        super().__init__(image_ids, channels, height, width)
        self.feature_dim = feature_dim
        self._features = np.stack([image_features(i, feature_dim) for i in self.image_ids]) \
            if self.image_ids else np.zeros((0, feature_dim))

        base_seed, adapter_seed = np.random.SeedSequence([seed, 1]).spawn(2)
        base_rng = np.random.Generator(np.random.Philox(base_seed))
        weight = base_scale * base_rng.standard_normal((self.d_out, feature_dim))
        weight.setflags(write=False)
        self.layer = LoraLinear.initialize(
            weight, rank, alpha, np.random.Generator(np.random.Philox(adapter_seed))
        )
        self._bias = np.zeros(self.d_out, dtype=np.float64)

    @property
    def nome_modelo(self) -> str:
        return "lora_linear"

    def parameters(self) -> Dict[str, np.ndarray]:
        return {'lora_a': self.layer.a, 'lora_b': self.layer.b, 'head_bias': self._bias}

    def features(self, indices: Sequence[int]) -> np.ndarray:
        return self._features[list(indices)]

    def forward(self, indices: Sequence[int]) -> np.ndarray:
        y = lora_forward(self.layer, self.features(indices)) + self._bias
        return y.reshape((len(indices),) + self.output_shape)

    def frozen_forward(self, indices: Sequence[int]) -> np.ndarray:
        """Saída só do mapa base (sem adaptador)"""
        y = self.features(indices) @ self.layer.weight.T + self._bias
        return y.reshape((len(indices),) + self.output_shape)

    def backward(self, indices: Sequence[int], grad_logits: np.ndarray) -> Dict[str, np.ndarray]:
        gy = grad_logits.reshape(len(indices), self.d_out)
        grad_a, grad_b = lora_backward(self.layer, self.features(indices), gy)
        return {'lora_a': grad_a, 'lora_b': grad_b, 'head_bias': gy.sum(axis=0)}

    def describe(self) -> ModelDescription:
        adaptador = AdapterSpec("heatmap_head", self.feature_dim, self.d_out,
                                self.layer.rank, self.layer.alpha)
        return ModelDescription(adapters=(adaptador,), head_params=self.d_out, name=self.nome_modelo)

    def fit_indices(self, n_train: int) -> List[int]:
        return list(range(n_train))
