"""
Verificação de gradientes
DESCRIÇÃO: Compara cada gradiente analítico com diferenças centrais em instâncias semeadas
COMPONENTES:
    - mse_heatmap_grad: MSE sobre heatmaps aleatórios
    - soft_argmax_jacobian: ∂(x̂, ŷ)/∂H com logits N(0, 0.1)
    - geometric_loss_grad: ∂L_geo/∂coordenadas em configurações inclinadas perturbadas
    - geo_chain: L_geo ∘ soft-argmax em relação aos logits
    - total_loss: MSE + λ·L_geo em relação aos logits
REGRAS DE NEGÓCIO:
    - Erro relativo = max|analítico − numérico| / max(max|analítico|, max|numérico|)
    - lambda = 0: componentes geométricos marcados "not exercised"
    - Injeção degenerada: verifica que o caminho de fallback devolve exatamente o gradiente do MSE
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.application.dtos import GradcheckEntry, GradcheckReport
from src.application.dtos.report_dtos import STATUS_FAIL, STATUS_FALLBACK, STATUS_NOT_EXERCISED, STATUS_OK
from src.domain.entities import LineGroupSchema
from src.domain.value_objects import LossMode, N_LANDMARKS
from src.services.annotation_service import line_groups_default
from src.services.geometry_service import geometric_loss, geometric_loss_grad
from src.services.heatmap_service import gaussian_heatmaps, soft_argmax, soft_argmax_jacobian, soft_argmax_stack
from src.services.loss_service import compute_total_loss, geo_loss_on_logits, mse_heatmap, mse_heatmap_grad
from src.services.synth_service import ToothConfigParams, default_half_widths, generate_tooth_config
from src.utils.exceptions import ParameterError, require_positive

logger = logging.getLogger(__name__)

COMPONENTS = ("mse_heatmap_grad", "soft_argmax_jacobian", "geometric_loss_grad", "geo_chain", "total_loss")
GEOMETRIC_COMPONENTS = ("geometric_loss_grad", "geo_chain")

# Instância: índice da sonda -> (analítico, numérico)
Pairs = Tuple[List[float], List[float]]


@dataclass(frozen=True)
class GradcheckConfig:
    """Configuração do gradcheck"""
    instances: int = 100
    channels: int = N_LANDMARKS
    height: int = 32
    width: int = 32
    step: float = 1e-5
    tolerance: float = 1e-4
    temperature: float = 0.1
    sigma: float = 2.0
    lam: float = 1e-5
    loss_mode: LossMode = LossMode.PAPER_LITERAL
    probe_channels: int = 3
    probe_pixels: int = 0
    inject_degenerate: bool = False

    def __post_init__(self):
        require_positive("step", self.step)
        require_positive("tolerance", self.tolerance)
        require_positive("temperature", self.temperature)
        require_positive("sigma", self.sigma)
        if self.lam < 0:
            raise ParameterError("lambda", self.lam, "deve ser >= 0")
        if self.channels != N_LANDMARKS:
            raise ParameterError("channels", self.channels, f"o esquema exige {N_LANDMARKS} canais")
        for nome, valor in (("instances", self.instances), ("height", self.height), ("width", self.width),
                            ("probe_channels", self.probe_channels)):
            if valor <= 0:
                raise ParameterError(nome, valor, "deve ser > 0")
        if self.probe_pixels < 0:
            raise ParameterError("probe_pixels", self.probe_pixels, "deve ser >= 0 (0 = todos)")
        object.__setattr__(self, 'loss_mode', LossMode(self.loss_mode))

    def echo(self) -> Dict[str, str]:
        return {
            'instances': str(self.instances),
            'shape': f"{self.channels}x{self.height}x{self.width}",
            'step': repr(self.step),
            'tolerance': repr(self.tolerance),
            'temperature': repr(self.temperature),
            'sigma': repr(self.sigma),
            'lambda': repr(self.lam),
            'loss_mode': self.loss_mode.value,
            'probe_pixels': str(self.probe_pixels),
            'inject_degenerate': str(self.inject_degenerate),
        }


# ============================================
# FERRAMENTAS
# ============================================

def central_difference(f: Callable[[np.ndarray], float], x: np.ndarray, index: Tuple[int, ...],
                       step: float) -> float:
    """(f(x + h·e_i) − f(x − h·e_i)) / 2h, restaurando x no fim"""
    original = x[index]
    x[index] = original + step
    mais = f(x)
    x[index] = original - step
    menos = f(x)
    x[index] = original
    return (mais - menos) / (2.0 * step)


def relative_error(analytic: List[float], numeric: List[float]) -> float:
    """Erro relativo na norma do máximo"""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    escala = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(n), initial=0.0)),
                 np.finfo(np.float64).tiny)
    return float(np.max(np.abs(a - n), initial=0.0)) / escala


def _rng(seed: int, instancia: int, componente: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, instancia, componente])))


def _probe_pixels(rng: np.random.Generator, height: int, width: int, quantidade: int,
                  prioridade: Optional[np.ndarray] = None) -> List[Tuple[int, int]]:
    """Pixels sondados: metade com maior prioridade (se dada), metade sorteada"""
    total = height * width
    if quantidade == 0 or quantidade >= total:
        return [(i // width, i % width) for i in range(total)]
    escolhidos: List[int] = []
    if prioridade is not None:
        ordem = np.argsort(-prioridade.ravel(), kind='stable')
        escolhidos.extend(int(i) for i in ordem[:quantidade // 2])
    restantes = np.setdiff1d(np.arange(total), np.array(escolhidos, dtype=np.int64))
    escolhidos.extend(int(i) for i in rng.choice(restantes, size=quantidade - len(escolhidos), replace=False))
    return [(i // width, i % width) for i in escolhidos]


def tilted_configuration(rng: np.random.Generator, height: int, width: int,
                         noise_sigma: float = 0.3) -> np.ndarray:
    """
    Configuração sintética com eixo perto de 45° dentro da grade, perturbada.

    Nenhuma reta fica perto da vertical, então a orientação canônica não salta
    entre as avaliações das diferenças centrais.
    """
    escala = min(height, width) / 32.0
    params = ToothConfigParams(
        axis_angle=float(rng.uniform(-math.pi / 4 - 0.3, -math.pi / 4 + 0.3)),
        root_length=float(rng.uniform(12.0, 16.0)) * escala,
        crown_offset=float(rng.uniform(4.0, 6.0)) * escala,
        apex=(float(rng.uniform(7.0, 10.0)) * escala, float(rng.uniform(21.0, 24.0)) * escala),
        half_widths=default_half_widths(
            apex_bone=float(rng.uniform(1.5, 3.0)) * escala,
            root_13=float(rng.uniform(1.0, 2.0)) * escala,
            bone_13=float(rng.uniform(1.0, 2.0)) * escala,
            root_12=float(rng.uniform(1.5, 2.5)) * escala,
            bone_12=float(rng.uniform(1.0, 2.0)) * escala,
        ),
        cej_half_width=2.0 * escala,
        crest_half_width=2.5 * escala,
    )
    coords = generate_tooth_config(params).as_array()
    return coords + rng.normal(0.0, noise_sigma * escala, size=coords.shape)


def peaked_logits(rng: np.random.Generator, centers: np.ndarray, height: int, width: int,
                  temperature: float) -> np.ndarray:
    """Logits com pico em cada centro (largura efetiva ~1 px sob a temperatura) mais ruído N(0, 0.1)"""
    ys, xs = np.mgrid[0:height, 0:width]
    d2 = (xs[None] - centers[:, 0, None, None]) ** 2 + (ys[None] - centers[:, 1, None, None]) ** 2
    return -d2 * temperature / 2.0 + rng.normal(0.0, 0.1, size=d2.shape)


# ============================================
# COMPONENTES
# ============================================

def _check_mse(config: GradcheckConfig, seed: int, instancia: int) -> Pairs:
    rng = _rng(seed, instancia, 0)
    forma = (config.channels, config.height, config.width)
    pred = rng.normal(0.0, 1.0, size=forma)
    target = rng.uniform(0.0, 1.0, size=forma)
    analitico = mse_heatmap_grad(pred, target)
    fracao = config.height * config.width / pred.size
    a, n = [], []
    for c in rng.choice(config.channels, size=min(config.probe_channels, config.channels), replace=False):
        canal, alvo = pred[c], target[c]
        for (i, j) in _probe_pixels(rng, config.height, config.width, config.probe_pixels):
            a.append(analitico[c, i, j])
            n.append(central_difference(lambda x: mse_heatmap(x, alvo) * fracao, canal, (i, j), config.step))
    return a, n


def _check_jacobian(config: GradcheckConfig, seed: int, instancia: int) -> Pairs:
    rng = _rng(seed, instancia, 1)
    logits = rng.normal(0.0, 0.1, size=(config.height, config.width))
    jac = soft_argmax_jacobian(logits, config.temperature)
    a, n = [], []
    for (i, j) in _probe_pixels(rng, config.height, config.width, config.probe_pixels):
        for componente in (0, 1):
            a.append(jac[componente, i, j])
            n.append(central_difference(
                lambda x: soft_argmax(x, config.temperature)[componente], logits, (i, j), config.step
            ))
    return a, n


def _check_geometry(config: GradcheckConfig, schema: LineGroupSchema, seed: int, instancia: int) -> Pairs:
    rng = _rng(seed, instancia, 2)
    coords = tilted_configuration(rng, config.height, config.width)
    analitico = geometric_loss_grad(coords, schema)
    a, n = [], []
    for k in range(N_LANDMARKS):
        for eixo in (0, 1):
            a.append(analitico[k, eixo])
            n.append(central_difference(lambda x: geometric_loss(x, schema).total, coords, (k, eixo),
                                        config.step))
    return a, n


def _logits_instance(config: GradcheckConfig, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Logits com pico numa configuração inclinada e as coordenadas alvo perturbadas"""
    centros = tilted_configuration(rng, config.height, config.width)
    logits = peaked_logits(rng, centros, config.height, config.width, config.temperature)
    alvo = centros + rng.normal(0.0, 0.5, size=centros.shape)
    return logits, alvo


class _ChannelObjective:
    """
    Parcela da perda que depende de um único canal de logits.

    O restante da perda é constante quando só o canal varia, então as diferenças
    centrais da parcela coincidem com as da perda inteira. L_geo é memorizado pela
    coordenada decodificada: pixels distantes do pico não mudam o soft-argmax.
    """

    def __init__(self, config: GradcheckConfig, schema: LineGroupSchema, logits: np.ndarray, canal: int,
                 lam: float, target_values: Optional[np.ndarray] = None):
        self.config = config
        self.schema = schema
        self.canal = canal
        self.lam = lam
        self.coords = soft_argmax_stack(logits, config.temperature)
        self.alvo = None if target_values is None else target_values[canal]
        self.fracao = config.height * config.width / logits.size
        self._geo: Dict[Tuple[float, float], float] = {}

    def geo(self, x: np.ndarray) -> float:
        ponto = soft_argmax(x, self.config.temperature)
        if ponto not in self._geo:
            coords = self.coords.copy()
            coords[self.canal] = ponto
            self._geo[ponto] = geometric_loss(coords, self.schema).total
        return self._geo[ponto]

    def __call__(self, x: np.ndarray) -> float:
        valor = self.lam * self.geo(x) if self.lam != 0 else 0.0
        if self.alvo is not None:
            valor += mse_heatmap(x, self.alvo) * self.fracao
        return valor


def _check_geo_chain(config: GradcheckConfig, schema: LineGroupSchema, seed: int, instancia: int) -> Pairs:
    rng = _rng(seed, instancia, 3)
    logits, _ = _logits_instance(config, rng)
    _, analitico, _ = geo_loss_on_logits(logits, schema, config.temperature)
    restritos = sorted(int(l) for l in schema.constrained_ids())
    canais = rng.choice(restritos, size=min(config.probe_channels, len(restritos)), replace=False)

    a, n = [], []
    for c in canais:
        f = _ChannelObjective(config, schema, logits, int(c), lam=1.0)
        for (i, j) in _probe_pixels(rng, config.height, config.width, config.probe_pixels, logits[c]):
            a.append(analitico[c, i, j])
            n.append(central_difference(f, logits[c], (i, j), config.step))
    return a, n


def _check_total(config: GradcheckConfig, schema: LineGroupSchema, seed: int, instancia: int) -> Pairs:
    rng = _rng(seed, instancia, 4)
    logits, alvo = _logits_instance(config, rng)
    target_values = gaussian_heatmaps(alvo, config.width, config.height, config.sigma)
    _, analitico = compute_total_loss(logits, alvo, schema, config.temperature, config.sigma, config.lam,
                                      target_values=target_values)
    canais = rng.choice(config.channels, size=min(config.probe_channels, config.channels), replace=False)

    a, n = [], []
    for c in canais:
        f = _ChannelObjective(config, schema, logits, int(c), config.lam, target_values)
        for (i, j) in _probe_pixels(rng, config.height, config.width, config.probe_pixels, logits[c]):
            a.append(analitico[c, i, j])
            n.append(central_difference(f, logits[c], (i, j), config.step))
    return a, n


def _fallback_verified(config: GradcheckConfig, schema: LineGroupSchema, seed: int, instancia: int) -> bool:
    """Logits uniformes decodificam todos os pontos no mesmo lugar: geo deve cair no fallback"""
    rng = _rng(seed, instancia, 5)
    logits = np.zeros((config.channels, config.height, config.width))
    alvo = tilted_configuration(rng, config.height, config.width)
    target_values = gaussian_heatmaps(alvo, config.width, config.height, config.sigma)
    breakdown, grad = compute_total_loss(logits, alvo, schema, config.temperature, config.sigma,
                                         max(config.lam, 1e-5), target_values=target_values)
    return (breakdown.degenerate and breakdown.geo == 0.0
            and np.array_equal(grad, mse_heatmap_grad(logits, target_values)))


# ============================================
# EXECUÇÃO
# ============================================

def _run_component(nome: str, config: GradcheckConfig, schema: LineGroupSchema, seed: int) -> GradcheckEntry:
    if nome in GEOMETRIC_COMPONENTS and config.lam == 0:
        return GradcheckEntry(nome, math.nan, STATUS_NOT_EXERCISED)
    if nome in GEOMETRIC_COMPONENTS and config.inject_degenerate:
        ok = all(_fallback_verified(config, schema, seed, i) for i in range(config.instances))
        return GradcheckEntry(nome, 0.0 if ok else math.nan, STATUS_FALLBACK if ok else STATUS_FAIL)

    checks = {
        "mse_heatmap_grad": lambda i: _check_mse(config, seed, i),
        "soft_argmax_jacobian": lambda i: _check_jacobian(config, seed, i),
        "geometric_loss_grad": lambda i: _check_geometry(config, schema, seed, i),
        "geo_chain": lambda i: _check_geo_chain(config, schema, seed, i),
        "total_loss": lambda i: _check_total(config, schema, seed, i),
    }
    pior = 0.0
    for instancia in range(config.instances):
        a, n = checks[nome](instancia)
        pior = max(pior, relative_error(a, n))
    status = STATUS_OK if pior <= config.tolerance else STATUS_FAIL
    logger.info(f"gradcheck {nome}: erro relativo máximo {pior:.3e} ({status})")
    return GradcheckEntry(nome, pior, status)


def gradcheck(config: Optional[GradcheckConfig] = None, seed: int = 0, threads: int = 1) -> GradcheckReport:
    """
    Executa todos os componentes do gradcheck.

    Args:
        config: Configuração (padrão: 100 instâncias 16x32x32, passo 1e-5, tolerância 1e-4)
        seed: Semente das instâncias
        threads: Componentes em paralelo (resultado idêntico ao sequencial)

    Returns:
        GradcheckReport; falhas são entradas com status FAIL
    """
    config = config or GradcheckConfig()
    schema = line_groups_default(config.loss_mode)
    logger.info(f"gradcheck: seed={seed}, {config.echo()}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entradas = list(pool.map(lambda nome: _run_component(nome, config, schema, seed), COMPONENTS))
    else:
        entradas = [_run_component(nome, config, schema, seed) for nome in COMPONENTS]
    eco = dict(config.echo())
    eco['seed'] = str(seed)
    return GradcheckReport(entries=entradas, config=eco)
