"""
Configuração
DESCRIÇÃO: Leitura do config.ini em um objeto Settings imutável
REGRAS DE NEGÓCIO:
    - Caminho: --config > variável GEOLANDMARK_CONFIG > config.ini na raiz
    - Arquivo .env é carregado antes (python-dotenv)
    - Valores ausentes caem nos padrões citados (T=0.1, λ=1e-5, ...)
    - O dicionário de seções é ecoado no manifest de cada artefato
"""

import configparser
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv

from .exceptions import DatasetIOError, ParameterError
from .paths import get_base_path

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "GEOLANDMARK_CONFIG"


def _parse_floats(texto: str, nome: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in texto.split(',') if item.strip())
    except ValueError:
        raise ParameterError(nome, texto, "lista de números separados por vírgula")


def _parse_ints(texto: str, nome: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in texto.split(',') if item.strip())
    except ValueError:
        raise ParameterError(nome, texto, "lista de inteiros separados por vírgula")


@dataclass(frozen=True)
class Settings:
    """Configuração efetiva do toolkit"""

    heatmap_width: int = 64
    heatmap_height: int = 64
    sigma: float = 2.0
    temperature: float = 0.1
    loss_mode: str = "paper_literal"
    eps_iso: float = 1e-9
    eps_abs: float = 1e-12
    lam: float = 1e-5
    thresholds: Tuple[float, ...] = (0.5, 1.0, 2.0)
    lr: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01
    warmup_steps: int = 500
    warmup_start_factor: float = 0.001
    milestones: Tuple[int, ...] = (170, 200)
    gamma: float = 0.1
    lora_rank: int = 4
    lora_alpha: float = 4.0
    feature_dim: int = 32
    base_scale: float = 0.01
    train_mode: str = "free_logits"
    epochs: int = 300
    batch: int = 0
    seed: int = 0
    synth_n_images: int = 347
    synth_split: Tuple[int, ...] = (36, 149, 162)
    synth_width: int = 957
    synth_height: int = 555
    spacing_mm_per_px: float = 0.1
    noise_sigma: float = 0.0
    gradcheck_instances: int = 100
    gradcheck_step: float = 1e-5
    gradcheck_tolerance: float = 1e-4
    gradcheck_probe_pixels: int = 0
    nivel_console: str = "WARNING"
    nivel_arquivo: str = "DEBUG"
    arquivo_log: str = ""
    source: Optional[str] = field(default=None, compare=False)

    def as_sections(self) -> Dict[str, Dict[str, str]]:
        """Seções no formato do config.ini, para eco no manifest"""
        def lista(valores) -> str:
            return ",".join(repr(v) if isinstance(v, float) else str(v) for v in valores)

        return {
            'HEATMAP': {
                'width': str(self.heatmap_width),
                'height': str(self.heatmap_height),
                'sigma': repr(self.sigma),
                'temperature': repr(self.temperature),
            },
            'GEOMETRY': {
                'loss_mode': self.loss_mode,
                'eps_iso': repr(self.eps_iso),
                'eps_abs': repr(self.eps_abs),
            },
            'LOSS': {'lambda': repr(self.lam)},
            'METRICS': {'thresholds': lista(self.thresholds)},
            'OPTIMIZER': {
                'lr': repr(self.lr),
                'beta1': repr(self.beta1),
                'beta2': repr(self.beta2),
                'eps': repr(self.eps),
                'weight_decay': repr(self.weight_decay),
            },
            'SCHEDULE': {
                'warmup_steps': str(self.warmup_steps),
                'warmup_start_factor': repr(self.warmup_start_factor),
                'milestones': lista(self.milestones),
                'gamma': repr(self.gamma),
            },
            'LORA': {
                'rank': str(self.lora_rank),
                'alpha': repr(self.lora_alpha),
                'feature_dim': str(self.feature_dim),
                'base_scale': repr(self.base_scale),
            },
            'TRAIN': {
                'mode': self.train_mode,
                'epochs': str(self.epochs),
                'batch': str(self.batch),
                'seed': str(self.seed),
            },
            'SYNTH': {
                'n_images': str(self.synth_n_images),
                'split': lista(self.synth_split),
                'width': str(self.synth_width),
                'height': str(self.synth_height),
                'spacing_mm_per_px': repr(self.spacing_mm_per_px),
                'noise_sigma': repr(self.noise_sigma),
            },
            'GRADCHECK': {
                'instances': str(self.gradcheck_instances),
                'step': repr(self.gradcheck_step),
                'tolerance': repr(self.gradcheck_tolerance),
                'probe_pixels': str(self.gradcheck_probe_pixels),
            },
        }


def resolve_config_path(config_path: Optional[str] = None) -> Path:
    """Resolve o caminho do config.ini seguindo a precedência documentada"""
    load_dotenv()
    if config_path:
        return Path(config_path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        return Path(env_path)
    return get_base_path() / "config.ini"


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Carrega Settings a partir do config.ini.

    Args:
        config_path: Caminho explícito (opcional)

    Returns:
        Settings com padrões para chaves ausentes

    Raises:
        DatasetIOError: Se um caminho explícito não existir
        ParameterError: Se algum valor não puder ser convertido
    """
    path = resolve_config_path(config_path)
    explicito = bool(config_path) or bool(os.environ.get(CONFIG_ENV_VAR))

    config = configparser.ConfigParser()
    if path.exists():
        config.read(path, encoding='utf-8')
        logger.debug(f"Configuração carregada de {path}")
    elif explicito:
        raise DatasetIOError(str(path), "arquivo de configuração não encontrado")
    else:
        logger.debug(f"{path} ausente, usando padrões")

    padrao = Settings()
    try:
        return Settings(
            heatmap_width=config.getint("HEATMAP", "width", fallback=padrao.heatmap_width),
            heatmap_height=config.getint("HEATMAP", "height", fallback=padrao.heatmap_height),
            sigma=config.getfloat("HEATMAP", "sigma", fallback=padrao.sigma),
            temperature=config.getfloat("HEATMAP", "temperature", fallback=padrao.temperature),
            loss_mode=config.get("GEOMETRY", "loss_mode", fallback=padrao.loss_mode),
            eps_iso=config.getfloat("GEOMETRY", "eps_iso", fallback=padrao.eps_iso),
            eps_abs=config.getfloat("GEOMETRY", "eps_abs", fallback=padrao.eps_abs),
            lam=config.getfloat("LOSS", "lambda", fallback=padrao.lam),
            thresholds=_parse_floats(
                config.get("METRICS", "thresholds", fallback="0.5,1.0,2.0"), "thresholds"),
            lr=config.getfloat("OPTIMIZER", "lr", fallback=padrao.lr),
            beta1=config.getfloat("OPTIMIZER", "beta1", fallback=padrao.beta1),
            beta2=config.getfloat("OPTIMIZER", "beta2", fallback=padrao.beta2),
            eps=config.getfloat("OPTIMIZER", "eps", fallback=padrao.eps),
            weight_decay=config.getfloat("OPTIMIZER", "weight_decay", fallback=padrao.weight_decay),
            warmup_steps=config.getint("SCHEDULE", "warmup_steps", fallback=padrao.warmup_steps),
            warmup_start_factor=config.getfloat(
                "SCHEDULE", "warmup_start_factor", fallback=padrao.warmup_start_factor),
            milestones=_parse_ints(config.get("SCHEDULE", "milestones", fallback="170,200"), "milestones"),
            gamma=config.getfloat("SCHEDULE", "gamma", fallback=padrao.gamma),
            lora_rank=config.getint("LORA", "rank", fallback=padrao.lora_rank),
            lora_alpha=config.getfloat("LORA", "alpha", fallback=padrao.lora_alpha),
            feature_dim=config.getint("LORA", "feature_dim", fallback=padrao.feature_dim),
            base_scale=config.getfloat("LORA", "base_scale", fallback=padrao.base_scale),
            train_mode=config.get("TRAIN", "mode", fallback=padrao.train_mode),
            epochs=config.getint("TRAIN", "epochs", fallback=padrao.epochs),
            batch=config.getint("TRAIN", "batch", fallback=padrao.batch),
            seed=config.getint("TRAIN", "seed", fallback=padrao.seed),
            synth_n_images=config.getint("SYNTH", "n_images", fallback=padrao.synth_n_images),
            synth_split=_parse_ints(config.get("SYNTH", "split", fallback="36,149,162"), "split"),
            synth_width=config.getint("SYNTH", "width", fallback=padrao.synth_width),
            synth_height=config.getint("SYNTH", "height", fallback=padrao.synth_height),
            spacing_mm_per_px=config.getfloat(
                "SYNTH", "spacing_mm_per_px", fallback=padrao.spacing_mm_per_px),
            noise_sigma=config.getfloat("SYNTH", "noise_sigma", fallback=padrao.noise_sigma),
            gradcheck_instances=config.getint(
                "GRADCHECK", "instances", fallback=padrao.gradcheck_instances),
            gradcheck_step=config.getfloat("GRADCHECK", "step", fallback=padrao.gradcheck_step),
            gradcheck_tolerance=config.getfloat(
                "GRADCHECK", "tolerance", fallback=padrao.gradcheck_tolerance),
            gradcheck_probe_pixels=config.getint(
                "GRADCHECK", "probe_pixels", fallback=padrao.gradcheck_probe_pixels),
            nivel_console=config.get("LOGGING", "nivel_console", fallback=padrao.nivel_console),
            nivel_arquivo=config.get("LOGGING", "nivel_arquivo", fallback=padrao.nivel_arquivo),
            arquivo_log=config.get("LOGGING", "arquivo_log", fallback=padrao.arquivo_log).strip(),
            source=str(path) if path.exists() else None,
        )
    except ValueError as e:
        raise ParameterError(str(path), "config.ini", str(e))
