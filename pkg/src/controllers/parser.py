"""
Parser da linha de comando
DESCRIÇÃO: Subcomandos e flags da CLI, com padrões vindos do config.ini
REGRAS DE NEGÓCIO:
    - Flags globais em todos os subcomandos: --config, --threads, --log-level
    - Padrões exibidos no --help são os valores efetivos de Settings
    - Flags desconhecidas são rejeitadas; modos exclusivos são impostos pelo argparse
"""

import argparse
from typing import List, Optional, Sequence

from src.domain.value_objects import LossMode
from src.services.models import MODOS
from src.utils.config import Settings
from src.version import __version__

DECODE_MODES = ("argmax", "softargmax")


def _float_list(texto: str) -> List[float]:
    try:
        return [float(v) for v in texto.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de números inválida: '{texto}'")


def _int_list(texto: str) -> List[int]:
    try:
        return [int(v) for v in texto.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de inteiros inválida: '{texto}'")


def _common_parser(settings: Settings) -> argparse.ArgumentParser:
    comum = argparse.ArgumentParser(add_help=False)
    comum.add_argument("--config", default=None, help="Caminho do config.ini")
    comum.add_argument("--threads", type=int, default=1,
                       help="Trabalhadores para o trabalho por imagem (1 = determinístico)")
    comum.add_argument("--log-level", default=settings.nivel_console,
                       help="Nível de log do console (DEBUG, INFO, WARNING, ...)")
    return comum


def _add_training_flags(sub: argparse.ArgumentParser, settings: Settings):
    sub.add_argument("--train", required=True, help="Arquivo de anotações de treino")
    sub.add_argument("--val", required=True, help="Arquivo de anotações de validação")
    sub.add_argument("--mode", choices=MODOS, default=settings.train_mode, help="Modelo de heatmap")
    sub.add_argument("--temperature", type=float, default=settings.temperature, help="Temperatura T")
    sub.add_argument("--loss-mode", choices=[m.value for m in LossMode], default=settings.loss_mode,
                     help="Forma do termo de perpendicularidade")
    sub.add_argument("--epochs", type=int, default=settings.epochs, help="Épocas")
    sub.add_argument("--batch", type=int, default=settings.batch, help="Tamanho do lote (0 = conjunto inteiro)")
    sub.add_argument("--seed", type=int, default=settings.seed, help="Semente")
    sub.add_argument("--lr", type=float, default=settings.lr, help="Taxa de aprendizado base")
    sub.add_argument("--warmup-steps", type=int, default=settings.warmup_steps, help="Passos de aquecimento")
    sub.add_argument("--milestones", type=_int_list, default=list(settings.milestones),
                     help="Épocas de decaimento (a,b)")
    sub.add_argument("--width", type=int, default=settings.heatmap_width, help="Largura da grade do heatmap")
    sub.add_argument("--height", type=int, default=settings.heatmap_height, help="Altura da grade do heatmap")
    sub.add_argument("--sigma", type=float, default=settings.sigma, help="Desvio do alvo gaussiano (grade)")


def build_parser(settings: Optional[Settings] = None) -> argparse.ArgumentParser:
    """
    Monta o parser completo.

    Args:
        settings: Configuração efetiva (fornece os padrões)

    Returns:
        ArgumentParser com um subparser por comando
    """
    settings = settings or Settings()
    comum = _common_parser(settings)
    formatter = argparse.ArgumentDefaultsHelpFormatter

    parser = argparse.ArgumentParser(
        prog="geolandmark",
        description="Detecção de landmarks com restrição geométrica: dados, heatmaps, treino e avaliação",
        formatter_class=formatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMANDO")

    # synth
    sub = subparsers.add_parser("synth", parents=[comum], formatter_class=formatter,
                                help="Gera o conjunto sintético dividido em train/val/test")
    sub.add_argument("--n", type=int, default=settings.synth_n_images, help="Total de imagens")
    sub.add_argument("--split", type=_int_list, default=list(settings.synth_split), help="Contagens a,b,c")
    sub.add_argument("--noise-sigma", type=float, default=settings.noise_sigma, help="Ruído em pixels")
    sub.add_argument("--seed", type=int, default=settings.seed, help="Semente")
    sub.add_argument("--width", type=int, default=settings.synth_width, help="Largura das imagens")
    sub.add_argument("--height", type=int, default=settings.synth_height, help="Altura das imagens")
    sub.add_argument("--spacing", type=float, default=settings.spacing_mm_per_px, help="mm por pixel")
    sub.add_argument("--out", required=True, help="Diretório de saída")

    # encode
    sub = subparsers.add_parser("encode", parents=[comum], formatter_class=formatter,
                                help="Codifica anotações como heatmaps gaussianos (GHMP)")
    sub.add_argument("--annotations", required=True, help="Arquivo de anotações")
    sub.add_argument("--width", type=int, default=settings.heatmap_width, help="Largura da grade")
    sub.add_argument("--height", type=int, default=settings.heatmap_height, help="Altura da grade")
    sub.add_argument("--sigma", type=float, default=settings.sigma, help="Desvio padrão (grade)")
    sub.add_argument("--image-id", default=None, help="Codifica só este registro")
    sub.add_argument("--out", required=True, help="Arquivo .ghmp ou diretório")

    # decode
    sub = subparsers.add_parser("decode", parents=[comum], formatter_class=formatter,
                                help="Decodifica heatmaps GHMP em coordenadas")
    sub.add_argument("--heatmaps", required=True, help="Arquivo .ghmp ou diretório de .ghmp")
    sub.add_argument("--mode", choices=DECODE_MODES, default="softargmax", help="Decodificador")
    sub.add_argument("--temperature", type=float, default=settings.temperature, help="Temperatura T")
    sub.add_argument("--reference", default=None,
                     help="Anotações de referência: volta para pixels da imagem e copia width/height/spacing")
    sub.add_argument("--out", required=True, help="Arquivo JSON de predições")

    # eval
    sub = subparsers.add_parser("eval", parents=[comum], formatter_class=formatter,
                                help="MRE, SDR e resíduo geométrico das predições")
    sub.add_argument("--pred", required=True, help="Arquivo de predições")
    sub.add_argument("--gt", required=True, help="Arquivo de anotações")
    sub.add_argument("--thresholds", type=_float_list, default=list(settings.thresholds),
                     help="Limiares do SDR em mm")
    espacamento = sub.add_mutually_exclusive_group()
    espacamento.add_argument("--spacing", type=float, default=None, help="Espaçamento fixo em mm/pixel")
    espacamento.add_argument("--spacing-from-gt", action="store_true",
                             help="Usa o spacing de cada anotação (padrão)")
    sub.add_argument("--out", required=True, help="CSV de métricas")

    # train
    sub = subparsers.add_parser("train", parents=[comum], formatter_class=formatter,
                                help="Treina um modelo de heatmap com L_MSE + λ·L_geo")
    _add_training_flags(sub, settings)
    sub.add_argument("--lambda", dest="lam", type=float, default=settings.lam, help="Peso λ da perda geométrica")
    sub.add_argument("--out", required=True, help="Diretório de saída")

    # gradcheck
    sub = subparsers.add_parser("gradcheck", parents=[comum], formatter_class=formatter,
                                help="Confere gradientes analíticos com diferenças centrais")
    sub.add_argument("--seed", type=int, default=settings.seed, help="Semente das instâncias")
    sub.add_argument("--instances", type=int, default=settings.gradcheck_instances, help="Instâncias")
    sub.add_argument("--lambda", dest="lam", type=float, default=settings.lam, help="Peso λ")
    sub.add_argument("--loss-mode", choices=[m.value for m in LossMode], default=settings.loss_mode,
                     help="Forma do termo de perpendicularidade")
    sub.add_argument("--inject-degenerate", action="store_true",
                     help="Confere o caminho de fallback com entradas degeneradas")
    sub.add_argument("--out", default=None, help="CSV do relatório (padrão: stdout)")

    # report
    sub = subparsers.add_parser("report", parents=[comum], formatter_class=formatter,
                                help="Consolida diretórios de execuções num CSV")
    sub.add_argument("--runs", nargs="+", required=True, help="Diretórios gerados por train")
    sub.add_argument("--out", required=True, help="CSV consolidado")

    # sweep
    sub = subparsers.add_parser("sweep", parents=[comum], formatter_class=formatter,
                                help="Varredura de λ com execuções gêmeas")
    _add_training_flags(sub, settings)
    sub.add_argument("--lambdas", type=_float_list, default=[0.0, 1e-5, 1e-3, 1e-2, 1e-1],
                     help="Valores de λ (precisa incluir 0)")
    sub.add_argument("--out", required=True, help="Diretório de saída")

    # ablate
    sub = subparsers.add_parser("ablate", parents=[comum], formatter_class=formatter,
                                help="Ablação {full, LoRA} x {sem, com L_geo}")
    _add_training_flags(sub, settings)
    sub.add_argument("--lambda", dest="lam", type=float, default=settings.lam, help="λ das variantes com L_geo")
    sub.add_argument("--out", required=True, help="Diretório de saída")

    return parser


def pre_parse_config(argv: Sequence[str]) -> Optional[str]:
    """Primeira passada: só --config, para carregar Settings antes dos padrões"""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    conhecidos, _ = pre.parse_known_args(list(argv))
    return conhecidos.config

