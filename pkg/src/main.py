# src/main.py
"""Ponto de entrada da CLI geolandmark."""

import logging
import sys
from pathlib import Path
from typing import List, Optional

# Resolução de caminhos (execução direta de src/main.py)
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.controllers.commands import COMMANDS  # noqa: E402
from src.controllers.parser import build_parser, pre_parse_config  # noqa: E402
from src.infrastructure.logging import init_metrics_collector, setup_logging  # noqa: E402
from src.utils.config import load_settings  # noqa: E402
from src.utils.error_handler import ErrorHandler  # noqa: E402
from src.version import __version__  # noqa: E402

logger = logging.getLogger(__name__)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Executa um subcomando.

    Args:
        argv: Argumentos sem o nome do programa (padrão: sys.argv[1:])

    Returns:
        0 sucesso, 1 erro de validação/parâmetro, 2 erro de E/S
    """
    argv = list(sys.argv[1:] if argv is None else argv)

    # Configuração primeiro: ela fornece os padrões do parser
    try:
        settings = load_settings(pre_parse_config(argv))
    except Exception as e:
        return ErrorHandler.handle_exception(e)

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse: 0 para --help/--version, 2 para uso inválido
        return 0 if e.code in (0, None) else 1

    setup_logging(args.log_level, settings.nivel_arquivo, settings.arquivo_log or None)
    coletor = init_metrics_collector(enabled=True)
    coletor.start_session()
    logger.info(f"geolandmark {__version__}: {args.command} (config: {settings.source or 'padrões'})")

    codigo = COMMANDS[args.command](args, settings)
    coletor.end_session()
    return codigo


if __name__ == "__main__":
    sys.exit(run())
