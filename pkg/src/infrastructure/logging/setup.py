# src/infrastructure/logging/setup.py
"""Configuração do sistema de logging."""

import logging
import os
import sys
from typing import Optional

import colorlog

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
COLOR_FORMAT = '%(log_color)s' + LOG_FORMAT

_NIVEIS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def parse_level(nivel: str, fallback: int = logging.WARNING) -> int:
    """Converte 'INFO', 'debug', ... para o nível numérico."""
    nome = (nivel or '').strip().upper()
    if nome in _NIVEIS:
        return getattr(logging, nome)
    return fallback


def setup_logging(nivel_console: str = "WARNING", nivel_arquivo: str = "DEBUG",
                  arquivo_log: Optional[str] = None) -> logging.Logger:
    """
    Configura o logger raiz: console colorido no stderr e arquivo opcional.

    Args:
        nivel_console: Nível do handler de console
        nivel_arquivo: Nível do handler de arquivo
        arquivo_log: Caminho do arquivo de log (vazio desativa)

    Returns:
        Logger raiz configurado
    """
    root_logger = logging.getLogger()
    # DEBUG no raiz; os handlers filtram o que é emitido
    root_logger.setLevel(logging.DEBUG)

    # Remover handlers existentes para evitar duplicação
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(parse_level(nivel_console))
    console_handler.setFormatter(colorlog.ColoredFormatter(
        COLOR_FORMAT,
        log_colors={
            'DEBUG': 'cyan',
            'INFO': 'green',
            'WARNING': 'yellow',
            'ERROR': 'red',
            'CRITICAL': 'red,bg_white',
        },
    ))
    root_logger.addHandler(console_handler)

    if arquivo_log:
        try:
            diretorio = os.path.dirname(arquivo_log)
            if diretorio:
                os.makedirs(diretorio, exist_ok=True)
            file_handler = logging.FileHandler(arquivo_log, encoding="utf-8")
            file_handler.setLevel(parse_level(nivel_arquivo, logging.DEBUG))
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root_logger.addHandler(file_handler)
        except OSError as e:
            logging.warning(f"Não foi possível criar arquivo de log: {e}")

    logging.getLogger(__name__).debug("Sistema de logging inicializado.")
    return root_logger
