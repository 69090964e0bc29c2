"""
Error Handler
DESCRIÇÃO: Tratamento centralizado de erros dos comandos da CLI
BENEFÍCIOS:
    - Mensagens consistentes em todo o sistema
    - Logging automático de erros
    - Código de saída único por família de exceção
    - Decorador para simplificar tratamento nos comandos
"""

import logging
import sys
import traceback
from functools import wraps
from typing import Callable, Optional, TextIO

from src.utils.exceptions import BaseLandmarkException, FileError, handle_exception

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class ErrorHandler:
    """Handler centralizado: código de saída e diagnóstico de uma linha"""

    @staticmethod
    def exit_code_for(exception: BaseException) -> int:
        """Mapeia a exceção para o código de saída

        Args:
            exception: Exceção capturada

        Returns:
            2 para erros de arquivo/SO, 1 para os demais
        """
        if isinstance(exception, (FileError, OSError)):
            return EXIT_IO
        return EXIT_VALIDATION

    @staticmethod
    def diagnostic(exception: BaseException) -> str:
        """Diagnóstico de uma linha: 'erro: <Tipo>: <mensagem>'"""
        if isinstance(exception, BaseLandmarkException):
            nome, mensagem = type(exception).__name__, exception.message
        else:
            nome, mensagem = type(exception).__name__, str(exception)
        return f"erro: {nome}: {' '.join(mensagem.split())}"

    @staticmethod
    def handle_exception(exception: BaseException, stream: Optional[TextIO] = None) -> int:
        """Trata exceção escrevendo o diagnóstico no stream de erro

        Args:
            exception: Exceção capturada
            stream: Destino do diagnóstico (padrão: sys.stderr)

        Returns:
            Código de saída
        """
        stream = stream or sys.stderr
        handle_exception(exception, logger)
        logger.debug("Traceback:\n" + "".join(
            traceback.format_exception(type(exception), exception, exception.__traceback__)
        ))
        print(ErrorHandler.diagnostic(exception), file=stream)
        return ErrorHandler.exit_code_for(exception)


def handle_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Decorador para tratamento automático de erros nos comandos

    O comando devolve o código de saída; exceções do domínio e de E/S
    viram diagnóstico em stderr e código 1 ou 2.

    Uso:
        @handle_errors
        def cmd_eval(args, settings):
            ...
            return EXIT_OK
    """
    @wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except (BaseLandmarkException, OSError, ValueError) as e:
            return ErrorHandler.handle_exception(e)

    return wrapper
