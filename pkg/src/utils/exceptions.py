"""
Toolkit de Landmarks Geométricos
Módulo: Exceptions

DESCRIÇÃO:
    Exceções customizadas para tratamento de erros padronizado.
    Toda exceção carrega uma mensagem curta (uma linha, usada no diagnóstico
    da CLI) e um dicionário de detalhes para debugging.

HIERARQUIA:
    BaseLandmarkException
    ├── ValidationError      (parâmetros, esquema, parse, dimensões, pareamento)
    ├── GeometryError        (aridade, direção degenerada)
    ├── TrainingError        (divergência)
    └── FileError            (leitura/escrita de artefatos)
"""

from typing import Optional, Dict, Any, List


class BaseLandmarkException(Exception):
    """Classe base para todas as exceções do toolkit"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        Args:
            message: Mensagem de erro para o usuário
            details: Detalhes adicionais para debugging
        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Converte exceção para dicionário"""
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'details': self.details
        }


# ============================================
# EXCEÇÕES DE VALIDAÇÃO
# ============================================

class ValidationError(BaseLandmarkException):
    """Erro de validação de dados"""
    pass


class ParameterError(ValidationError):
    """Parâmetro numérico fora do domínio permitido"""

    def __init__(self, nome: str, valor: Any, regra: str):
        super().__init__(
            f"Parâmetro inválido: {nome}={valor!r} ({regra})",
            details={'parametro': nome, 'valor': valor, 'regra': regra}
        )


class NonFiniteInputError(ValidationError):
    """Entrada contém NaN ou infinito"""

    def __init__(self, origem: str):
        super().__init__(
            f"Entrada não finita em {origem}",
            details={'origem': origem}
        )


class SchemaError(ValidationError):
    """Registro não segue o esquema de 16 landmarks"""

    def __init__(self, message: str, landmark: Optional[str] = None, registro: Optional[int] = None):
        super().__init__(
            message,
            details={'landmark': landmark, 'registro': registro}
        )
        self.landmark = landmark


class ParseError(ValidationError):
    """Erro de sintaxe no arquivo de anotações"""

    def __init__(self, motivo: str, linha: Optional[int] = None, registro: Optional[int] = None):
        locus = []
        if linha is not None:
            locus.append(f"linha {linha}")
        if registro is not None:
            locus.append(f"registro {registro}")
        sufixo = f" ({', '.join(locus)})" if locus else ""
        super().__init__(
            f"Arquivo malformado: {motivo}{sufixo}",
            details={'motivo': motivo, 'linha': linha, 'registro': registro}
        )
        self.linha = linha
        self.registro = registro


class DimensionError(ValidationError):
    """Formas ou comprimentos incompatíveis"""

    def __init__(self, contexto: str, esperado: Any, encontrado: Any):
        super().__init__(
            f"Dimensões incompatíveis em {contexto}: esperado {esperado}, encontrado {encontrado}",
            details={'contexto': contexto, 'esperado': str(esperado), 'encontrado': str(encontrado)}
        )


class PairingError(ValidationError):
    """Predições e anotações não se correspondem por image_id"""

    def __init__(self, sem_anotacao: List[str], sem_predicao: List[str]):
        partes = []
        if sem_anotacao:
            partes.append(f"sem anotação: {', '.join(sem_anotacao)}")
        if sem_predicao:
            partes.append(f"sem predição: {', '.join(sem_predicao)}")
        super().__init__(
            f"image_id sem par ({'; '.join(partes)})",
            details={'sem_anotacao': sem_anotacao, 'sem_predicao': sem_predicao}
        )
        self.sem_anotacao = sem_anotacao
        self.sem_predicao = sem_predicao


# ============================================
# EXCEÇÕES DE GEOMETRIA
# ============================================

class GeometryError(BaseLandmarkException):
    """Erro no ajuste de retas ou na perda geométrica"""
    pass


class ArityError(GeometryError):
    """Pontos insuficientes para ajustar uma reta"""

    def __init__(self, total: int, minimo: int = 2):
        super().__init__(
            f"Ajuste de reta exige ao menos {minimo} pontos (recebidos: {total})",
            details={'total': total, 'minimo': minimo}
        )


class DegenerateDirectionError(GeometryError):
    """Conjunto de pontos isotrópico: direção principal indefinida"""

    def __init__(self, anisotropia: float, traco: float, grupo: Optional[str] = None):
        alvo = f" no grupo {grupo}" if grupo else ""
        super().__init__(
            f"Direção degenerada{alvo} (anisotropia={anisotropia:.3e}, traço={traco:.3e})",
            details={'anisotropia': anisotropia, 'traco': traco, 'grupo': grupo}
        )
        self.grupo = grupo


# ============================================
# EXCEÇÕES DE TREINAMENTO
# ============================================

class TrainingError(BaseLandmarkException):
    """Erro durante a otimização"""
    pass


class DivergenceError(TrainingError):
    """Perda deixou de ser finita"""

    def __init__(self, epoca: int, ultima_epoca_finita: Optional[int]):
        super().__init__(
            f"Treinamento divergiu na época {epoca} (última época finita: {ultima_epoca_finita})",
            details={'epoca': epoca, 'ultima_epoca_finita': ultima_epoca_finita}
        )
        self.ultima_epoca_finita = ultima_epoca_finita


# ============================================
# EXCEÇÕES DE ARQUIVO
# ============================================

class FileError(BaseLandmarkException):
    """Erro relacionado a arquivos"""
    pass


class DatasetIOError(FileError):
    """Falha ao ler arquivo de entrada"""

    def __init__(self, caminho: str, motivo: str):
        super().__init__(
            f"Não foi possível ler {caminho}: {motivo}",
            details={'caminho': caminho, 'motivo': motivo}
        )


class ArtifactWriteError(FileError):
    """Falha ao gravar artefato de saída"""

    def __init__(self, caminho: str, motivo: str):
        super().__init__(
            f"Não foi possível gravar {caminho}: {motivo}",
            details={'caminho': caminho, 'motivo': motivo}
        )


# ============================================
# HELPER FUNCTIONS
# ============================================

def handle_exception(exception: Exception, logger=None) -> Dict[str, Any]:
    """
    Trata uma exceção e retorna resposta padronizada.

    Args:
        exception: Exceção capturada
        logger: Logger para registrar erro (opcional)

    Returns:
        Dict com informações do erro
    """
    if isinstance(exception, BaseLandmarkException):
        error_dict = exception.to_dict()
    else:
        error_dict = {
            'error': 'UnexpectedError',
            'message': str(exception),
            'details': {}
        }

    if logger:
        logger.error(f"Erro capturado: {error_dict['error']} - {error_dict['message']}")
        if error_dict['details']:
            logger.debug(f"Detalhes: {error_dict['details']}")

    return error_dict


def require_positive(nome: str, valor: float) -> float:
    """
    Valida parâmetro estritamente positivo e finito.

    Raises:
        ParameterError: Se valor <= 0, NaN ou infinito
    """
    try:
        numero = float(valor)
    except (TypeError, ValueError):
        raise ParameterError(nome, valor, "deve ser numérico")
    if not (numero > 0) or numero == float('inf'):
        raise ParameterError(nome, valor, "deve ser > 0 e finito")
    return numero
