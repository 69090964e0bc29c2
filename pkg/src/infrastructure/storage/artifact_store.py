"""
Armazenamento de artefatos
DESCRIÇÃO: Leitura e escrita de arquivos de entrada e saída
REGRAS DE NEGÓCIO:
    - Falha de leitura -> DatasetIOError; falha de escrita -> ArtifactWriteError
    - CSVs via pandas, com linhas de comentário '# ...' opcionais antes do cabeçalho
    - Escrita sempre em bytes com newline '\\n' (saída idêntica entre plataformas)
"""

import io
import logging
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from src.utils.exceptions import ArtifactWriteError, DatasetIOError
from src.utils.paths import ensure_parent

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_bytes(caminho: PathLike) -> bytes:
    """
    Lê um arquivo inteiro.

    Raises:
        DatasetIOError: Se o arquivo não puder ser lido
    """
    try:
        with open(caminho, 'rb') as f:
            return f.read()
    except OSError as e:
        raise DatasetIOError(str(caminho), e.strerror or str(e))


def write_bytes(caminho: PathLike, conteudo: bytes) -> Path:
    """
    Grava bytes, criando o diretório pai se preciso.

    Raises:
        ArtifactWriteError: Se o arquivo não puder ser gravado
    """
    destino = ensure_parent(Path(caminho))
    try:
        with open(destino, 'wb') as f:
            f.write(conteudo)
    except OSError as e:
        raise ArtifactWriteError(str(destino), e.strerror or str(e))
    logger.debug(f"Artefato gravado: {destino} ({len(conteudo)} bytes)")
    return destino


def dataframe_to_csv_bytes(df: pd.DataFrame, header_lines: Optional[List[str]] = None) -> bytes:
    """Serializa um DataFrame como CSV precedido de linhas de comentário"""
    buffer = io.StringIO()
    for linha in header_lines or []:
        buffer.write(linha + "\n")
    df.to_csv(buffer, index=False, lineterminator="\n", na_rep="nan")
    return buffer.getvalue().encode('utf-8')


def write_csv(caminho: PathLike, df: pd.DataFrame, header_lines: Optional[List[str]] = None) -> Path:
    return write_bytes(caminho, dataframe_to_csv_bytes(df, header_lines))


def read_csv(caminho: PathLike) -> pd.DataFrame:
    """
    Lê um CSV de relatório ignorando as linhas '# ...'.

    Raises:
        DatasetIOError: Se o arquivo não puder ser lido ou interpretado
    """
    try:
        return pd.read_csv(caminho, comment='#')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetIOError(str(caminho), str(e))


def read_comment_lines(caminho: PathLike) -> List[str]:
    """Linhas '# ...' do início de um CSV de relatório"""
    texto = read_bytes(caminho).decode('utf-8', errors='replace')
    linhas = []
    for linha in texto.splitlines():
        if not linha.startswith('#'):
            break
        linhas.append(linha)
    return linhas
