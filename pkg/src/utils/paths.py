"""
Resolução centralizada de caminhos.
"""

import os
from pathlib import Path

from .exceptions import ArtifactWriteError


def get_base_path() -> Path:
    """Retorna o diretório raiz do projeto (dois níveis acima de src/utils/)"""
    return Path(__file__).parent.parent.parent


def ensure_parent(caminho: Path) -> Path:
    """
    Garante que o diretório pai do artefato exista.

    Raises:
        ArtifactWriteError: Se o diretório não puder ser criado
    """
    try:
        os.makedirs(caminho.parent, exist_ok=True)
    except OSError as e:
        raise ArtifactWriteError(str(caminho), e.strerror or str(e))
    return caminho
